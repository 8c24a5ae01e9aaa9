"""Optimal minimum-error state discrimination in finitely generated GPTs.

The package solves the measurement (primal) and symmetry-operator
(dual) problems of minimum-error discrimination over polyhedral state
and effect cones, certifies optimality through KKT residual reports,
exposes the congruent-polytope geometry of optimal solutions, and ships
the regular-polygon model family with its worked examples.
"""

from .cone import PolyhedralCone, cone_ge, cones_equal, dual_cone, member_of, same_generator_set
from .discrimination import (
    ComplementaryPair,
    DiscriminationSolution,
    KktReport,
    build_dual,
    build_primal,
    no_measurement_value,
    solve_discrimination,
    verify_kkt,
)
from .errors import (
    GptDiscError,
    InternalInconsistencyError,
    InvalidInputError,
    NumericalFailureError,
    PreconditionError,
    UndefinedRatioError,
    UnsupportedDimensionError,
    UnsupportedSizeError,
)
from .geometry import CongruenceReport, congruence_check, ratio_r, symmetric_axis_k
from .lp import LpProblem, LpSolution, check_certificate, feasibility_gap, solve_lp
from .model import (
    DEFAULT_TOL,
    Ensemble,
    GptModel,
    Measurement,
    ValidationReport,
    evaluate,
    validate_ensemble,
    validate_model,
)
from .oracle import OracleResult, brute_force_lp, dual_vertex_enumeration, primal_random_search
from .polygon import (
    DemoN4Result,
    ThresholdScan,
    demo_n3,
    demo_n4,
    demo_no_measurement,
    no_measurement_ensemble,
    polygon_model,
    polygon_radius,
    threshold_scan,
    uniform_vertex_ensemble,
)

__version__ = "0.1.0"

__all__ = [
    "PolyhedralCone",
    "cone_ge",
    "cones_equal",
    "dual_cone",
    "member_of",
    "same_generator_set",
    "ComplementaryPair",
    "DiscriminationSolution",
    "KktReport",
    "build_dual",
    "build_primal",
    "no_measurement_value",
    "solve_discrimination",
    "verify_kkt",
    "GptDiscError",
    "InternalInconsistencyError",
    "InvalidInputError",
    "NumericalFailureError",
    "PreconditionError",
    "UndefinedRatioError",
    "UnsupportedDimensionError",
    "UnsupportedSizeError",
    "CongruenceReport",
    "congruence_check",
    "ratio_r",
    "symmetric_axis_k",
    "LpProblem",
    "LpSolution",
    "check_certificate",
    "feasibility_gap",
    "solve_lp",
    "DEFAULT_TOL",
    "Ensemble",
    "GptModel",
    "Measurement",
    "ValidationReport",
    "evaluate",
    "validate_ensemble",
    "validate_model",
    "OracleResult",
    "brute_force_lp",
    "dual_vertex_enumeration",
    "primal_random_search",
    "DemoN4Result",
    "ThresholdScan",
    "demo_n3",
    "demo_n4",
    "demo_no_measurement",
    "no_measurement_ensemble",
    "polygon_model",
    "polygon_radius",
    "threshold_scan",
    "uniform_vertex_ensemble",
]

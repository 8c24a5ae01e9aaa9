"""Geometric structure of optimal solutions.

At optimum the polytope of scaled given states ``q_x w_x`` and the
polytope of scaled complementary states ``r_x d_x`` are congruent:
corresponding edges are equal-length and anti-parallel,

    q_x w_x - q_y w_y = r_y d_y - r_x d_x   for all x, y.

For uniform priors the common weight ``r`` equals the edge-length ratio
of the two polytopes and the guessing probability is ``1/N + r``.  Norms
here are Euclidean on ambient coordinates; at optimum the ratio is
norm-independent because the difference vectors are anti-parallel.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .discrimination import DiscriminationSolution
from .errors import InvalidInputError, PreconditionError, UndefinedRatioError
from .model import DEFAULT_TOL, Ensemble, evaluate


@dataclass(frozen=True)
class CongruenceReport:
    """Worst pairwise congruence residual and the edge-length ratio statistics."""

    max_residual: float
    ratio: float | None
    ratio_spread: float
    skipped: tuple[int, ...]


def congruence_check(solution: DiscriminationSolution, tol: float = DEFAULT_TOL) -> CongruenceReport:
    """Check edge congruence of the given-state and complementary polytopes.

    Degenerate complementary pairs cannot contribute a vertex and are
    skipped; their indices are reported.
    """
    ens = solution.ensemble
    dim = ens.model.dim
    skipped = tuple(i for i, pair in enumerate(solution.complementary) if pair.degenerate)
    active = [i for i in range(ens.n_states) if i not in skipped]
    weighted = ens.weighted_states()
    max_residual = 0.0
    ratios = []
    for x, y in combinations(active, 2):
        state_edge = weighted[x] - weighted[y]
        rd_x = solution.complementary[x].scaled(dim)
        rd_y = solution.complementary[y].scaled(dim)
        residual = float(np.linalg.norm(state_edge + rd_x - rd_y))
        max_residual = max(max_residual, residual)
        d_edge = float(np.linalg.norm(solution.complementary[x].d - solution.complementary[y].d))
        if d_edge > tol:
            ratios.append(float(np.linalg.norm(state_edge)) / d_edge)
    if ratios:
        ratio = float(np.mean(ratios))
        spread = float(max(ratios) - min(ratios))
    else:
        ratio = None
        spread = 0.0
    return CongruenceReport(max_residual=max_residual, ratio=ratio, ratio_spread=spread, skipped=skipped)


def ratio_r(solution: DiscriminationSolution, tol: float = DEFAULT_TOL) -> float:
    """Edge-length ratio of the two polytopes for a uniform-prior solution.

    Verified identical across all admissible vertex pairs and
    cross-checked against ``p_guess - 1/N``; disagreement means the
    supplied solution is not optimal.
    """
    ens = solution.ensemble
    n = ens.n_states
    if float(np.max(np.abs(ens.priors - 1.0 / n))) > tol:
        raise PreconditionError("ratio is defined for uniform priors only")
    active = [i for i in range(n) if not solution.complementary[i].degenerate]
    ratios = []
    for x, y in combinations(active, 2):
        d_edge = float(np.linalg.norm(solution.complementary[x].d - solution.complementary[y].d))
        if d_edge <= tol:
            continue
        state_edge = float(np.linalg.norm(ens.states[x] - ens.states[y])) / n
        ratios.append(state_edge / d_edge)
    if not ratios:
        raise UndefinedRatioError("all complementary vertex pairs are degenerate or coincident")
    spread = max(ratios) - min(ratios)
    if spread > tol:
        raise InvalidInputError(f"per-pair ratios disagree (spread {spread:g}); solution is not optimal")
    value = float(np.mean(ratios))
    if abs(value - (solution.p_guess - 1.0 / n)) > tol:
        raise InvalidInputError(
            f"ratio {value:g} does not match p_guess - 1/N = {solution.p_guess - 1.0 / n:g}"
        )
    return value


def symmetric_axis_k(ensemble: Ensemble, axis, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Closed-form dual-feasible operator ``K`` along a strictly interior axis.

    Scales ``axis`` by the smallest factor making ``K >= q_x w_x`` for
    every state, which is the largest ratio ``g[q_x w_x] / g[axis]`` over
    effect generators and states.  The result is always dual feasible; it
    is optimal when the ensemble has a transitive symmetry fixing the
    axis, which the caller should confirm through the KKT report.
    """
    direction = np.asarray(axis, dtype=float)
    model = ensemble.model
    if direction.shape != (model.dim,):
        raise InvalidInputError(f"axis must have {model.dim} coordinates")
    if abs(evaluate(model.unit_effect, direction) - 1.0) > tol:
        raise PreconditionError("axis must be normalized (u[axis] = 1)")
    gen_values = model.effect_gens @ direction
    if gen_values.size == 0 or float(gen_values.min()) <= tol:
        raise PreconditionError("axis must be strictly interior (g[axis] > 0 for every effect generator)")
    targets = ensemble.weighted_states() @ model.effect_gens.T  # (x, j) -> g_j[q_x w_x]
    scale = float((targets / gen_values[None, :]).max())
    k = scale * direction
    k.setflags(write=False)
    return k

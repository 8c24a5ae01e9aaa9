"""Optimal discrimination: primal/dual linear programs and KKT certificates.

The primal problem maximizes the average success probability
``sum_x q_x e_x[w_x]`` over measurements; its dual minimizes ``u[K]``
over operators ``K`` dominating every ``q_x w_x`` in the effect order.
Strong duality holds (the uniform measurement ``e_x = u/N`` is strictly
feasible), so both solves must agree and the dual optimum is the
guessing probability.

The symmetry operator decomposes as ``K = q_x w_x + r_x d_x`` for every
outcome, with ``r_x = u[K] - q_x`` and the complementary state ``d_x``
normalized; optimal effects are orthogonal to their complementary
states.  Those two facts are what :func:`verify_kkt` re-checks from
scratch on untrusted solutions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cone import cone_ge, member_of
from .errors import InternalInconsistencyError, InvalidInputError
from .lp import OPTIMAL, LpProblem, solve_lp
from .model import DEFAULT_TOL, Ensemble, Measurement, validate_ensemble


@dataclass(frozen=True)
class ComplementaryPair:
    """Weight ``r`` and normalized complementary state ``d`` for one outcome.

    ``d`` is None when the pair is degenerate (``r`` below tolerance), in
    which case ``r d`` is the zero vector.
    """

    r: float
    d: np.ndarray | None

    @property
    def degenerate(self) -> bool:
        return self.d is None

    def scaled(self, dim: int) -> np.ndarray:
        """The unnormalized vector ``r * d`` (zero for degenerate pairs)."""
        if self.d is None:
            return np.zeros(dim)
        return self.r * self.d


@dataclass(frozen=True)
class DiscriminationSolution:
    """Optimal discrimination data: value, measurement, symmetry operator, pairs."""

    ensemble: Ensemble
    p_guess: float
    measurement: Measurement
    symmetry_operator: np.ndarray
    complementary: tuple[ComplementaryPair, ...]
    primal_objective: float
    dual_objective: float


@dataclass(frozen=True)
class KktReport:
    """Residuals of every optimality condition, recomputed from scratch."""

    stability_residuals: np.ndarray
    positivity_ok: tuple[bool, ...]
    orthogonality_residuals: np.ndarray
    measurement_residual: float
    gap: float
    effects_in_cone: tuple[bool, ...]

    def passes(self, tol: float = DEFAULT_TOL) -> bool:
        return (
            bool(np.all(self.stability_residuals <= tol))
            and all(self.positivity_ok)
            and bool(np.all(self.orthogonality_residuals <= tol))
            and self.measurement_residual <= tol
            and self.gap <= tol
            and all(self.effects_in_cone)
        )


def build_primal(ensemble: Ensemble) -> LpProblem:
    """Measurement LP over nonnegative generator coefficients.

    Variables are coefficients ``c[x, j]`` with ``e_x = sum_j c[x,j] g_j``;
    the d equality rows force ``sum_x e_x = u`` coordinatewise, and the
    objective is the negated average success probability (standard form
    minimizes).
    """
    gens = ensemble.model.effect_gens
    n, g = ensemble.n_states, gens.shape[0]
    success = ensemble.states @ gens.T  # (x, j) -> g_j[w_x]
    objective = -(ensemble.priors[:, None] * success).reshape(n * g)
    eq_matrix = np.tile(gens.T, n)  # column x*g + j carries g_j
    return LpProblem(objective, eq_matrix, ensemble.model.unit_effect)


def build_dual(ensemble: Ensemble) -> LpProblem:
    """Symmetry-operator LP: minimize ``u[K]`` subject to ``K >= q_x w_x``.

    ``K`` is split into positive and negative parts for standard form;
    each (state, effect-generator) pair contributes one inequality row
    ``g_j[K - q_x w_x] >= 0``.
    """
    gens = ensemble.model.effect_gens
    weighted = ensemble.weighted_states()  # (n, d)
    # g_j[K] >= g_j[q_x w_x]  <=>  -g_j[K] <= -g_j[q_x w_x]; rows ordered x-major.
    rows = np.concatenate([-gens, gens], axis=1)  # acting on [K+, K-]
    ub_matrix = np.tile(rows, (ensemble.n_states, 1))
    ub_rhs = -(weighted @ gens.T).reshape(-1)
    u = ensemble.model.unit_effect
    objective = np.concatenate([u, -u])
    return LpProblem.with_inequalities(objective, ub_matrix=ub_matrix, ub_rhs=ub_rhs)


def measurement_from_primal(ensemble: Ensemble, x: np.ndarray) -> Measurement:
    """Reconstruct effect coordinates from primal coefficient values."""
    gens = ensemble.model.effect_gens
    coeffs = np.asarray(x, dtype=float)[: ensemble.n_states * gens.shape[0]]
    return Measurement(coeffs.reshape(ensemble.n_states, gens.shape[0]) @ gens)


def symmetry_operator_from_dual(ensemble: Ensemble, x: np.ndarray) -> np.ndarray:
    """Recombine the split dual variable into ``K``."""
    d = ensemble.model.dim
    return np.asarray(x, dtype=float)[:d] - np.asarray(x, dtype=float)[d : 2 * d]


def no_measurement_value(ensemble: Ensemble) -> float:
    """Value of guessing the most likely state with the trivial measurement."""
    return float(ensemble.priors.max())


def solve_discrimination(ensemble: Ensemble, tol: float = DEFAULT_TOL) -> DiscriminationSolution:
    """Solve both discrimination problems and assemble the full certificate.

    Raises :class:`InvalidInputError` when the ensemble fails validation
    and :class:`InternalInconsistencyError` when the two solves disagree
    beyond ``10 * tol`` (impossible for a correct solver: strong duality
    holds for every valid ensemble).
    """
    check = validate_ensemble(ensemble, tol=max(tol, 1e-12))
    if not check.valid:
        raise InvalidInputError("; ".join(check.issues))

    primal = solve_lp(build_primal(ensemble), tol=tol)
    dual = solve_lp(build_dual(ensemble), tol=tol)
    if primal.status != OPTIMAL or dual.status != OPTIMAL:
        raise InternalInconsistencyError(
            f"discrimination LPs must be solvable (primal {primal.status}, dual {dual.status})"
        )
    primal_value = -float(primal.objective)
    dual_value = float(dual.objective)
    if abs(primal_value - dual_value) > 10.0 * tol:
        raise InternalInconsistencyError(
            f"strong duality violated: primal {primal_value!r} vs dual {dual_value!r}"
        )

    measurement = measurement_from_primal(ensemble, primal.x)
    k = symmetry_operator_from_dual(ensemble, dual.x)
    u = ensemble.model.unit_effect
    p_guess = float(u @ k)
    if p_guess < no_measurement_value(ensemble) - 10.0 * tol or p_guess > 1.0 + 10.0 * tol:
        raise InternalInconsistencyError(f"guessing probability {p_guess!r} outside sandwich bound")

    pairs = []
    for q, w in zip(ensemble.priors, ensemble.states):
        r = p_guess - float(q)
        if r <= tol:
            pairs.append(ComplementaryPair(r=r, d=None))
        else:
            d_state = (k - q * w) / r
            d_state.setflags(write=False)
            pairs.append(ComplementaryPair(r=r, d=d_state))

    k = k.copy()
    k.setflags(write=False)
    return DiscriminationSolution(
        ensemble=ensemble,
        p_guess=p_guess,
        measurement=measurement,
        symmetry_operator=k,
        complementary=tuple(pairs),
        primal_objective=primal_value,
        dual_objective=dual_value,
    )


def verify_kkt(
    ensemble: Ensemble, solution: DiscriminationSolution, tol: float = DEFAULT_TOL
) -> KktReport:
    """Recompute every optimality residual of ``solution`` from scratch.

    Works on untrusted solutions: nothing from the solver is assumed, all
    quantities are derived from the ensemble, the measurement, ``K`` and
    the complementary pairs.  A passing report certifies optimality
    (KKT conditions are sufficient here because strong duality holds).
    """
    model = ensemble.model
    dim = model.dim
    k = np.asarray(solution.symmetry_operator, dtype=float)
    effects = solution.measurement.effects
    if effects.shape != (ensemble.n_states, dim) or k.shape != (dim,):
        raise InvalidInputError("solution shapes do not match the ensemble")
    if len(solution.complementary) != ensemble.n_states:
        raise InvalidInputError("one complementary pair per state is required")

    stability = np.empty(ensemble.n_states)
    orthogonality = np.empty(ensemble.n_states)
    positivity = []
    in_cone = []
    for x in range(ensemble.n_states):
        q, w = float(ensemble.priors[x]), ensemble.states[x]
        rd = solution.complementary[x].scaled(dim)
        stability[x] = float(np.linalg.norm(k - q * w - rd))
        orthogonality[x] = abs(float(effects[x] @ rd))
        positivity.append(cone_ge(k, q * w, model.effect_cone, tol))
        in_cone.append(member_of(model.effect_cone, effects[x], tol))

    measurement_residual = float(np.linalg.norm(effects.sum(axis=0) - model.unit_effect))
    primal_value = float(np.sum(ensemble.priors * np.einsum("xd,xd->x", effects, ensemble.states)))
    gap = abs(primal_value - float(model.unit_effect @ k))
    return KktReport(
        stability_residuals=stability,
        positivity_ok=tuple(positivity),
        orthogonality_residuals=orthogonality,
        measurement_residual=measurement_residual,
        gap=gap,
        effects_in_cone=tuple(in_cone),
    )

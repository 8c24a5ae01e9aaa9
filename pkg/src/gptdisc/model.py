"""GPT models, ensembles and measurements, plus framework-axiom validation.

A model is an ambient dimension ``d``, a finite set of extremal
normalized states, a finite set of extremal effects, and the unit
effect ``u``.  States pair with effects through the Euclidean inner
product; valid effects map every state into ``[0, 1]`` and measurements
are effect lists summing to ``u``.

States are stored normalized (``u[w] = 1``); validation reports
unnormalized inputs as errors instead of silently rescaling them.  The
effect cone is the one generated by the *supplied* effect generators;
validation additionally reports whether that cone coincides with the
full dual of the state cone (the unrestricted-effects reading).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .cone import PolyhedralCone, cones_equal, dual_cone, member_of
from .errors import InvalidInputError
from .lp import feasibility_gap

DEFAULT_TOL = 1e-9


def _point(value, name: str) -> np.ndarray:
    arr = np.asarray(value, dtype=float)
    if arr.ndim != 1:
        raise InvalidInputError(f"{name} must be a flat coordinate list, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError(f"{name} contains non-finite coordinates")
    return arr


def _point_rows(value, name: str, dim: int) -> np.ndarray:
    arr = np.asarray(value, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != dim:
        raise InvalidInputError(f"{name} must have shape (k, {dim}), got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError(f"{name} contains non-finite coordinates")
    arr = arr.copy()
    arr.setflags(write=False)
    return arr


def evaluate(effect, state) -> float:
    """Probability pairing of an effect and a state (Euclidean inner product)."""
    e = _point(effect, "effect")
    w = _point(state, "state")
    if e.shape != w.shape:
        raise InvalidInputError(f"dimension mismatch: effect has {e.shape[0]}, state has {w.shape[0]}")
    return float(e @ w)


@dataclass(frozen=True)
class GptModel:
    """A finitely generated GPT: state/effect cone generators and the unit effect."""

    dim: int
    state_gens: np.ndarray
    effect_gens: np.ndarray
    unit_effect: np.ndarray

    def __post_init__(self):
        if self.dim <= 0:
            raise InvalidInputError("ambient dimension must be positive")
        object.__setattr__(self, "state_gens", _point_rows(self.state_gens, "state_gens", self.dim))
        object.__setattr__(self, "effect_gens", _point_rows(self.effect_gens, "effect_gens", self.dim))
        u = _point(self.unit_effect, "unit_effect")
        if u.shape != (self.dim,):
            raise InvalidInputError(f"unit_effect must have {self.dim} coordinates")
        u = u.copy()
        u.setflags(write=False)
        object.__setattr__(self, "unit_effect", u)

    @cached_property
    def state_cone(self) -> PolyhedralCone:
        return PolyhedralCone(self.dim, self.state_gens)

    @cached_property
    def effect_cone(self) -> PolyhedralCone:
        return PolyhedralCone(self.dim, self.effect_gens)


@dataclass(frozen=True)
class Ensemble:
    """A discrimination instance: N states of a model with prior probabilities."""

    model: GptModel
    states: np.ndarray
    priors: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "states", _point_rows(self.states, "states", self.model.dim))
        priors = _point(self.priors, "priors")
        if priors.shape[0] != self.states.shape[0]:
            raise InvalidInputError(
                f"{priors.shape[0]} priors supplied for {self.states.shape[0]} states"
            )
        priors = priors.copy()
        priors.setflags(write=False)
        object.__setattr__(self, "priors", priors)

    @property
    def n_states(self) -> int:
        return self.states.shape[0]

    def weighted_states(self) -> np.ndarray:
        """The scaled states ``q_x w_x`` as rows."""
        return self.priors[:, None] * self.states


@dataclass(frozen=True)
class Measurement:
    """An N-outcome measurement: effects indexed by the guessed state label."""

    effects: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.effects, dtype=float)
        if arr.ndim != 2:
            raise InvalidInputError(f"effects must be a 2-d array, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise InvalidInputError("effects contain non-finite coordinates")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "effects", arr)

    @property
    def n_outcomes(self) -> int:
        return self.effects.shape[0]


@dataclass
class ValidationReport:
    """Violated invariants (issues) and soft findings (warnings); empty issues means valid."""

    issues: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    unrestricted_effects: bool | None = None

    @property
    def valid(self) -> bool:
        return not self.issues


def _pointed(generators: np.ndarray, dim: int, tol: float) -> bool:
    # Pointed iff no nonzero nonnegative combination of generators vanishes.
    if generators.shape[0] == 0:
        return True
    a = np.vstack([generators.T, np.ones((1, generators.shape[0]))])
    b = np.zeros(dim + 1)
    b[-1] = 1.0
    return feasibility_gap(a, b, tol=tol) > tol


def validate_model(model: GptModel, tol: float = DEFAULT_TOL) -> ValidationReport:
    """Check every framework axiom of a model; all problems are reported, never raised.

    Also reports whether the supplied effect cone equals the full dual of
    the state cone (only possible at dual-cone desk dimensions; above
    that the check is skipped with a warning).
    """
    report = ValidationReport()
    u = model.unit_effect
    for i, w in enumerate(model.state_gens):
        residual = abs(float(u @ w) - 1.0)
        if residual > tol:
            report.issues.append(f"u[w]=1 violated for state generator {i}, residual {residual:g}")
    for j, g in enumerate(model.effect_gens):
        values = model.state_gens @ g
        low = int(np.argmin(values)) if values.size else 0
        high = int(np.argmax(values)) if values.size else 0
        if values.size and values[low] < -tol:
            report.issues.append(
                f"effect generator {j} negative on state generator {low}, value {values[low]:g}"
            )
        if values.size and values[high] > 1.0 + tol:
            report.issues.append(
                f"effect generator {j} exceeds 1 on state generator {high}, value {values[high]:g}"
            )
    if not member_of(model.effect_cone, u, tol):
        report.issues.append("unit effect is not in the cone of the effect generators")
    if not _pointed(model.state_gens, model.dim, tol):
        report.issues.append(
            "state cone is not pointed (a nonzero nonnegative combination of generators vanishes)"
        )
    rank = int(np.linalg.matrix_rank(model.state_gens)) if model.state_gens.size else 0
    if rank < model.dim:
        report.warnings.append(
            f"state cone is not full-dimensional (rank {rank} < {model.dim})"
        )
    if model.dim <= 8:
        full_dual = dual_cone(model.state_cone)
        report.unrestricted_effects = cones_equal(model.effect_cone, full_dual, tol)
        if report.unrestricted_effects is False:
            report.warnings.append(
                "effect cone differs from the full dual of the state cone (restricted effects)"
            )
    else:
        report.warnings.append("unrestricted-effects check skipped (dimension above dual-cone bound)")
    return report


def validate_ensemble(ensemble: Ensemble, tol: float = DEFAULT_TOL) -> ValidationReport:
    """Check prior-simplex membership and per-state validity; assumes the model itself was validated."""
    report = ValidationReport()
    priors = ensemble.priors
    for i, q in enumerate(priors):
        if q < -tol:
            report.issues.append(f"prior {i} negative ({q:g})")
    total = float(priors.sum())
    if abs(total - 1.0) > tol:
        report.issues.append(f"priors sum {total:g}")
    u = ensemble.model.unit_effect
    for i, w in enumerate(ensemble.states):
        residual = abs(float(u @ w) - 1.0)
        if residual > tol:
            report.issues.append(f"state {i} is not normalized (u[w] residual {residual:g})")
        if not member_of(ensemble.model.state_cone, w, tol):
            report.issues.append(f"state {i} is outside the state cone")
    return report

"""Polyhedral cone utilities: membership, dual cones, and the effect order.

Cones are kept in generator (V-) representation.  Membership is decided
by an LP feasibility solve, so no facet enumeration is ever required;
dual cones are computed with the double-description method, which is
exact in structure at desk dimensions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError, UnsupportedDimensionError
from .lp import feasibility_gap

#: Double description is restricted to desk-scale ambient dimensions.
MAX_DUAL_DIM = 8

_ZERO_NORM = 1e-12
_PARALLEL_COS = 1.0 - 1e-12


def _dedupe_rays(rays: np.ndarray) -> np.ndarray:
    """Drop zero rays and rays that duplicate an earlier one up to positive scale."""
    kept: list[np.ndarray] = []
    units: list[np.ndarray] = []
    for ray in rays:
        norm = float(np.linalg.norm(ray))
        if norm <= _ZERO_NORM:
            continue
        unit = ray / norm
        if any(float(unit @ seen) >= _PARALLEL_COS for seen in units):
            continue
        kept.append(ray)
        units.append(unit)
    if not kept:
        return np.zeros((0, rays.shape[1]))
    return np.array(kept)


@dataclass(frozen=True)
class PolyhedralCone:
    """Convex cone generated by nonnegative combinations of ``generators``."""

    dim: int
    generators: np.ndarray

    def __post_init__(self):
        if self.dim <= 0:
            raise InvalidInputError("cone dimension must be positive")
        gens = np.asarray(self.generators, dtype=float)
        if gens.size == 0:
            gens = np.zeros((0, self.dim))
        if gens.ndim != 2 or gens.shape[1] != self.dim:
            raise InvalidInputError(
                f"generators must have shape (k, {self.dim}), got {gens.shape}"
            )
        if not np.all(np.isfinite(gens)):
            raise InvalidInputError("generators contain non-finite entries")
        gens = _dedupe_rays(gens)
        gens.setflags(write=False)
        object.__setattr__(self, "generators", gens)

    @property
    def n_generators(self) -> int:
        return self.generators.shape[0]


def member_of(cone: PolyhedralCone, v, tol: float = 1e-9) -> bool:
    """True iff ``v`` is a nonnegative combination of the cone generators within ``tol``.

    Decided by an LP feasibility solve (smallest L1 residual), so it does
    not require facets of the cone.
    """
    vec = np.asarray(v, dtype=float)
    if vec.shape != (cone.dim,):
        raise InvalidInputError(f"vector has shape {vec.shape}, expected ({cone.dim},)")
    if cone.n_generators == 0:
        return float(np.abs(vec).sum()) <= tol
    gap = feasibility_gap(cone.generators.T, vec, tol=min(tol, 1e-9))
    return gap <= tol


def cone_ge(v, w, test_cone: PolyhedralCone, tol: float = 1e-9) -> bool:
    """Order relation induced by ``test_cone``: ``v >= w`` iff ``g.(v-w) >= -tol`` for every generator ``g``."""
    a = np.asarray(v, dtype=float)
    b = np.asarray(w, dtype=float)
    if a.shape != (test_cone.dim,) or b.shape != (test_cone.dim,):
        raise InvalidInputError("dimension mismatch in cone_ge")
    if test_cone.n_generators == 0:
        return True
    return bool(np.min(test_cone.generators @ (a - b)) >= -tol)


def _prune_redundant(rays: np.ndarray, dim: int) -> np.ndarray:
    """Greedily drop rays that are nonnegative combinations of the others."""
    rays = _dedupe_rays(rays)
    keep = list(range(rays.shape[0]))
    i = 0
    while i < len(keep):
        others = [k for k in keep if k != keep[i]]
        if others:
            sub = PolyhedralCone(dim, rays[others])
            if member_of(sub, rays[keep[i]], tol=1e-9):
                keep.pop(i)
                continue
        i += 1
    return rays[keep]


def dual_cone(cone: PolyhedralCone) -> PolyhedralCone:
    """Generators of ``{y : y . g >= 0 for every generator g}`` via double description.

    Output rays are normalized to unit Euclidean length.  For pointed
    full-dimensional cones, applying this twice recovers the original
    generator set up to positive scaling and ordering.
    """
    if cone.dim > MAX_DUAL_DIM:
        raise UnsupportedDimensionError(
            f"dual cone computation supports dim <= {MAX_DUAL_DIM}, got {cone.dim}"
        )
    d = cone.dim
    # Start from all of R^d and cut with one halfspace per generator.
    rays = np.vstack([np.eye(d), -np.eye(d)])
    for normal in cone.generators:
        scale = float(np.linalg.norm(normal))
        products = rays @ (normal / scale)
        plus = rays[products > _ZERO_NORM]
        zero = rays[np.abs(products) <= _ZERO_NORM]
        minus = rays[products < -_ZERO_NORM]
        pieces = [plus, zero]
        if plus.size and minus.size:
            pp = products[products > _ZERO_NORM]
            pm = products[products < -_ZERO_NORM]
            # Combinations p,m with normal.(combo) = 0.
            combos = pp[:, None, None] * minus[None, :, :] - pm[None, :, None] * plus[:, None, :]
            pieces.append(combos.reshape(-1, d))
        rays = np.vstack([p for p in pieces if p.size]) if any(p.size for p in pieces) else np.zeros((0, d))
        if rays.size:
            norms = np.linalg.norm(rays, axis=1)
            rays = rays[norms > _ZERO_NORM] / norms[norms > _ZERO_NORM, None]
        rays = _prune_redundant(rays, d)
    return PolyhedralCone(d, rays)


def cones_equal(a: PolyhedralCone, b: PolyhedralCone, tol: float = 1e-9) -> bool:
    """Set equality of two cones, decided by mutual generator membership."""
    if a.dim != b.dim:
        raise InvalidInputError("cones live in different dimensions")
    return all(member_of(b, g, tol) for g in a.generators) and all(
        member_of(a, g, tol) for g in b.generators
    )


def same_generator_set(a: PolyhedralCone, b: PolyhedralCone, tol: float = 1e-9) -> bool:
    """True iff the generator sets coincide up to positive scaling and order."""
    if a.dim != b.dim or a.n_generators != b.n_generators:
        return False
    if a.n_generators == 0:
        return True
    ua = a.generators / np.linalg.norm(a.generators, axis=1, keepdims=True)
    ub = b.generators / np.linalg.norm(b.generators, axis=1, keepdims=True)
    unmatched = list(range(ub.shape[0]))
    for ga in ua:
        hit = next((k for k in unmatched if np.linalg.norm(ga - ub[k]) <= tol), None)
        if hit is None:
            return False
        unmatched.remove(hit)
    return True

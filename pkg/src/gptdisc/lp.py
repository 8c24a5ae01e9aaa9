"""Dense two-phase simplex solver with primal/dual optimality certificates.

Problems are kept in standard form (minimize ``c . x`` subject to
``A x = b``, ``x >= 0``); inequality rows can be absorbed through
:meth:`LpProblem.with_inequalities`, which appends slack variables.

The pivot rule is Bland's (lowest eligible index enters, ratio ties broken
by lowest basis index), which guarantees termination in exact arithmetic
and makes every solve deterministic.  Pivot magnitudes below
``PIVOT_FLOOR`` are never used; an entering column whose positive entries
all sit below the floor is skipped.  Sizes are desk scale (tens of
variables), so everything is dense numpy.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError, NumericalFailureError

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

#: Reduced costs above -REDUCED_COST_TOL are treated as nonnegative.
REDUCED_COST_TOL = 1e-12
#: Pivot entries at or below this magnitude are never pivoted on.
PIVOT_FLOOR = 1e-12

_MAX_ITER = 20_000


def _as_float_array(value, name: str, ndim: int) -> np.ndarray:
    arr = np.asarray(value, dtype=float)
    if arr.ndim != ndim:
        raise InvalidInputError(f"{name} must be {ndim}-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError(f"{name} contains non-finite entries")
    arr = arr.copy()
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class LpProblem:
    """Standard-form linear program: minimize ``objective . x`` s.t. ``eq_matrix x = eq_rhs``, ``x >= 0``."""

    objective: np.ndarray
    eq_matrix: np.ndarray
    eq_rhs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "objective", _as_float_array(self.objective, "objective", 1))
        object.__setattr__(self, "eq_matrix", _as_float_array(self.eq_matrix, "eq_matrix", 2))
        object.__setattr__(self, "eq_rhs", _as_float_array(self.eq_rhs, "eq_rhs", 1))
        m, n = self.eq_matrix.shape
        if self.objective.shape != (n,):
            raise InvalidInputError(
                f"objective has {self.objective.shape[0]} entries but eq_matrix has {n} columns"
            )
        if self.eq_rhs.shape != (m,):
            raise InvalidInputError(
                f"eq_rhs has {self.eq_rhs.shape[0]} entries but eq_matrix has {m} rows"
            )

    @property
    def n_vars(self) -> int:
        return self.eq_matrix.shape[1]

    @property
    def n_rows(self) -> int:
        return self.eq_matrix.shape[0]

    @classmethod
    def with_inequalities(
        cls,
        objective,
        eq_matrix=None,
        eq_rhs=None,
        ub_matrix=None,
        ub_rhs=None,
    ) -> "LpProblem":
        """Build a standard-form problem from equality and ``<=`` rows.

        One slack variable (zero objective coefficient) is appended per
        inequality row.  ``>=`` rows must be negated by the caller.
        """
        c = np.atleast_1d(np.asarray(objective, dtype=float))
        n = c.shape[0]
        blocks = []
        rhs_parts = []
        if eq_matrix is not None:
            a_eq = np.atleast_2d(np.asarray(eq_matrix, dtype=float))
            blocks.append((a_eq, None))
            rhs_parts.append(np.atleast_1d(np.asarray(eq_rhs, dtype=float)))
        if ub_matrix is not None:
            a_ub = np.atleast_2d(np.asarray(ub_matrix, dtype=float))
            blocks.append((a_ub, "slack"))
            rhs_parts.append(np.atleast_1d(np.asarray(ub_rhs, dtype=float)))
        if not blocks:
            raise InvalidInputError("at least one of eq_matrix/ub_matrix is required")
        n_slack = sum(a.shape[0] for a, kind in blocks if kind == "slack")
        rows = []
        slack_offset = 0
        for a, kind in blocks:
            m_block = a.shape[0]
            if a.shape[1] != n:
                raise InvalidInputError("constraint block width does not match objective length")
            block = np.zeros((m_block, n + n_slack))
            block[:, :n] = a
            if kind == "slack":
                block[np.arange(m_block), n + slack_offset + np.arange(m_block)] = 1.0
                slack_offset += m_block
            rows.append(block)
        full = np.vstack(rows)
        rhs = np.concatenate(rhs_parts)
        c_full = np.concatenate([c, np.zeros(n_slack)])
        return cls(c_full, full, rhs)


@dataclass(frozen=True)
class LpSolution:
    """Solver output; ``x``/``y``/``reduced_costs`` are None unless optimal."""

    status: str
    x: np.ndarray | None = None
    objective: float | None = None
    y: np.ndarray | None = None
    reduced_costs: np.ndarray | None = None


def _pivot(tableau: np.ndarray, basis: list[int], row: int, col: int) -> None:
    tableau[row] /= tableau[row, col]
    factors = tableau[:, col].copy()
    factors[row] = 0.0
    tableau -= np.outer(factors, tableau[row])
    basis[row] = col


def _run_phase(
    tableau: np.ndarray,
    basis: list[int],
    enter_limit: int,
    max_iter: int,
) -> str:
    """Run simplex iterations on ``tableau`` until optimal or unbounded.

    The last tableau row holds reduced costs, the last column the rhs.
    Only columns below ``enter_limit`` may enter the basis.
    """
    m = len(basis)
    basis_arr = basis  # mutated in place by _pivot
    for _ in range(max_iter):
        reduced = tableau[-1, :enter_limit]
        entering = -1
        leaving = -1
        for j in np.nonzero(reduced < -REDUCED_COST_TOL)[0]:
            column = tableau[:m, j]
            usable = column > PIVOT_FLOOR
            if not usable.any():
                if np.all(column <= 0.0):
                    return UNBOUNDED
                continue  # only near-degenerate pivots available: skip column
            ratios = np.full(m, np.inf)
            ratios[usable] = tableau[:m, -1][usable] / column[usable]
            best = ratios.min()
            ties = np.nonzero(ratios <= best + PIVOT_FLOOR * (1.0 + abs(best)))[0]
            leaving = min(ties, key=lambda i: basis_arr[i])
            entering = int(j)
            break
        if entering < 0:
            return OPTIMAL
        _pivot(tableau, basis, leaving, entering)
    raise NumericalFailureError("simplex iteration guard exceeded (possible cycling)")


def solve_lp(problem: LpProblem, tol: float = 1e-9, max_iter: int = _MAX_ITER) -> LpSolution:
    """Solve a standard-form LP, returning a certified solution.

    On ``optimal`` status the solution satisfies the certificate
    invariants checked by :func:`check_certificate`.  Infeasibility and
    unboundedness are reported through ``status``; only the iteration
    guard raises.
    """
    a_orig = problem.eq_matrix
    b_orig = problem.eq_rhs
    c = problem.objective
    m, n = a_orig.shape

    sign = np.where(b_orig < 0.0, -1.0, 1.0)
    a = a_orig * sign[:, None]
    b = b_orig * sign

    # Phase 1: artificial basis, minimize the sum of artificials.
    tableau = np.zeros((m + 1, n + m + 1))
    tableau[:m, :n] = a
    tableau[:m, n : n + m] = np.eye(m)
    tableau[:m, -1] = b
    tableau[-1, :n] = -a.sum(axis=0)
    tableau[-1, -1] = -b.sum()
    basis = list(range(n, n + m))

    status = _run_phase(tableau, basis, enter_limit=n, max_iter=max_iter)
    if status == UNBOUNDED:
        raise NumericalFailureError("phase-1 problem reported unbounded")
    infeasibility = -tableau[-1, -1]
    if infeasibility > tol:
        return LpSolution(status=INFEASIBLE)

    # Drive leftover artificials out of the basis; rows that cannot be
    # pivoted are redundant and get dropped.
    kept_rows = []
    for i in range(m):
        if basis[i] < n:
            kept_rows.append(i)
            continue
        row = np.abs(tableau[i, :n])
        j = int(np.argmax(row))
        if row[j] > PIVOT_FLOOR:
            _pivot(tableau, basis, i, j)
            kept_rows.append(i)
    m2 = len(kept_rows)

    # Phase 2 tableau: original columns only, fresh reduced costs.
    phase2 = np.zeros((m2 + 1, n + 1))
    phase2[:m2, :n] = tableau[kept_rows, :n]
    phase2[:m2, -1] = tableau[kept_rows, -1]
    basis2 = [basis[i] for i in kept_rows]
    phase2[-1, :n] = c
    for i, bi in enumerate(basis2):
        phase2[-1] -= c[bi] * phase2[i]

    status = _run_phase(phase2, basis2, enter_limit=n, max_iter=max_iter)
    if status == UNBOUNDED:
        return LpSolution(status=UNBOUNDED)

    x = np.zeros(n)
    x[basis2] = phase2[:m2, -1]

    # Dual multipliers from the final basis, mapped back to original rows.
    y = np.zeros(m)
    if m2 > 0:
        basis_matrix = a[kept_rows][:, basis2]
        y_kept = np.linalg.solve(basis_matrix.T, c[basis2])
        y[kept_rows] = y_kept
    y *= sign
    reduced_costs = c - a_orig.T @ y

    x.setflags(write=False)
    y.setflags(write=False)
    reduced_costs.setflags(write=False)
    return LpSolution(
        status=OPTIMAL,
        x=x,
        objective=float(c @ x),
        y=y,
        reduced_costs=reduced_costs,
    )


def check_certificate(problem: LpProblem, solution: LpSolution, tol: float = 1e-9) -> bool:
    """Re-verify the optimality certificate of ``solution`` by direct arithmetic.

    Checks primal feasibility, dual feasibility (reduced costs >= -tol),
    complementary slackness and the duality gap, independently of how the
    solution was produced.
    """
    if solution.status != OPTIMAL:
        return False
    return _certificate_ok(problem, solution, tol)


def _certificate_ok(problem: LpProblem, solution: LpSolution, tol: float) -> bool:
    x = solution.x
    y = solution.y
    if x is None or y is None:
        return False
    a = problem.eq_matrix
    b = problem.eq_rhs
    c = problem.objective
    if np.min(x, initial=0.0) < -tol:
        return False
    if np.max(np.abs(a @ x - b), initial=0.0) > tol:
        return False
    reduced = c - a.T @ y
    if np.min(reduced, initial=0.0) < -tol:
        return False
    if np.max(np.abs(x * reduced), initial=0.0) > tol:
        return False
    if abs(float(c @ x) - float(b @ y)) > tol:
        return False
    return True


def feasibility_gap(eq_matrix, eq_rhs, tol: float = 1e-9) -> float:
    """Smallest L1 residual ``min ||A x - b||_1`` over ``x >= 0``.

    Zero (up to ``tol``) exactly when ``A x = b`` has a nonnegative
    solution.  Used for cone membership and pointedness tests.
    """
    a = np.atleast_2d(np.asarray(eq_matrix, dtype=float))
    b = np.atleast_1d(np.asarray(eq_rhs, dtype=float))
    m, n = a.shape
    elastic = np.hstack([a, np.eye(m), -np.eye(m)])
    cost = np.concatenate([np.zeros(n), np.ones(2 * m)])
    sol = solve_lp(LpProblem(cost, elastic, b), tol=tol)
    if sol.status != OPTIMAL:
        raise NumericalFailureError("elastic feasibility problem did not solve")
    return max(float(sol.objective), 0.0)

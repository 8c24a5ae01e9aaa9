import numpy as np
import pytest
from numpy.testing import assert_allclose

from gptdisc import (
    InvalidInputError,
    LpProblem,
    LpSolution,
    check_certificate,
    feasibility_gap,
    solve_lp,
)
from gptdisc.lp import INFEASIBLE, OPTIMAL, UNBOUNDED
from gptdisc.discrimination import build_dual
from gptdisc.oracle import brute_force_lp
from gptdisc.polygon import uniform_vertex_ensemble


def test_simplex_equality_split():
    sol = solve_lp(LpProblem([1.0, 1.0], [[1.0, 1.0]], [1.0]))
    assert sol.status == OPTIMAL
    assert_allclose(sol.objective, 1.0, atol=1e-12)


def test_inequality_converter_adds_slack():
    prob = LpProblem.with_inequalities([-1.0], ub_matrix=[[1.0]], ub_rhs=[2.0])
    assert prob.n_vars == 2
    sol = solve_lp(prob)
    assert sol.status == OPTIMAL
    assert_allclose(sol.objective, -2.0, atol=1e-12)
    assert_allclose(sol.x[0], 2.0, atol=1e-12)


def test_square_ensemble_dual_value_is_half():
    # Uniform four-state instance: the symmetry-operator LP optimum is 1/2.
    sol = solve_lp(build_dual(uniform_vertex_ensemble(4)))
    assert sol.status == OPTIMAL
    assert_allclose(sol.objective, 0.5, atol=1e-9)


def test_infeasible_reported_by_status():
    sol = solve_lp(LpProblem([0.0], [[1.0], [1.0]], [1.0, 2.0]))
    assert sol.status == INFEASIBLE
    assert sol.x is None


def test_unbounded_reported_by_status():
    sol = solve_lp(LpProblem([-1.0, 0.0], [[0.0, 1.0]], [1.0]))
    assert sol.status == UNBOUNDED


def test_negative_rhs_handled_by_phase_one():
    # -x1 <= -1 means x1 >= 1.
    prob = LpProblem.with_inequalities([1.0], ub_matrix=[[-1.0]], ub_rhs=[-1.0])
    sol = solve_lp(prob)
    assert sol.status == OPTIMAL
    assert_allclose(sol.objective, 1.0, atol=1e-12)


def test_redundant_rows_dropped():
    prob = LpProblem([1.0, 2.0], [[1.0, 1.0], [2.0, 2.0]], [1.0, 2.0])
    sol = solve_lp(prob)
    assert sol.status == OPTIMAL
    assert_allclose(sol.objective, 1.0, atol=1e-12)
    assert check_certificate(prob, sol)


def test_dimension_mismatch_rejected():
    with pytest.raises(InvalidInputError):
        LpProblem([1.0, 2.0], [[1.0]], [1.0])


def test_certificate_accepts_solver_output():
    rng = np.random.default_rng(11)
    for _ in range(25):
        # Nonnegative objective keeps the problem bounded; rhs > 0 keeps x=0 feasible.
        prob = LpProblem.with_inequalities(
            rng.uniform(0, 2, 4),
            ub_matrix=rng.uniform(-2, 2, (5, 4)),
            ub_rhs=rng.uniform(0.5, 3, 5),
        )
        sol = solve_lp(prob)
        assert sol.status == OPTIMAL
        assert check_certificate(prob, sol)


def test_certificate_rejects_perturbed_basic_coordinate():
    prob = LpProblem([1.0, 1.0, 0.0], [[1.0, 2.0, 1.0]], [2.0])
    sol = solve_lp(prob)
    assert sol.status == OPTIMAL
    j = int(np.argmax(sol.x))
    x = sol.x.copy()
    x[j] += 1e-3
    tampered = LpSolution(
        status=sol.status, x=x, objective=sol.objective, y=sol.y, reduced_costs=sol.reduced_costs
    )
    assert not check_certificate(prob, tampered)


def test_certificate_against_enumeration_on_random_three_var_lp():
    rng = np.random.default_rng(3)
    prob = LpProblem.with_inequalities(
        rng.uniform(-2, 2, 3),
        ub_matrix=rng.uniform(-1, 2, (4, 3)),
        ub_rhs=rng.uniform(0.5, 2.5, 4),
    )
    sol = solve_lp(prob)
    status, objective = brute_force_lp(prob)
    assert sol.status == status == OPTIMAL
    assert_allclose(sol.objective, objective, atol=1e-10)
    assert check_certificate(prob, sol)


def test_strong_duality_gap_zero_when_optimal():
    rng = np.random.default_rng(5)
    for _ in range(50):
        prob = LpProblem.with_inequalities(
            rng.uniform(-1, 2, 3),
            ub_matrix=rng.uniform(-2, 2, (4, 3)),
            ub_rhs=rng.uniform(-0.5, 2, 4),
        )
        sol = solve_lp(prob)
        if sol.status == OPTIMAL:
            assert abs(sol.objective - float(prob.eq_rhs @ sol.y)) <= 1e-9


def test_deterministic_bit_for_bit():
    rng = np.random.default_rng(17)
    prob = LpProblem.with_inequalities(
        rng.uniform(-2, 2, 5),
        ub_matrix=rng.uniform(-2, 2, (6, 5)),
        ub_rhs=rng.uniform(-1, 3, 6),
    )
    first = solve_lp(prob)
    second = solve_lp(prob)
    assert first.status == second.status
    if first.status == OPTIMAL:
        assert first.objective == second.objective
        assert np.array_equal(first.x, second.x)
        assert np.array_equal(first.y, second.y)
        assert np.array_equal(first.reduced_costs, second.reduced_costs)


def test_degenerate_vertex_does_not_cycle():
    # Classic degenerate instance: multiple bases describe the optimum.
    prob = LpProblem.with_inequalities(
        [-0.75, 150.0, -0.02, 6.0],
        ub_matrix=[
            [0.25, -60.0, -0.04, 9.0],
            [0.5, -90.0, -0.02, 3.0],
            [0.0, 0.0, 1.0, 0.0],
        ],
        ub_rhs=[0.0, 0.0, 1.0],
    )
    sol = solve_lp(prob)
    assert sol.status == OPTIMAL
    status, objective = brute_force_lp(prob)
    assert status == OPTIMAL
    assert_allclose(sol.objective, objective, atol=1e-9)
    assert_allclose(sol.objective, -0.05, atol=1e-9)
    assert check_certificate(prob, sol)


def test_iteration_guard_raises_numerical_failure():
    from gptdisc import NumericalFailureError

    prob = LpProblem.with_inequalities(
        [-1.0, -2.0, -1.0],
        ub_matrix=[[1.0, 1.0, 0.5], [0.5, 1.0, 1.0]],
        ub_rhs=[2.0, 2.0],
    )
    with pytest.raises(NumericalFailureError):
        solve_lp(prob, max_iter=1)


def test_feasibility_gap_measures_l1_distance():
    # v = (1, -1) cannot be reached from the nonnegative x-axis cone.
    gap = feasibility_gap(np.array([[1.0], [0.0]]), np.array([1.0, -1.0]))
    assert_allclose(gap, 1.0, atol=1e-9)
    assert feasibility_gap(np.array([[1.0], [0.0]]), np.array([2.0, 0.0])) <= 1e-12

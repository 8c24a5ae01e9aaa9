import dataclasses

import numpy as np
import pytest
from numpy.testing import assert_allclose

from gptdisc import (
    Ensemble,
    InvalidInputError,
    Measurement,
    build_dual,
    build_primal,
    no_measurement_value,
    polygon_model,
    solve_discrimination,
    solve_lp,
    verify_kkt,
)
from gptdisc.discrimination import measurement_from_primal, symmetry_operator_from_dual
from gptdisc.lp import OPTIMAL
from gptdisc.oracle import dual_vertex_enumeration
from gptdisc.polygon import no_measurement_ensemble, uniform_vertex_ensemble

from conftest import random_polygon_ensemble


def single_state_ensemble():
    model = polygon_model(4)
    return Ensemble(model=model, states=model.state_gens[:1], priors=np.array([1.0]))


def test_primal_single_state_is_always_identified():
    sol = solve_lp(build_primal(single_state_ensemble()))
    assert sol.status == OPTIMAL
    assert_allclose(-sol.objective, 1.0, atol=1e-9)


def test_primal_triangle_reaches_perfect_discrimination():
    sol = solve_lp(build_primal(uniform_vertex_ensemble(3)))
    assert_allclose(-sol.objective, 1.0, atol=1e-9)


def test_primal_square_value_is_half():
    sol = solve_lp(build_primal(uniform_vertex_ensemble(4)))
    assert_allclose(-sol.objective, 0.5, atol=1e-9)


def test_dual_square_minimizer_is_axis_point():
    ensemble = uniform_vertex_ensemble(4)
    sol = solve_lp(build_dual(ensemble))
    k = symmetry_operator_from_dual(ensemble, sol.x)
    assert_allclose(k, [0.0, 0.0, 0.5], atol=1e-9)
    oracle = dual_vertex_enumeration(ensemble)
    assert_allclose(oracle.k, k, atol=1e-9)


def test_dual_triangle_minimizer_is_unit_axis_point():
    ensemble = uniform_vertex_ensemble(3)
    sol = solve_lp(build_dual(ensemble))
    k = symmetry_operator_from_dual(ensemble, sol.x)
    assert_allclose(k, [0.0, 0.0, 1.0], atol=1e-9)


def test_average_state_is_dual_feasible_with_value_one():
    # K = sum_x q_x w_x satisfies every constraint and has u[K] = 1.
    ensemble = uniform_vertex_ensemble(4)
    k = ensemble.weighted_states().sum(axis=0)
    gens = ensemble.model.effect_gens
    margins = gens @ (k[:, None] - ensemble.weighted_states().T)
    assert margins.min() >= -1e-12
    assert_allclose(float(ensemble.model.unit_effect @ k), 1.0, atol=1e-12)
    assert solve_lp(build_dual(ensemble)).objective <= 1.0 + 1e-12


def test_triangle_solution_certificate():
    sol = solve_discrimination(uniform_vertex_ensemble(3))
    assert_allclose(sol.p_guess, 1.0, atol=1e-9)
    assert_allclose(sol.measurement.effects, sol.ensemble.model.effect_gens, atol=1e-9)
    for pair in sol.complementary:
        assert pair.r == pytest.approx(2.0 / 3.0, abs=1e-9)
    assert_allclose(sol.complementary[0].d, [-np.sqrt(2.0) / 2.0, 0.0, 1.0], atol=1e-9)


def test_square_solution_certificate():
    sol = solve_discrimination(uniform_vertex_ensemble(4))
    assert_allclose(sol.p_guess, 0.5, atol=1e-9)
    states = sol.ensemble.states
    for x, pair in enumerate(sol.complementary):
        assert pair.r == pytest.approx(0.25, abs=1e-9)
        assert_allclose(pair.d, states[(x + 2) % 4], atol=1e-9)


def test_mixture_instance_at_half_prior():
    sol = solve_discrimination(no_measurement_ensemble(0.5))
    assert_allclose(sol.p_guess, 0.5, atol=1e-9)
    assert_allclose(sol.symmetry_operator, [0.0, 0.0, 0.5], atol=1e-9)
    oracle = dual_vertex_enumeration(no_measurement_ensemble(0.5))
    assert_allclose(oracle.p_guess, 0.5, atol=1e-9)


def test_invalid_ensemble_rejected_by_solver():
    model = polygon_model(4)
    bad = Ensemble(model=model, states=model.state_gens[:2], priors=np.array([0.5, 0.6]))
    with pytest.raises(InvalidInputError):
        solve_discrimination(bad)


def test_kkt_report_on_solver_output():
    sol = solve_discrimination(uniform_vertex_ensemble(4))
    report = verify_kkt(sol.ensemble, sol)
    assert report.passes(1e-9)
    assert report.stability_residuals.max() <= 1e-9
    assert report.orthogonality_residuals.max() <= 1e-9
    assert report.measurement_residual <= 1e-9
    assert report.gap <= 1e-9


def test_kkt_accepts_two_outcome_alternative():
    # Measuring {f0, f2} and guessing the matching vertex pair is optimal:
    # f0 pairs to zero with both complementary states it can produce.
    ensemble = uniform_vertex_ensemble(4)
    sol = solve_discrimination(ensemble)
    f = ensemble.model.effect_gens
    zeros = np.zeros(3)
    alt = dataclasses.replace(
        sol, measurement=Measurement(np.array([f[0], zeros, f[2], zeros]))
    )
    report = verify_kkt(ensemble, alt)
    assert report.passes(1e-9)
    d0 = sol.complementary[0].d
    assert float(f[0] @ d0) == pytest.approx(0.0, abs=1e-9)


def test_kkt_flags_perturbed_symmetry_operator():
    sol = solve_discrimination(uniform_vertex_ensemble(4))
    tampered = dataclasses.replace(sol, symmetry_operator=np.array([0.0, 0.0, 0.6]))
    report = verify_kkt(sol.ensemble, tampered)
    assert not report.passes(1e-9)
    assert report.stability_residuals.max() == pytest.approx(0.1, abs=1e-9)


def test_no_measurement_value_examples():
    assert no_measurement_value(uniform_vertex_ensemble(4)) == pytest.approx(0.25)
    assert no_measurement_value(no_measurement_ensemble(0.5)) == pytest.approx(0.5)
    assert no_measurement_value(no_measurement_ensemble(0.1)) == pytest.approx(0.225)


def test_strong_duality_and_sandwich_on_random_instances():
    rng = np.random.default_rng(42)
    for _ in range(20):
        ensemble = random_polygon_ensemble(rng)
        sol = solve_discrimination(ensemble)
        assert abs(sol.primal_objective - sol.dual_objective) <= 1e-8
        assert ensemble.priors.max() - 1e-9 <= sol.p_guess <= 1.0 + 1e-9
        for x, pair in enumerate(sol.complementary):
            if not pair.degenerate:
                recon = ensemble.priors[x] * ensemble.states[x] + pair.scaled(3)
                assert np.linalg.norm(sol.symmetry_operator - recon) <= 1e-9


def test_orthogonality_at_optimum_on_random_instances():
    rng = np.random.default_rng(43)
    for _ in range(10):
        ensemble = random_polygon_ensemble(rng)
        sol = solve_discrimination(ensemble)
        for x in range(ensemble.n_states):
            margin = sol.symmetry_operator - ensemble.priors[x] * ensemble.states[x]
            assert abs(float(sol.measurement.effects[x] @ margin)) <= 1e-9


def test_zero_prior_padding_keeps_value():
    ensemble = uniform_vertex_ensemble(4)
    sol = solve_discrimination(ensemble)
    model = ensemble.model
    padded = Ensemble(
        model=model,
        states=np.vstack([ensemble.states, model.state_gens.mean(axis=0)]),
        priors=np.append(ensemble.priors, 0.0),
    )
    padded_sol = solve_discrimination(padded)
    assert padded_sol.p_guess == pytest.approx(sol.p_guess, abs=1e-9)


def test_prior_permutation_keeps_value_and_weights():
    rng = np.random.default_rng(44)
    ensemble = random_polygon_ensemble(rng)
    sol = solve_discrimination(ensemble)
    perm = rng.permutation(ensemble.n_states)
    shuffled = Ensemble(
        model=ensemble.model, states=ensemble.states[perm], priors=ensemble.priors[perm]
    )
    shuffled_sol = solve_discrimination(shuffled)
    assert shuffled_sol.p_guess == pytest.approx(sol.p_guess, abs=1e-9)
    original_r = np.array([pair.r for pair in sol.complementary])
    shuffled_r = np.array([pair.r for pair in shuffled_sol.complementary])
    assert_allclose(shuffled_r, original_r[perm], atol=1e-9)


def test_repeated_states_kept_as_distinct_outcomes():
    model = polygon_model(4)
    ensemble = Ensemble(
        model=model,
        states=np.vstack([model.state_gens[0], model.state_gens[0]]),
        priors=np.array([0.5, 0.5]),
    )
    sol = solve_discrimination(ensemble)
    assert sol.measurement.n_outcomes == 2
    assert sol.p_guess == pytest.approx(0.5, abs=1e-9)


def test_restricted_effects_force_trivial_guessing():
    # With only the unit effect available every measurement is a coin flip,
    # so the best strategy is guessing the most likely state.
    model = polygon_model(4)
    restricted = type(model)(
        dim=3,
        state_gens=model.state_gens,
        effect_gens=np.array([[0.0, 0.0, 1.0]]),
        unit_effect=model.unit_effect,
    )
    ensemble = Ensemble(
        model=restricted, states=model.state_gens[:2], priors=np.array([0.7, 0.3])
    )
    sol = solve_discrimination(ensemble)
    assert sol.p_guess == pytest.approx(0.7, abs=1e-9)
    assert abs(sol.primal_objective - sol.dual_objective) <= 1e-9
    # The effect cone is not full-dimensional here, so its dual contains
    # lines and the normalized complementary decomposition need not exist
    # at the degenerate index; the report must stay honest about that
    # while every condition that is well defined still holds.
    report = verify_kkt(ensemble, sol)
    assert all(report.positivity_ok)
    assert all(report.effects_in_cone)
    assert report.orthogonality_residuals.max() <= 1e-9
    assert report.measurement_residual <= 1e-9
    assert report.gap <= 1e-9


def test_measurement_reconstruction_matches_generators():
    ensemble = uniform_vertex_ensemble(3)
    problem = build_primal(ensemble)
    sol = solve_lp(problem)
    measurement = measurement_from_primal(ensemble, sol.x)
    total = measurement.effects.sum(axis=0)
    assert_allclose(total, ensemble.model.unit_effect, atol=1e-12)

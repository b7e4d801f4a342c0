import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cop.manifold_opt import (
    OptimizerConfig,
    exp_map,
    generator,
    grid_oracle,
    log_map,
    minimize_over_unitaries,
)
from cop.purification import canonical_purification, fixed_basis_entropy
from cop.qcore import DensityOperator, random_unitary, shannon_entropy


def shifted_binary_entropy(x: float) -> float:
    """-x log2(x/2) - (1-x) log2((1-x)/2), i.e. h(x) + 1."""
    total = 0.0
    for v in (x, 1.0 - x):
        if v > 0:
            total -= v * math.log2(v / 2)
    return total


def test_exp_map_zero_is_identity():
    assert np.allclose(exp_map(np.zeros(9), 3), np.eye(3))


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 5), st.integers(0, 10**6))
def test_exp_map_unitary_and_generator_antihermitian(d, seed):
    params = np.random.default_rng(seed).normal(size=d * d)
    a = generator(params, d)
    assert np.allclose(a, -a.conj().T)
    u = exp_map(params, d)
    assert np.max(np.abs(u.conj().T @ u - np.eye(d))) < 1e-10


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 5), st.integers(0, 10**6))
def test_log_map_inverts_exp_map(d, seed):
    u = random_unitary(d, seed=seed)
    assert np.allclose(exp_map(log_map(u), d), u, atol=1e-9)


def test_distance_to_identity_objective():
    res = minimize_over_unitaries(3, lambda u: float(np.sum(np.abs(u - np.eye(3)) ** 2)),
                                  OptimizerConfig(restarts=3))
    assert res.best_value == pytest.approx(0.0, abs=1e-8)
    assert len(res.per_restart_values) == 3


def test_shifted_entropy_objective_reaches_one():
    p = 0.3

    def objective(u):
        x = abs(math.sqrt(p) * u[0, 0] - math.sqrt(1 - p) * u[1, 0]) ** 2
        return shifted_binary_entropy(min(max(x, 0.0), 1.0))

    res = minimize_over_unitaries(2, objective, OptimizerConfig(restarts=4))
    assert res.best_value == pytest.approx(1.0, abs=1e-6)


def test_warm_start_is_second_restart():
    target = random_unitary(3, seed=2)
    seen = []

    def objective(u):
        if not seen or len(seen) < 2:
            seen.append(u)
        return float(np.sum(np.abs(u - target) ** 2))

    res = minimize_over_unitaries(3, objective, OptimizerConfig(restarts=1, max_iters=1, polish=0),
                                  initial=[target])
    assert res.best_restart == 1
    assert res.best_value == pytest.approx(0.0, abs=1e-9)


def test_non_finite_restart_recorded_as_inf():
    calls = {"n": 0}

    def objective(u):
        calls["n"] += 1
        return math.nan if calls["n"] == 1 else float(np.sum(np.abs(u - np.eye(2)) ** 2))

    res = minimize_over_unitaries(2, objective, OptimizerConfig(restarts=2))
    assert res.per_restart_values[0] == math.inf
    assert math.isfinite(res.best_value)


def test_same_seed_same_result():
    x = canonical_purification(DensityOperator(np.array([[0.6, 0.2], [0.2, 0.4]]))).amplitudes
    runs = [minimize_over_unitaries(2, lambda u: fixed_basis_entropy(x @ u.T), OptimizerConfig(restarts=3, seed=5))
            for _ in range(2)]
    assert runs[0].best_value == runs[1].best_value
    assert runs[0].per_restart_values == runs[1].per_restart_values


def test_grid_oracle_constant():
    assert grid_oracle(3, lambda u: 0.42, 50) == 0.42


@pytest.mark.slow
def test_diagonal_state_objective_matches_million_sample_grid():
    lam = np.array([0.2, 0.8])
    x = canonical_purification(DensityOperator(np.diag(lam))).amplitudes
    f = lambda u: fixed_basis_entropy(x @ u.T)  # noqa: E731
    res = minimize_over_unitaries(2, f, OptimizerConfig(restarts=4))
    oracle = grid_oracle(2, f, 10**6, seed=1)
    assert res.best_value == pytest.approx(shannon_entropy(lam), abs=1e-4)
    assert oracle == pytest.approx(res.best_value, abs=1e-4)


def test_config_validation():
    with pytest.raises(ValueError):
        OptimizerConfig(restarts=0)
    assert OptimizerConfig(restarts=3).scaled(4).restarts == 12

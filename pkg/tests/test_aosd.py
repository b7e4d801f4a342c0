import math

import numpy as np
import pytest
from hypothesis import example, given, settings
from hypothesis import strategies as st

from cop.aosd import (
    CSV_HEADER,
    AosdConfig,
    joint_state,
    parse_grid,
    predicted_cop,
    reduced_system_closed_form,
    reduced_system_state,
    rows_to_csv,
    success_probability,
    sweep,
)
from cop.entanglement import concurrence
from cop.manifold_opt import OptimizerConfig
from cop.qcore import ValidationError, binary_entropy

FAST = OptimizerConfig(restarts=3)
phase = st.floats(0, 2 * math.pi)


def test_orthogonal_preparations():
    cfg = AosdConfig(0j, 0j)
    assert success_probability(cfg) == 1.0
    assert concurrence(joint_state(cfg)) < 1e-12
    assert np.allclose(reduced_system_state(cfg).matrix, np.eye(2) / 2)


def test_identical_preparations():
    assert success_probability(AosdConfig(1 + 0j, 1 + 0j)) == pytest.approx(0.0)


@pytest.mark.parametrize("a", [0.0, 0.2, 0.5, 0.9, 1.0])
def test_optimal_condition(a):
    cfg = AosdConfig.optimal(a)
    ps = success_probability(cfg)
    assert ps == pytest.approx(1 - a)
    assert abs(cfg.alpha) == pytest.approx(a)
    assert concurrence(joint_state(cfg)) < 1e-8
    assert np.allclose(reduced_system_state(cfg).matrix, np.diag([1 - ps / 2, ps / 2]), atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.floats(0, 0.5), st.sampled_from([1, -1]), phase)
@example(1e-9, 1, 0.0)
def test_constant_condition_separable_under_common_phase(a, sign, f):
    cfg = AosdConfig.constant(a, sign, (f, f))
    assert abs(cfg.alpha) == pytest.approx(a, abs=1e-12)
    assert success_probability(cfg) == pytest.approx(0.5, abs=1e-12)
    assert concurrence(joint_state(cfg)) < 1e-8


@settings(max_examples=40, deadline=None)
@given(st.floats(0, 1), phase)
def test_optimal_condition_separable_under_common_phase(a, f):
    assert concurrence(joint_state(AosdConfig.optimal(a, (f, f)))) < 1e-8


@pytest.mark.parametrize("make", [lambda f: AosdConfig.optimal(0.4, f), lambda f: AosdConfig.constant(0.4, -1, f)])
def test_relative_phase_keeps_ps_but_entangles(make):
    real, twisted = make((0.0, 0.0)), make((0.0, 1.0))
    assert success_probability(twisted) == pytest.approx(success_probability(real))
    assert concurrence(joint_state(real)) < 1e-8
    assert concurrence(joint_state(twisted)) > 0.1


def test_printed_amplitude_form_is_entangled():
    # taking |a_+| itself as sqrt(1 + sqrt(1 - 4|a|^2)) / 2 leaves the joint state entangled
    a = 0.3
    ap = math.sqrt(1 + math.sqrt(1 - 4 * a * a)) / 2
    cfg = AosdConfig.from_overlap(a, ap)
    assert concurrence(joint_state(cfg)) > 1e-3


def test_constant_rejects_large_overlap():
    with pytest.raises(ValidationError):
        AosdConfig.constant(0.6)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.01, 1), st.floats(0.01, 1), phase, phase)
def test_closed_form_matches_partial_trace(r1, r2, f1, f2):
    cfg = AosdConfig(r1 * np.exp(1j * f1), r2 * np.exp(1j * f2))
    assert np.max(np.abs(reduced_system_state(cfg).matrix - reduced_system_closed_form(cfg))) <= 1e-10


def test_sweep_reproduces_predicted_curve():
    rows = sweep(parse_grid("0:1:6"), "optimal", FAST)
    assert len(rows) == 6
    assert (rows[0]["ps"], rows[0]["cop"]) == (pytest.approx(1.0), pytest.approx(1.0))
    assert (rows[-1]["ps"], rows[-1]["cop"]) == (pytest.approx(0.0), pytest.approx(0.0, abs=1e-12))
    for r in rows:
        assert r["cop"] == pytest.approx(predicted_cop(r["ps"]), abs=1e-6)
        assert r["cop_dephased"] == pytest.approx(binary_entropy(r["ps"] / 2), abs=1e-12)


def test_constant_sweep_skips_out_of_range():
    rows = sweep(parse_grid("0:1:5"), "constant", FAST)
    assert [r["alpha"] for r in rows] == [0.0, 0.25, 0.5]


def test_csv():
    text = rows_to_csv([{"alpha": 1.0, "ps": -0.0, "concurrence": 0.0, "cop": 1 / 3, "cop_dephased": 0.5}])
    lines = text.splitlines()
    assert lines[0] == ",".join(CSV_HEADER)
    assert lines[1] == "1,0,0,0.333333333,0.5"


def test_bad_grid():
    with pytest.raises(ValidationError):
        parse_grid("0:1")

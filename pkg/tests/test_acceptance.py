"""Acceptance suite: one recorded PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -v``; the lines are repeated in the
terminal summary. Runtime limits are part of each pass condition.
"""
import math
import time
from functools import lru_cache

import numpy as np
import pytest

from cop.manifold_opt import OptimizerConfig, grid_oracle
from cop.purification import canonical_purification, cop_fixed_basis, fixed_basis_entropy
from cop.qcore import DensityOperator, maximally_mixed, random_state, rng_for, shannon_entropy
from cop.verify import check_proposition, witness_checks
from cop import aosd

from conftest import plus_minus_mixture, record_acceptance

SEED = 7
# propositions run at 4 restarts; any failing sample is re-run at 16
SUITE_CONFIG = OptimizerConfig(restarts=4, seed=SEED)
SUITE_BUDGET_S = 30 * 60
_suite_elapsed = {}


def _timed(fn, *args, **kw):
    t0 = time.perf_counter()
    out = fn(*args, **kw)
    return out, time.perf_counter() - t0


def test_c1_plus_minus_family_value_one():
    ps = np.round(np.arange(0.05, 0.951, 0.05), 2)
    t0 = time.perf_counter()
    values = {float(p): cop_fixed_basis(plus_minus_mixture(p), OptimizerConfig(seed=SEED)).value for p in ps}
    elapsed = time.perf_counter() - t0
    errs = {p: abs(v - 1.0) for p, v in values.items()}
    bad = [p for p, e in errs.items() if e > 1e-5]
    ok = not bad and elapsed <= 30
    record_acceptance("C1", ok, f"{len(ps) - len(bad)}/{len(ps)} p within 1e-5 of 1.0, max |err|={max(errs.values()):.6g} "
                                f"(at p={max(errs, key=errs.get)}), runtime {elapsed:.1f}s/30s")
    assert ok, f"values {values}"


def test_c2_diagonal_states_closed_form():
    t0 = time.perf_counter()
    worst = 0.0
    for i in range(100):
        d = 2 + i % 3
        lam = rng_for(SEED, 2, i).dirichlet(np.ones(d))
        val = cop_fixed_basis(DensityOperator(np.diag(lam)), OptimizerConfig(restarts=4, seed=SEED)).value
        worst = max(worst, abs(val - shannon_entropy(lam)))
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-5 and elapsed <= 120
    record_acceptance("C2", ok, f"100 diagonal states d=2..4, max |C_P - H(diag)|={worst:.3g} (tol 1e-5), "
                                f"runtime {elapsed:.1f}s/120s")
    assert ok


def test_c3_maximally_mixed():
    errs = {d: abs(cop_fixed_basis(maximally_mixed(d), OptimizerConfig(seed=SEED)).value - math.log2(d)) for d in (2, 3, 4)}
    ok = max(errs.values()) <= 1e-6
    record_acceptance("C3", ok, "I/d vs log2 d: " + ", ".join(f"d={d} err={e:.3g}" for d, e in errs.items()) + " (tol 1e-6)")
    assert ok


@lru_cache(maxsize=None)
def _suite_report(prop, dim, n, tol=None):
    rep, elapsed = _timed(check_proposition, prop, n, dim, SEED, SUITE_CONFIG, tol, 1)
    _suite_elapsed[(prop, dim)] = elapsed
    return rep


C4_CASES = [(p, d, 200 if d == 2 else 50) for p in ("P1", "P2", "P3", "P4", "P6") for d in (2, 3)]


@pytest.mark.parametrize("prop,dim,n", C4_CASES, ids=[f"{p}-d{d}" for p, d, _ in C4_CASES])
def test_c4_propositions(prop, dim, n):
    rep = _suite_report(prop, dim, n)
    record_acceptance(f"C4 {prop} d={dim}", rep.passed,
                      f"{rep.n_pass}/{n} pass, worst margin {rep.worst_margin:.4g} (tol {rep.tolerance:g}), "
                      f"{_suite_elapsed[(prop, dim)]:.0f}s")
    assert rep.passed, rep.failing_seeds[:3]


def test_c4_p5_proof_chain_bound():
    rep = _suite_report("P5", 2, 200)
    stated = rep.details["stated_bound_passes"]
    record_acceptance("C4 P5 d=2", rep.passed,
                      f"proof-chain bound {rep.n_pass}/200 pairs with T<=1/2, worst margin {rep.worst_margin:.4g}; "
                      f"stated bound {stated}/200, {_suite_elapsed[('P5', 2)]:.0f}s")
    assert rep.passed


def test_c4_p7_cnot_equality():
    rep = _suite_report("P7", 2, 50, 1e-5)
    record_acceptance("C4 P7 d=2", rep.passed,
                      f"{rep.n_pass}/50 qubit inputs, worst margin {rep.worst_margin:.4g} (tol 1e-5), "
                      f"{_suite_elapsed[('P7', 2)]:.0f}s")
    assert rep.passed


def test_c4_p8_cop_above_eop():
    rep = _suite_report("P8", 2, 50, 1e-5)
    record_acceptance("C4 P8 d=4", rep.passed,
                      f"{rep.n_pass}/50 two-qubit states, worst C_P - E_P {rep.worst_margin:.4g} (tol 1e-5), "
                      f"{_suite_elapsed[('P8', 2)]:.0f}s")
    assert rep.passed


def test_c4_runtime_budget():
    missing = [(p, d) for p, d, _ in C4_CASES if (p, d) not in _suite_elapsed]
    missing += [k for k in (("P5", 2), ("P7", 2), ("P8", 2)) if k not in _suite_elapsed]
    if missing:
        pytest.skip(f"proposition runs not executed in this session: {missing}")
    total = sum(_suite_elapsed.values())
    ok = total <= SUITE_BUDGET_S
    record_acceptance("C4 runtime", ok, f"proposition suite {total:.0f}s / {SUITE_BUDGET_S}s")
    assert ok


def test_c5_aosd_curve():
    rows, elapsed = _timed(aosd.sweep, aosd.parse_grid("0:1:21"), "optimal", OptimizerConfig(seed=SEED))
    cop_err = max(abs(r["cop"] - aosd.predicted_cop(r["ps"])) for r in rows)
    conc = max(r["concurrence"] for r in rows)
    by_ps = sorted((r["ps"], r["cop"]) for r in rows)
    monotone = all(b[1] >= a[1] - 1e-4 for a, b in zip(by_ps, by_ps[1:]))
    ok = len(rows) == 21 and cop_err <= 1e-4 and conc < 1e-8 and monotone and elapsed <= 60
    record_acceptance("C5", ok, f"21 points, max |C_P - h(p_s/2)|={cop_err:.3g} (tol 1e-4), max concurrence={conc:.3g} "
                                f"(tol 1e-8), monotone={monotone}, runtime {elapsed:.1f}s/60s")
    assert ok


def test_c6_oracle_agreement():
    t0 = time.perf_counter()
    gaps = []
    for i in range(20):
        rho = random_state(2, seed=(SEED, 6, i))
        res = cop_fixed_basis(rho, OptimizerConfig(seed=SEED))
        x = canonical_purification(rho, res.ancilla_dim).amplitudes
        oracle = grid_oracle(res.ancilla_dim, lambda u: fixed_basis_entropy(x @ u.T), 100_000, seed=(SEED, i))
        gaps.append(oracle - res.value)
    elapsed = time.perf_counter() - t0
    ok = max(abs(g) for g in gaps) <= 1e-3 and min(gaps) >= -1e-9 and elapsed <= 600
    record_acceptance("C6", ok, f"20 qubit states vs 1e5-sample grid: max |gap|={max(abs(g) for g in gaps):.3g} "
                                f"(tol 1e-3), optimizer never worse={min(gaps) >= -1e-9}, runtime {elapsed:.0f}s/600s")
    assert ok


def test_c7_witnesses():
    rep = witness_checks(OptimizerConfig(seed=SEED))
    d = rep.details
    record_acceptance("C7", rep.passed,
                      f"convexity: C_P(diag(.3,.7))={d['convexity_violation']['cop']:.6f} > weighted "
                      f"{d['convexity_violation']['weighted_sum'] + 0.0:.3g}; randomizing: "
                      f"{d['randomizing_increase']['cop_before']:.6f} -> {d['randomizing_increase']['cop_after']:.6f}; "
                      f"uniform unchanged={d['randomizing_uniform']['exhibited']}")
    assert rep.passed


def test_c8_exploratory_report():
    rep = _suite_report("P8", 2, 50, 1e-5)
    det = rep.details
    record_acceptance("C8", None,
                      f"seed {SEED}: optimizer-coincidence rate {det['coincidence_rate']:.3f}, "
                      f"additivity-equality rate {det['additivity_equality_rate']:.3f}; "
                      f"non-coincident seeds {det['non_coincident_seeds'][:5]}"
                      f"{' ...' if len(det['non_coincident_seeds']) > 5 else ''}")

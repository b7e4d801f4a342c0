"""Inequalities that fail on explicit states, checked with bounds that do not
depend on the optimizer where possible."""
import math

import numpy as np
import pytest

from cop.coherence import qubit_coherence_of_formation
from cop.manifold_opt import OptimizerConfig, grid_oracle
from cop.purification import canonical_purification, cop_fixed_basis, fixed_basis_entropy
from cop.qcore import KrausChannel, PureState, apply_channel, von_neumann_entropy

from conftest import PLUS, plus_minus_mixture

CONFIG = OptimizerConfig(restarts=8, seed=4)


def partial_phase_flip(q: float) -> KrausChannel:
    """Diagonal Kraus pair sqrt(q) I, sqrt(1-q) Z: off-diagonals scale by 2q - 1."""
    z = np.diag([1.0, -1.0]).astype(complex)
    return KrausChannel((math.sqrt(q) * np.eye(2, dtype=complex), math.sqrt(1 - q) * z), "genuinely_incoherent")


def formation_plus_entropy(rho) -> float:
    """C_f + S, a lower bound on the fixed-basis coherence of purification."""
    return qubit_coherence_of_formation(rho) + von_neumann_entropy(rho)


@pytest.mark.parametrize("c", [0.3, 0.6])
def test_genuinely_incoherent_channel_can_raise_cop(c):
    before = cop_fixed_basis(PureState(PLUS).density(), CONFIG).value
    out = apply_channel(partial_phase_flip((1 + c) / 2), PureState(PLUS).density())
    after = cop_fixed_basis(out, CONFIG).value
    assert before == pytest.approx(1.0, abs=1e-12)
    assert formation_plus_entropy(out) > 1.05
    assert after >= formation_plus_entropy(out) - 1e-9


@pytest.mark.parametrize("p", [0.1, 0.3, 0.7])
def test_cop_exceeds_formation_plus_entropy(p):
    rho = plus_minus_mixture(p)
    bound = formation_plus_entropy(rho)
    value = cop_fixed_basis(rho, CONFIG).value
    x = canonical_purification(rho).amplitudes
    oracle = grid_oracle(2, lambda u: fixed_basis_entropy(x @ u.T), 50_000, seed=1)
    assert value > bound + 0.1
    assert oracle >= value - 1e-9


def test_family_value_one_only_at_equal_weights():
    assert cop_fixed_basis(plus_minus_mixture(0.5), CONFIG).value == pytest.approx(1.0, abs=1e-9)
    assert formation_plus_entropy(plus_minus_mixture(0.3)) > 1.1

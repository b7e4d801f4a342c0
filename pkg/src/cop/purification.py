"""Purifications and the coherence of purification.

Two readings of the coherence of purification are exposed:

* ``cop_fixed_basis``: minimum over ancilla unitaries of the dephased entropy
  of (I x U)|Psi>, dephasing in the product computational basis. This is the
  canonical quantity used everywhere else in the package.
* ``cop_adapted``: the closed form H(p_j) + sum_j p_j H(f^(j)) for a fixed
  ensemble, i.e. the dephased entropy measured in the co-rotated basis
  {|i>|b_j>}. No optimization.

Writing the purification amplitudes as a d x n matrix X (X X^dag = rho), the
fixed-basis objective is the Shannon entropy of |X_ij|^2. Its row marginal is
the diagonal of rho, so the minimum is never below H(diag rho).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .coherence import decomposition_matrix
from .manifold_opt import OptimizerConfig, UnitarySearchResult, minimize_over_unitaries
from .qcore import (
    DensityOperator,
    PureState,
    UnsupportedError,
    ValidationError,
    as_density,
    entropy_bits,
    partial_trace,
)

MAX_JOINT_DIM = 64
QR_SLACK = 1e-6


class OptimizerFailure(RuntimeError):
    """A computed value contradicts a bound the exact minimum must satisfy."""


@dataclass(frozen=True, eq=False)
class Purification:
    state: PureState
    source: DensityOperator
    ancilla_dim: int

    @property
    def amplitudes(self) -> np.ndarray:
        """Amplitude matrix X with X[i, j] = <i|<j|Psi>."""
        return self.state.vector.reshape(self.source.dim, self.ancilla_dim)

    def check(self, tol: float = 1e-9) -> bool:
        red = partial_trace(self.state, [0])
        return bool(np.max(np.abs(red.matrix - self.source.matrix)) <= tol)


@dataclass(frozen=True)
class CopResult:
    value_fixed_basis: float
    value_adapted: float
    optimizer: UnitarySearchResult | None
    ancilla_dim: int

    @property
    def value(self) -> float:
        return self.value_fixed_basis


def canonical_purification(state, ancilla_dim: int | None = None) -> Purification:
    """sum_k sqrt(lambda_k) |e_k>|k> from the eigendecomposition (ascending order)."""
    rho = as_density(state)
    m = decomposition_matrix(rho, ancilla_dim)
    n = m.shape[1]
    return Purification(PureState(m.ravel(), (rho.dim, n)), rho, n)


def purification_from_amplitudes(x: np.ndarray) -> Purification:
    x = np.asarray(x, dtype=complex)
    psi = PureState(x.ravel(), x.shape)
    return Purification(psi, DensityOperator(x @ x.conj().T), x.shape[1])


def fixed_basis_entropy(x: np.ndarray) -> float:
    """Dephased entropy of the purification with amplitude matrix ``x``."""
    return entropy_bits(np.abs(x) ** 2)


def cop_fixed_basis(
    state,
    config: OptimizerConfig | None = None,
    *,
    ancilla_dim: int | None = None,
    purification: Purification | None = None,
    initial=(),
) -> CopResult:
    """Coherence of purification, minimized over ancilla unitaries.

    The search starts from ``purification`` when given (it must purify
    ``state``), else from the eigen-purification with ``ancilla_dim`` columns
    (default: the rank). ``initial`` adds warm-start ancilla unitaries.
    """
    rho = as_density(state)
    if purification is None:
        base = canonical_purification(rho, ancilla_dim)
    else:
        base = purification
        if base.source.dim != rho.dim or np.max(np.abs(base.source.matrix - rho.matrix)) > 1e-9:
            raise ValidationError("supplied purification does not purify the state")
    x = base.amplitudes
    n = base.ancilla_dim
    if rho.dim * n > MAX_JOINT_DIM:
        raise UnsupportedError(f"joint dimension {rho.dim * n} exceeds {MAX_JOINT_DIM}")
    adapted = cop_adapted(rho)
    if n == 1:
        return CopResult(fixed_basis_entropy(x), adapted, None, 1)
    res = minimize_over_unitaries(
        n, lambda u: fixed_basis_entropy(x @ u.T), config or OptimizerConfig(), initial)
    return CopResult(res.best_value, adapted, res, n)


def coherence_of_purification(state, config: OptimizerConfig | None = None, **kw) -> float:
    return cop_fixed_basis(state, config, **kw).value_fixed_basis


def optimal_purification(result: CopResult, state, purification: Purification | None = None) -> Purification:
    """The purification (I x U*)|Psi> that attains ``result``."""
    base = purification or canonical_purification(state, result.ancilla_dim)
    if result.optimizer is None:
        return base
    return purification_from_amplitudes(base.amplitudes @ result.optimizer.unitary.T)


def cop_sweep(state, config: OptimizerConfig | None = None, max_ancilla: int | None = None) -> dict[int, CopResult]:
    """Fixed-basis value for every ancilla dimension from rank(rho) up to
    ``max_ancilla`` (default d * rank, capped by the joint-dimension limit)."""
    rho = as_density(state)
    r = rho.rank()
    top = max_ancilla or rho.dim * r
    top = min(top, MAX_JOINT_DIM // rho.dim)
    return {n: cop_fixed_basis(rho, config, ancilla_dim=n) for n in range(r, max(r, top) + 1)}


def cop_adapted(state, decomposition=None) -> float:
    """H(p_j) + sum_j p_j H(f^(j)) with f_i^(j) = |<i|psi_j>|^2.

    ``decomposition`` is a sequence of ``(p_j, psi_j)``; the default is the
    eigendecomposition.
    """
    if decomposition is None:
        rho = as_density(state)
        w, v = rho.eigenvalues, rho.eigenvectors
        keep = w > 1e-12
        decomposition = list(zip(w[keep], v[:, keep].T))
    p = np.array([float(pj) for pj, _ in decomposition])
    p = p / p.sum()
    total = entropy_bits(p)
    for pj, (_, psi) in zip(p, decomposition):
        psi = np.asarray(psi, dtype=complex)
        total += pj * entropy_bits(np.abs(psi / np.linalg.norm(psi)) ** 2)
    return float(total)


def cop_of_dephased(state) -> float:
    """C_P of Delta[rho]: Shannon entropy of the diagonal."""
    rho = as_density(state)
    return entropy_bits(np.clip(np.diag(rho.matrix).real, 0, None))


def residual_quantumness(state, config: OptimizerConfig | None = None, **kw) -> float:
    """Q_R(rho) = C_P(rho) - C_P(Delta[rho]); slack down to -1e-6 is clamped to 0."""
    q = coherence_of_purification(state, config, **kw) - cop_of_dephased(state)
    if q < -QR_SLACK:
        raise OptimizerFailure(f"negative residual quantumness {q:.3g}")
    return max(0.0, q)

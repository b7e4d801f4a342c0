"""Coherence measures and the channel classes of the coherence resource theory."""
from __future__ import annotations

import numpy as np

from .manifold_opt import OptimizerConfig, UnitarySearchResult, minimize_over_unitaries
from .qcore import (
    KrausChannel,
    UnsupportedError,
    ValidationError,
    as_density,
    entropy_bits,
    rng_for,
    von_neumann_entropy,
)

MAX_CF_DIM = 8


class CoherenceValue(float):
    """A coherence value in bits, tagged with its reference basis."""

    def __new__(cls, value, basis: str = "computational"):
        obj = super().__new__(cls, max(0.0, float(value)))
        obj.basis = basis
        return obj

    def __repr__(self):
        return f"CoherenceValue({float(self)!r}, basis={self.basis!r})"


def relative_entropy_coherence(state) -> CoherenceValue:
    """C_R(rho) = S(Delta[rho]) - S(rho)."""
    rho = as_density(state)
    diag = np.clip(np.diag(rho.matrix).real, 0, None)
    return CoherenceValue(entropy_bits(diag) - von_neumann_entropy(rho))


def pure_coherence(vector) -> float:
    """C_R of a pure state: Shannon entropy of its squared amplitudes."""
    return entropy_bits(np.abs(np.asarray(vector)) ** 2)


def decomposition_matrix(state, ancilla_dim: int | None = None) -> np.ndarray:
    """Matrix M (d x n) with M M^dag = rho whose columns are sqrt(lambda_k)|e_k>
    in ascending eigenvalue order, zero padded to ``ancilla_dim`` columns.
    Eigenvalues below 1e-12 are dropped. Each eigenvector is phased so its
    first largest-magnitude entry is real and positive.

    Right-multiplying by the transpose of an n x n unitary sweeps every
    ensemble decomposition of rho into at most n pure states.
    """
    rho = as_density(state)
    w, v = rho.eigenvalues, rho.eigenvectors
    keep = w > 1e-12
    w, v = w[keep], v[:, keep]
    if v.size:
        lead = v[np.argmax(np.abs(v) > np.abs(v).max(axis=0) - 1e-12, axis=0), np.arange(v.shape[1])]
        v = v * (np.abs(lead) / lead)
    n = len(w) if ancilla_dim is None else ancilla_dim
    if n < len(w):
        raise ValidationError(f"ancilla dimension {n} below rank {len(w)}")
    m = np.zeros((rho.dim, n), dtype=complex)
    m[:, :len(w)] = v * np.sqrt(w)
    return m


def ensemble_coherence(x: np.ndarray) -> float:
    """Average pure-state coherence sum_j p_j C_R(psi_j) of the ensemble given by
    the columns sqrt(p_j)|psi_j> of ``x``."""
    g = np.abs(x) ** 2
    return entropy_bits(g) - entropy_bits(g.sum(axis=0))


def coherence_of_formation(state, config: OptimizerConfig | None = None,
                           ancilla_dim: int | None = None, *, full: bool = False):
    """Convex roof of the pure-state relative entropy of coherence.

    Ensembles of up to ``ancilla_dim`` (default d**2) elements are explored by
    rotating the ancilla of the eigen-purification. With ``full=True`` the
    optimizer result is returned alongside the value.
    """
    rho = as_density(state)
    if rho.dim > MAX_CF_DIM:
        raise UnsupportedError(f"coherence_of_formation supports dim <= {MAX_CF_DIM}, got {rho.dim}")
    if rho.rank() == 1 or np.allclose(rho.matrix, np.diag(np.diag(rho.matrix)), atol=1e-14):
        # unique decomposition / incoherent eigenbasis
        value = relative_entropy_coherence(rho)
        return (value, None) if full else value
    n = ancilla_dim or rho.dim ** 2
    m = decomposition_matrix(rho, n)
    res: UnitarySearchResult = minimize_over_unitaries(
        n, lambda u: ensemble_coherence(m @ u.T), config or OptimizerConfig())
    value = CoherenceValue(res.best_value)
    return (value, res) if full else value


def qubit_coherence_of_formation(state) -> float:
    """Closed form h((1 + sqrt(1 - 4|rho_01|^2)) / 2) for qubits."""
    rho = as_density(state)
    if rho.dim != 2:
        raise ValidationError("closed form applies to qubits only")
    x = 0.5 + 0.5 * np.sqrt(max(0.0, 1 - 4 * abs(rho.matrix[0, 1]) ** 2))
    return entropy_bits(np.array([x, 1 - x]))


# ---------------------------------------------------------------------------
# channel constructors


def _complex_sphere(rng, n):
    z = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return z / np.linalg.norm(z)


def make_gio_channel(dim: int, n_kraus: int, seed=0) -> KrausChannel:
    """Random genuinely incoherent channel: diagonal Kraus operators whose
    per-index amplitude vectors are uniform on the complex unit sphere."""
    if n_kraus < 1:
        raise ValidationError("n_kraus must be >= 1")
    rng = rng_for(seed)
    lam = np.array([_complex_sphere(rng, n_kraus) for _ in range(dim)])  # (dim, n_kraus)
    return KrausChannel(tuple(np.diag(lam[:, n]) for n in range(n_kraus)), "genuinely_incoherent")


def make_incoherent_channel(dim: int, n_kraus: int, seed=0) -> KrausChannel:
    """Random incoherent channel.

    Each base operator sends column j to a random row sigma_n(j) with amplitude
    sqrt(w_nj) e^{i phi}, the weights normalized per column over n. Columns that
    collide on a row inside one operator are split into separate rank-one
    operators, which keeps sum K^dag K = I exact; the channel can therefore hold
    more than ``n_kraus`` operators.
    """
    if n_kraus < 1:
        raise ValidationError("n_kraus must be >= 1")
    rng = rng_for(seed)
    w = rng.random((n_kraus, dim)) + 1e-3
    w /= w.sum(axis=0)
    ops = []
    for n in range(n_kraus):
        sigma = rng.integers(0, dim, size=dim)
        phases = np.exp(2j * np.pi * rng.random(dim))
        amp = np.sqrt(w[n]) * phases
        base = np.zeros((dim, dim), dtype=complex)
        for row in np.unique(sigma):
            cols = np.flatnonzero(sigma == row)
            if len(cols) == 1:
                base[row, cols[0]] = amp[cols[0]]
            else:
                for c in cols:
                    k = np.zeros((dim, dim), dtype=complex)
                    k[row, c] = amp[c]
                    ops.append(k)
        if np.any(base):
            ops.append(base)
    return KrausChannel(tuple(ops), "incoherent")


def make_dephasing_channel(dim: int) -> KrausChannel:
    ops = []
    for k in range(dim):
        p = np.zeros((dim, dim), dtype=complex)
        p[k, k] = 1.0
        ops.append(p)
    return KrausChannel(tuple(ops), "dephasing")


def make_randomizing_channel(dim: int) -> KrausChannel:
    """rho -> I/d, with Kraus operators |a><b| / sqrt(d)."""
    ops = []
    for a in range(dim):
        for b in range(dim):
            k = np.zeros((dim, dim), dtype=complex)
            k[a, b] = 1 / np.sqrt(dim)
            ops.append(k)
    return KrausChannel(tuple(ops), "randomizing")


def generalized_cnot(d_control: int, d_target: int) -> np.ndarray:
    """U|i>|j> = |i>|(i + j) mod d_target>."""
    if d_target < d_control:
        raise ValidationError("generalized CNOT needs d_target >= d_control")
    d = d_control * d_target
    u = np.zeros((d, d), dtype=complex)
    for i in range(d_control):
        for j in range(d_target):
            u[i * d_target + (i + j) % d_target, i * d_target + j] = 1.0
    return u


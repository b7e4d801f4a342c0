"""State and operator algebra for finite-dimensional quantum systems.

Everything here works in bits (log base 2). Values are immutable after
construction and all operations are pure functions.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10
EIG_TOL = 1e-10
NORM_TOL = 1e-10
COMPLETENESS_TOL = 1e-9
STRUCTURE_TOL = 1e-12
UNITARY_TOL = 1e-9

CLASS_TAGS = ("general", "incoherent", "genuinely_incoherent", "dephasing", "randomizing")


class ValidationError(ValueError):
    """Input fails a numerical invariant (trace, positivity, unitarity, ...)."""


class StructureError(ValueError):
    """Tensor-factor structure is missing or inconsistent."""


class UnsupportedError(ValueError):
    """Problem size is outside what an operation supports."""


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


def _check_factor_dims(factor_dims, dim):
    if factor_dims is None:
        return None
    factor_dims = tuple(int(f) for f in factor_dims)
    if any(f < 1 for f in factor_dims) or int(np.prod(factor_dims)) != dim:
        raise StructureError(f"factor_dims {factor_dims} do not multiply to {dim}")
    return factor_dims


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """Trace-one positive semidefinite operator.

    The matrix is symmetrized on ingestion after the Hermiticity check, and
    eigenvalues in ``[-1e-10, 0)`` are clipped to zero in :attr:`eigenvalues`.
    ``seed`` records how a sampled operator can be regenerated.
    """

    matrix: np.ndarray
    factor_dims: tuple[int, ...] | None = None
    seed: object = field(default=None, compare=False)

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
            raise ValidationError(f"density matrix must be square, got shape {m.shape}")
        dev = np.max(np.abs(m - m.conj().T))
        if dev > HERMITIAN_TOL:
            raise ValidationError(f"matrix not Hermitian (max deviation {dev:.3g})")
        m = (m + m.conj().T) / 2
        tr = np.trace(m).real
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValidationError(f"trace is {tr!r}, expected 1")
        object.__setattr__(self, "matrix", _frozen(m))
        object.__setattr__(self, "factor_dims", _check_factor_dims(self.factor_dims, m.shape[0]))
        if self._eigh[0].min() < -EIG_TOL:
            raise ValidationError(f"negative eigenvalue {self._eigh[0].min():.3g}")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @cached_property
    def _eigh(self):
        w, v = np.linalg.eigh(self.matrix)
        return w, v

    @property
    def eigenvalues(self) -> np.ndarray:
        """Ascending eigenvalues, clipped at zero."""
        return np.clip(self._eigh[0], 0.0, None)

    @property
    def eigenvectors(self) -> np.ndarray:
        return self._eigh[1]

    def rank(self, tol: float = 1e-12) -> int:
        return int(np.sum(self.eigenvalues > tol))

    def is_pure(self, tol: float = 1e-9) -> bool:
        return abs(np.real(np.trace(self.matrix @ self.matrix)) - 1.0) < tol

    def with_factors(self, factor_dims) -> DensityOperator:
        return DensityOperator(self.matrix, factor_dims, self.seed)

    def __repr__(self):
        return f"DensityOperator(dim={self.dim}, factor_dims={self.factor_dims})"


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized state vector with its tensor-factor structure."""

    vector: np.ndarray
    factor_dims: tuple[int, ...] | None = None
    seed: object = field(default=None, compare=False)

    def __post_init__(self):
        v = np.asarray(self.vector, dtype=complex).ravel()
        nrm = np.linalg.norm(v)
        if abs(nrm - 1.0) > NORM_TOL:
            raise ValidationError(f"state vector norm is {nrm!r}, expected 1")
        object.__setattr__(self, "vector", _frozen(v))
        fd = self.factor_dims if self.factor_dims is not None else (v.size,)
        object.__setattr__(self, "factor_dims", _check_factor_dims(fd, v.size))

    @property
    def dim(self) -> int:
        return self.vector.size

    def density(self) -> DensityOperator:
        return DensityOperator(np.outer(self.vector, self.vector.conj()), self.factor_dims, self.seed)

    def __repr__(self):
        return f"PureState(dim={self.dim}, factor_dims={self.factor_dims})"


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """CPTP map given by Kraus operators, tagged with its coherence class."""

    operators: tuple
    class_tag: str = "general"

    def __post_init__(self):
        ops = tuple(_frozen(k) for k in self.operators)
        if not ops:
            raise ValidationError("channel needs at least one Kraus operator")
        shape = ops[0].shape
        if any(k.shape != shape for k in ops):
            raise ValidationError("Kraus operators have inconsistent shapes")
        if self.class_tag not in CLASS_TAGS:
            raise ValidationError(f"unknown class tag {self.class_tag!r}")
        gram = sum(k.conj().T @ k for k in ops)
        dev = np.max(np.abs(gram - np.eye(shape[1])))
        if dev > COMPLETENESS_TOL:
            raise ValidationError(f"Kraus completeness violated (max deviation {dev:.3g})")
        if self.class_tag == "incoherent":
            for k in ops:
                if np.any(np.sum(np.abs(k) > STRUCTURE_TOL, axis=0) > 1):
                    raise ValidationError("incoherent Kraus operator has a column with two nonzero entries")
        if self.class_tag == "genuinely_incoherent":
            for k in ops:
                off = k - np.diag(np.diag(k))
                if k.shape[0] != k.shape[1] or np.max(np.abs(off)) >= STRUCTURE_TOL:
                    raise ValidationError("genuinely incoherent Kraus operators must be diagonal")
        object.__setattr__(self, "operators", ops)

    @property
    def dim_in(self) -> int:
        return self.operators[0].shape[1]

    @property
    def dim_out(self) -> int:
        return self.operators[0].shape[0]


def as_density(state) -> DensityOperator:
    """Coerce a PureState, DensityOperator or raw array into a DensityOperator."""
    if isinstance(state, DensityOperator):
        return state
    if isinstance(state, PureState):
        return state.density()
    a = np.asarray(state, dtype=complex)
    if a.ndim == 1:
        return PureState(a).density()
    return DensityOperator(a)


# ---------------------------------------------------------------------------
# structure


def tensor(a, b):
    """Kronecker product; PureState ⊗ PureState stays pure."""
    if isinstance(a, PureState) and isinstance(b, PureState):
        return PureState(np.kron(a.vector, b.vector), a.factor_dims + b.factor_dims)
    a, b = as_density(a), as_density(b)
    fa = a.factor_dims or (a.dim,)
    fb = b.factor_dims or (b.dim,)
    return DensityOperator(np.kron(a.matrix, b.matrix), fa + fb)


def partial_trace(state, keep: Sequence[int]) -> DensityOperator:
    """Reduce ``state`` onto the factors listed in ``keep``.

    Kept factors appear in ascending index order.
    """
    if isinstance(state, PureState):
        dims = state.factor_dims
        keep = _check_keep(keep, dims)
        psi = state.vector.reshape(dims)
        traced = [i for i in range(len(dims)) if i not in keep]
        psi = np.transpose(psi, list(keep) + traced)
        dk = int(np.prod([dims[i] for i in keep]))
        m = psi.reshape(dk, -1)
        return DensityOperator(m @ m.conj().T, tuple(dims[i] for i in keep))
    rho = as_density(state)
    if rho.factor_dims is None:
        raise StructureError("partial_trace needs factor_dims")
    dims = rho.factor_dims
    keep = _check_keep(keep, dims)
    n = len(dims)
    t = rho.matrix.reshape(dims + dims)
    traced = [i for i in range(n) if i not in keep]
    perm = list(keep) + traced
    t = np.transpose(t, perm + [n + i for i in perm])
    dk = int(np.prod([dims[i] for i in keep]))
    dt = int(np.prod([dims[i] for i in traced]))
    t = t.reshape(dk, dt, dk, dt)
    return DensityOperator(np.einsum("ajbj->ab", t), tuple(dims[i] for i in keep))


def _check_keep(keep, dims):
    keep = sorted(set(int(k) for k in keep))
    if not keep or keep[0] < 0 or keep[-1] >= len(dims):
        raise StructureError(f"invalid subsystem indices {keep} for factors {dims}")
    return keep


def dephase(state, basis: np.ndarray | None = None) -> DensityOperator:
    """Delete off-diagonal elements, in the computational basis or in the
    column basis of the unitary ``basis``."""
    rho = as_density(state)
    if basis is None:
        return DensityOperator(np.diag(np.diag(rho.matrix)), rho.factor_dims)
    u = np.asarray(basis, dtype=complex)
    if u.shape != rho.matrix.shape or np.max(np.abs(u.conj().T @ u - np.eye(rho.dim))) > UNITARY_TOL:
        raise ValidationError("dephasing basis is not unitary")
    inner = u.conj().T @ rho.matrix @ u
    return DensityOperator(u @ np.diag(np.diag(inner)) @ u.conj().T, rho.factor_dims)


# ---------------------------------------------------------------------------
# entropies and distances


def entropy_bits(p: np.ndarray) -> float:
    """Shannon entropy of a nonnegative array, no validation. Hot path for optimizers."""
    p = np.asarray(p, dtype=float).ravel()
    p = p[p > 0]
    return float(-np.dot(p, np.log2(p)))


def shannon_entropy(p) -> float:
    p = np.asarray(p, dtype=float).ravel()
    if p.size == 0:
        raise ValidationError("empty probability vector")
    if np.any(p < -1e-12):
        raise ValidationError("probability vector has negative entries")
    s = p.sum()
    if abs(s - 1.0) > 1e-6:
        raise ValidationError(f"probabilities sum to {s!r}")
    p = np.clip(p, 0.0, None)
    return max(0.0, entropy_bits(p / p.sum()))


def binary_entropy(x: float) -> float:
    x = float(x)
    if x < -1e-12 or x > 1 + 1e-12:
        raise ValidationError(f"binary entropy argument {x} outside [0, 1]")
    x = min(max(x, 0.0), 1.0)
    return entropy_bits(np.array([x, 1.0 - x]))


def von_neumann_entropy(state) -> float:
    return max(0.0, entropy_bits(as_density(state).eigenvalues))


def _psd_sqrt(rho: DensityOperator) -> np.ndarray:
    w, v = rho.eigenvalues, rho.eigenvectors
    return (v * np.sqrt(w)) @ v.conj().T


def uhlmann_fidelity(a, b) -> float:
    """Squared-overlap fidelity (Tr sqrt(sqrt(a) b sqrt(a)))**2."""
    a, b = as_density(a), as_density(b)
    if a.dim != b.dim:
        raise ValidationError(f"dimension mismatch {a.dim} vs {b.dim}")
    sa = _psd_sqrt(a)
    m = sa @ b.matrix @ sa
    w = np.linalg.eigvalsh((m + m.conj().T) / 2)
    f = np.sum(np.sqrt(np.clip(w, 0, None))) ** 2
    return float(min(max(f, 0.0), 1.0))


def trace_distance(a, b) -> float:
    a, b = as_density(a), as_density(b)
    if a.dim != b.dim:
        raise ValidationError(f"dimension mismatch {a.dim} vs {b.dim}")
    w = np.linalg.eigvalsh(a.matrix - b.matrix)
    return float(min(0.5 * np.sum(np.abs(w)), 1.0))


# ---------------------------------------------------------------------------
# channels


def _out_factors(ch: KrausChannel, rho: DensityOperator):
    return rho.factor_dims if ch.dim_out == ch.dim_in else None


def apply_channel(ch: KrausChannel, state) -> DensityOperator:
    rho = as_density(state)
    if rho.dim != ch.dim_in:
        raise ValidationError(f"channel expects dim {ch.dim_in}, got {rho.dim}")
    out = sum(k @ rho.matrix @ k.conj().T for k in ch.operators)
    return DensityOperator(out, _out_factors(ch, rho))


def apply_kraus_selective(ch: KrausChannel, state) -> list[tuple[float, DensityOperator]]:
    """Outcome-resolved action: ``[(p_n, rho_n), ...]`` with negligible
    outcomes (p_n < 1e-12) dropped."""
    rho = as_density(state)
    if rho.dim != ch.dim_in:
        raise ValidationError(f"channel expects dim {ch.dim_in}, got {rho.dim}")
    outcomes = []
    for k in ch.operators:
        m = k @ rho.matrix @ k.conj().T
        p = float(np.trace(m).real)
        if p < 1e-12:
            continue
        outcomes.append((p, DensityOperator(m / p, _out_factors(ch, rho))))
    total = sum(p for p, _ in outcomes)
    if abs(total - 1.0) > COMPLETENESS_TOL:
        raise ValidationError(f"outcome probabilities sum to {total!r}")
    return outcomes


# ---------------------------------------------------------------------------
# seeded sampling


def rng_for(seed, *key: int) -> np.random.Generator:
    """Counter-based generator for ``seed`` split along ``key``.

    Distinct keys give statistically independent streams, so sample ``i`` of
    an experiment can be regenerated alone from ``(seed, i)``.
    """
    if isinstance(seed, np.random.Generator):
        return seed
    if isinstance(seed, tuple):
        seed, key = seed[0], tuple(seed[1:]) + key
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.Philox(ss))


def _ginibre(rng, rows, cols):
    return (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) / np.sqrt(2)


def haar_unitaries(n: int, dim: int, rng) -> np.ndarray:
    """``n`` Haar-random unitaries stacked as an (n, dim, dim) array."""
    z = (rng.standard_normal((n, dim, dim)) + 1j * rng.standard_normal((n, dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r, axis1=1, axis2=2)
    return q * (d / np.abs(d))[:, None, :]


def random_unitary(dim: int, seed) -> np.ndarray:
    return haar_unitaries(1, dim, rng_for(seed))[0]


def random_state(dim: int, rank: int | None = None, seed=0, factor_dims=None) -> DensityOperator:
    """Induced-measure random state: rho = G G^dag / Tr(G G^dag), G Ginibre dim x rank."""
    rank = dim if rank is None else rank
    if not 1 <= rank <= dim:
        raise ValidationError(f"rank must lie in [1, {dim}], got {rank}")
    g = _ginibre(rng_for(seed), dim, rank)
    m = g @ g.conj().T
    return DensityOperator(m / np.trace(m).real, factor_dims, seed=seed)


def random_pure(dim: int, seed=0, factor_dims=None) -> PureState:
    g = _ginibre(rng_for(seed), dim, 1).ravel()
    return PureState(g / np.linalg.norm(g), factor_dims, seed=seed)


def basis_state(dim: int, index: int, factor_dims=None) -> PureState:
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return PureState(v, factor_dims)


def maximally_mixed(dim: int, factor_dims=None) -> DensityOperator:
    return DensityOperator(np.eye(dim) / dim, factor_dims)

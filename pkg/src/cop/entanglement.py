"""Entanglement quantities: entanglement entropy, two-qubit concurrence and
entanglement of formation, entanglement of purification, and the checks
relating them to the coherence of purification."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .coherence import decomposition_matrix, generalized_cnot, pure_coherence, relative_entropy_coherence
from .manifold_opt import OptimizerConfig, UnitarySearchResult, minimize_over_unitaries
from .purification import canonical_purification, cop_fixed_basis, optimal_purification
from .qcore import (
    PureState,
    StructureError,
    UnsupportedError,
    ValidationError,
    as_density,
    basis_state,
    binary_entropy,
    entropy_bits,
    partial_trace,
    tensor,
)

MAX_PROP_DIM = 16
_YY = np.kron([[0, -1j], [1j, 0]], [[0, -1j], [1j, 0]])


@dataclass(frozen=True)
class BipartiteCut:
    """Partition of tensor factors into two groups."""

    group_a: tuple[int, ...]
    group_b: tuple[int, ...]
    factor_dims: tuple[int, ...]

    def __post_init__(self):
        a, b = set(self.group_a), set(self.group_b)
        if a & b or a | b != set(range(len(self.factor_dims))) or not a or not b:
            raise StructureError(f"cut {self.group_a}:{self.group_b} does not partition {self.factor_dims}")

    @classmethod
    def first(cls, factor_dims, k: int = 1) -> BipartiteCut:
        """Cut after the first ``k`` factors."""
        n = len(factor_dims)
        return cls(tuple(range(k)), tuple(range(k, n)), tuple(factor_dims))

    @property
    def dims(self) -> tuple[int, int]:
        da = int(np.prod([self.factor_dims[i] for i in self.group_a]))
        db = int(np.prod([self.factor_dims[i] for i in self.group_b]))
        return da, db

    def swapped(self) -> BipartiteCut:
        return BipartiteCut(self.group_b, self.group_a, self.factor_dims)


def _cut_matrix(vector: np.ndarray, cut: BipartiteCut) -> np.ndarray:
    t = vector.reshape(cut.factor_dims)
    t = np.transpose(t, cut.group_a + cut.group_b)
    return t.reshape(cut.dims)


def _schmidt_entropy(m: np.ndarray) -> float:
    if m.shape[0] > m.shape[1]:
        m = m.T
    w = np.linalg.eigvalsh(m @ m.conj().T)
    return max(0.0, entropy_bits(np.clip(w, 0, None)))


def entanglement_entropy(psi: PureState, cut: BipartiteCut | None = None) -> float:
    """Von Neumann entropy of either side of ``cut`` (default: first factor vs rest)."""
    if len(psi.factor_dims) < 2:
        raise StructureError("entanglement entropy needs at least two factors")
    cut = cut or BipartiteCut.first(psi.factor_dims)
    if cut.factor_dims != psi.factor_dims:
        raise StructureError(f"cut built for {cut.factor_dims}, state has {psi.factor_dims}")
    return _schmidt_entropy(_cut_matrix(psi.vector, cut))


def _two_qubit(state):
    rho = as_density(state)
    if rho.dim != 4 or (rho.factor_dims not in (None, (2, 2))):
        raise ValidationError("two-qubit state required")
    return rho


def concurrence(state) -> float:
    """Wootters concurrence from the spin-flipped spectrum."""
    rho = _two_qubit(state)
    r = rho.matrix @ _YY @ rho.matrix.conj() @ _YY
    mu = np.sqrt(np.clip(np.sort(np.linalg.eigvals(r).real)[::-1], 0, None))
    return float(max(0.0, mu[0] - mu[1] - mu[2] - mu[3]))


def eof_two_qubit(state) -> float:
    c = min(concurrence(state), 1.0)
    return binary_entropy((1 + math.sqrt(1 - c * c)) / 2)


def default_split(rank: int) -> tuple[int, int]:
    """Smallest balanced (d_A', d_B') with d_A' * d_B' >= rank."""
    a = math.isqrt(rank - 1) + 1 if rank > 1 else 1
    return a, -(-rank // a)


@dataclass(frozen=True)
class EopResult:
    value: float
    split: tuple[int, int]
    optimizer: UnitarySearchResult | None
    base: np.ndarray  # amplitudes (d_A d_B) x (d_A' d_B') the unitaries act on

    def optimal_amplitudes(self) -> np.ndarray:
        if self.optimizer is None:
            return self.base
        return self.base @ self.optimizer.unitary.T


def _eop_objective(x: np.ndarray, da: int, db: int, a1: int, b1: int) -> float:
    t = x.reshape(da, db, a1, b1).transpose(0, 2, 1, 3).reshape(da * a1, db * b1)
    return _schmidt_entropy(t)


def entanglement_of_purification(
    state,
    config: OptimizerConfig | None = None,
    ancilla_split: tuple[int, int] | None = None,
    *,
    purification: np.ndarray | None = None,
    initial=(),
) -> EopResult:
    """min over ancilla unitaries U of S(AA') for (I x U)|Psi>, |Psi> on A B A' B'.

    ``purification`` is an optional amplitude matrix of shape
    (d_A d_B, d_A' d_B') to start from instead of the eigen-purification;
    ``initial`` adds warm-start ancilla unitaries.
    """
    rho = as_density(state)
    if rho.factor_dims is None or len(rho.factor_dims) != 2:
        raise StructureError("entanglement of purification needs a bipartite state")
    da, db = rho.factor_dims
    a1, b1 = ancilla_split or default_split(rho.rank())
    n = a1 * b1
    if n < rho.rank():
        raise ValidationError(f"ancilla split {a1}x{b1} below rank {rho.rank()}")
    if purification is None:
        x = decomposition_matrix(rho, n)
    else:
        x = np.asarray(purification, dtype=complex).reshape(rho.dim, n)
        if np.max(np.abs(x @ x.conj().T - rho.matrix)) > 1e-9:
            raise ValidationError("supplied amplitudes do not purify the state")
    if n == 1:
        return EopResult(_eop_objective(x, da, db, 1, 1), (a1, b1), None, x)
    res = minimize_over_unitaries(
        n, lambda u: _eop_objective(x @ u.T, da, db, a1, b1), config or OptimizerConfig(), initial)
    return EopResult(res.best_value, (a1, b1), res, x)


def cop_bipartite(state, config: OptimizerConfig | None = None, ancilla_dim: int | None = None):
    """Coherence of purification of a bipartite state in the full product basis."""
    return cop_fixed_basis(state, config, ancilla_dim=ancilla_dim)


@dataclass
class Prop7Report:
    cop: float
    cnot_entanglement: float
    eop: float
    tol: float
    details: dict = field(default_factory=dict)

    @property
    def equality_gap(self) -> float:
        return abs(self.cnot_entanglement - self.cop)

    @property
    def margin(self) -> float:
        return min(-self.equality_gap, self.cop - self.eop)

    @property
    def passed(self) -> bool:
        return self.margin >= -self.tol


def check_prop7(state, config: OptimizerConfig | None = None, tol: float = 1e-6) -> Prop7Report:
    """Convert the C_P-optimal purification into entanglement with a generalized CNOT.

    |Psi>_{AA'} (optimal for C_P) is joined with |0>_{BB'}, d_B = d_A and
    d_B' = d_A', and the CNOT acts with AA' as control. The cut AA':BB' must
    carry exactly C_P(rho_A), and the E_P of the resulting rho_AB, searched from
    the produced purification, cannot exceed it.
    """
    rho = as_density(state)
    res = cop_fixed_basis(rho, config)
    pur = optimal_purification(res, rho)
    da, n = rho.dim, pur.ancilla_dim
    d_ctrl = da * n
    if d_ctrl * d_ctrl > MAX_PROP_DIM:
        raise UnsupportedError(f"joint dimension {d_ctrl ** 2} exceeds {MAX_PROP_DIM}")
    joint = tensor(PureState(pur.state.vector, (da, n)), basis_state(d_ctrl, 0, (da, n)))
    out = PureState(generalized_cnot(d_ctrl, d_ctrl) @ joint.vector, (da, n, da, n))
    e_cnot = entanglement_entropy(out, BipartiteCut((0, 1), (2, 3), out.factor_dims))
    # reorder A A' B B' -> A B | A' B' for the E_P search
    amps = out.vector.reshape(da, n, da, n).transpose(0, 2, 1, 3).reshape(da * da, n * n)
    rho_ab = partial_trace(PureState(amps.ravel(), (da, da, n * n)), [0, 1])
    eop = entanglement_of_purification(rho_ab, config, (n, n), purification=amps)
    return Prop7Report(res.value, e_cnot, eop.value, tol, {"split": (n, n)})


@dataclass
class Prop8Report:
    cop: float
    eop: float
    tol: float
    coincidence: bool
    coincidence_gap: float
    additivity_gap: float
    details: dict = field(default_factory=dict)

    @property
    def gap(self) -> float:
        return self.cop - self.eop

    @property
    def passed(self) -> bool:
        return self.gap >= -self.tol

    @property
    def additivity_holds(self) -> bool:
        return abs(self.additivity_gap) <= self.tol


def _additivity_gap(x: np.ndarray, da: int, db: int, a1: int, b1: int) -> float:
    """C_R(Psi) - [C_R(rho_AA') + C_R(rho_BB') + S(rho_AA')] for the purification x."""
    vec = x.reshape(da, db, a1, b1).transpose(0, 2, 1, 3).ravel()
    psi = PureState(vec / np.linalg.norm(vec), (da * a1, db * b1))
    left = partial_trace(psi, [0])
    right = partial_trace(psi, [1])
    s = entanglement_entropy(psi)
    return pure_coherence(vec) - (relative_entropy_coherence(left) + relative_entropy_coherence(right) + s)


def check_prop8(state, config: OptimizerConfig | None = None, tol: float = 1e-6,
                ancilla_split: tuple[int, int] | None = None) -> Prop8Report:
    """C_P(rho_AB) >= E_P(rho_AB), plus the report-only optimizer-coincidence probe.

    Both searches rotate the same eigen-purification with ancilla A'B'; the
    C_P-optimal ancilla unitary seeds the E_P search, since the cut entropy of
    any purification is bounded by its dephased entropy.
    """
    rho = as_density(state)
    if rho.factor_dims is None or len(rho.factor_dims) != 2:
        raise StructureError("check_prop8 needs a bipartite state")
    da, db = rho.factor_dims
    a1, b1 = ancilla_split or default_split(rho.dim)
    n = a1 * b1
    if rho.dim > MAX_PROP_DIM:
        raise UnsupportedError(f"dimension {rho.dim} exceeds {MAX_PROP_DIM}")
    cp = cop_fixed_basis(rho, config, ancilla_dim=n)
    warm = [cp.optimizer.unitary] if cp.optimizer is not None else []
    ep = entanglement_of_purification(rho, config, (a1, b1), initial=warm)
    x_ep = ep.optimal_amplitudes()
    cr_at_ep = entropy_bits(np.abs(x_ep) ** 2)
    x_cp = canonical_purification(rho, n).amplitudes
    if cp.optimizer is not None:
        x_cp = x_cp @ cp.optimizer.unitary.T
    return Prop8Report(
        cop=cp.value,
        eop=ep.value,
        tol=tol,
        coincidence=abs(cr_at_ep - cp.value) <= tol,
        coincidence_gap=cr_at_ep - cp.value,
        additivity_gap=_additivity_gap(x_cp, da, db, a1, b1),
        details={"split": (a1, b1)},
    )

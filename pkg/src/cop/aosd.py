"""Assisted optimal state discrimination (AOSD) of two non-orthogonal preparations.

The system-auxiliary unitary is never built; only its images of the two
preparations matter:

    U|psi_+>|A> = sqrt(1 - |a_+|^2) |+>|0> + a_+ |0>|1>
    U|psi_->|A> = sqrt(1 - |a_-|^2) |->|0> + a_- |0>|1>

with overlap alpha = <psi_+|psi_-> = conj(a_+) a_-.
"""
from __future__ import annotations

import csv
import io
import logging
import math
from dataclasses import dataclass

import numpy as np

from .entanglement import concurrence
from .manifold_opt import OptimizerConfig
from .purification import cop_fixed_basis, cop_of_dephased
from .qcore import DensityOperator, PureState, ValidationError, binary_entropy, partial_trace, rng_for

log = logging.getLogger(__name__)

_K0 = np.array([1.0, 0.0])
_K1 = np.array([0.0, 1.0])
_PLUS = (_K0 + _K1) / math.sqrt(2)
_MINUS = (_K0 - _K1) / math.sqrt(2)

CSV_HEADER = ("alpha", "ps", "concurrence", "cop", "cop_dephased")


@dataclass(frozen=True)
class AosdConfig:
    alpha_plus: complex
    alpha_minus: complex
    p_plus: float = 0.5

    def __post_init__(self):
        if abs(self.alpha_plus) > 1 + 1e-12 or abs(self.alpha_minus) > 1 + 1e-12:
            raise ValidationError("|alpha_+| and |alpha_-| must not exceed 1")
        if not 0.0 <= self.p_plus <= 1.0:
            raise ValidationError("prior p_+ must lie in [0, 1]")

    @property
    def p_minus(self) -> float:
        return 1.0 - self.p_plus

    @property
    def alpha(self) -> complex:
        return complex(np.conj(self.alpha_plus) * self.alpha_minus)

    @classmethod
    def from_overlap(cls, alpha: complex, alpha_plus: complex, p_plus: float = 0.5) -> AosdConfig:
        """Derive alpha_- = alpha / conj(alpha_+)."""
        if abs(alpha_plus) == 0:
            if abs(alpha) > 0:
                raise ValidationError("alpha_+ = 0 forces alpha = 0")
            return cls(0j, 0j, p_plus)
        return cls(complex(alpha_plus), complex(alpha / np.conj(alpha_plus)), p_plus)

    @classmethod
    def optimal(cls, abs_alpha: float, phases=(0.0, 0.0)) -> AosdConfig:
        """Equal priors with |alpha_+| = |alpha_-| = sqrt|alpha|."""
        r = math.sqrt(abs_alpha)
        return cls(r * np.exp(1j * phases[0]), r * np.exp(1j * phases[1]), 0.5)

    @classmethod
    def constant(cls, abs_alpha: float, sign: int = 1, phases=(0.0, 0.0)) -> AosdConfig:
        """Equal priors with |alpha_+|^2 = (1 +- sqrt(1 - 4|alpha|^2)) / 2, |alpha| <= 1/2."""
        if abs_alpha > 0.5 + 1e-12:
            raise ValidationError("constant-success condition needs |alpha| <= 1/2")
        big = (1 + math.sqrt(max(0.0, 1 - 4 * abs_alpha ** 2))) / 2
        small = abs_alpha ** 2 / big  # roots multiply to |alpha|^2; avoids 1 - big cancellation
        s2, rest = (big, small) if sign > 0 else (small, big)
        return cls(math.sqrt(s2) * np.exp(1j * phases[0]), math.sqrt(rest) * np.exp(1j * phases[1]), 0.5)


def success_probability(cfg: AosdConfig) -> float:
    return 1.0 - cfg.p_plus * abs(cfg.alpha_plus) ** 2 - cfg.p_minus * abs(cfg.alpha_minus) ** 2


def branch_states(cfg: AosdConfig) -> tuple[PureState, PureState]:
    """Post-unitary images of |psi_+>|A> and |psi_->|A> on system x auxiliary."""
    def branch(sys_state, a):
        v = math.sqrt(max(0.0, 1 - abs(a) ** 2)) * np.kron(sys_state, _K0) + a * np.kron(_K0, _K1)
        return PureState(v / np.linalg.norm(v), (2, 2))
    return branch(_PLUS, cfg.alpha_plus), branch(_MINUS, cfg.alpha_minus)


def joint_state(cfg: AosdConfig) -> DensityOperator:
    bp, bm = branch_states(cfg)
    m = cfg.p_plus * np.outer(bp.vector, bp.vector.conj()) + cfg.p_minus * np.outer(bm.vector, bm.vector.conj())
    return DensityOperator(m, (2, 2))


def reduced_system_state(cfg: AosdConfig) -> DensityOperator:
    return partial_trace(joint_state(cfg), [0])


def reduced_system_closed_form(cfg: AosdConfig) -> np.ndarray:
    """The equal-prior 2x2 system matrix written in terms of p_s, |alpha| and |alpha_+|."""
    if abs(cfg.p_plus - 0.5) > 1e-12:
        raise ValidationError("closed form holds for equal priors only")
    ps = success_probability(cfg)
    ap2 = abs(cfg.alpha_plus) ** 2
    off = 0.0 if ap2 == 0 else 0.25 * (abs(cfg.alpha) ** 2 / ap2 - ap2)
    return np.array([[1 - ps / 2, off], [off, ps / 2]])


def parse_grid(spec: str) -> np.ndarray:
    """'start:stop:count' -> inclusive linspace."""
    try:
        start, stop, count = spec.split(":")
        return np.linspace(float(start), float(stop), int(count))
    except ValueError as exc:
        raise ValidationError(f"bad grid {spec!r}, expected start:stop:count") from exc


def sweep(grid, condition: str = "optimal", config: OptimizerConfig | None = None,
          sign: int = 1, random_phases: bool = False, seed=0) -> list[dict]:
    """Tabulate |alpha|, p_s, concurrence, C_P(rho_S) and C_P(Delta[rho_S]).

    Under the ``constant`` condition grid points with |alpha| > 1/2 are skipped.
    """
    rows = []
    for k, a in enumerate(np.asarray(grid, dtype=float)):
        phases = (0.0, 0.0)
        if random_phases:
            phases = tuple(2 * np.pi * rng_for(seed, k).random(2))
        if condition == "optimal":
            cfg = AosdConfig.optimal(a, phases)
        elif condition == "constant":
            if a > 0.5 + 1e-12:
                log.info("skipping |alpha| = %g beyond the constant-success range", a)
                continue
            cfg = AosdConfig.constant(a, sign, phases)
        else:
            raise ValidationError(f"unknown condition {condition!r}")
        rho_s = reduced_system_state(cfg)
        rows.append({
            "alpha": float(a),
            "ps": success_probability(cfg),
            "concurrence": concurrence(joint_state(cfg)),
            "cop": cop_fixed_basis(rho_s, config).value,
            "cop_dephased": cop_of_dephased(rho_s),
        })
    return rows


def predicted_cop(ps: float) -> float:
    """h(p_s / 2)."""
    return binary_entropy(ps / 2)


def rows_to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        w.writerow([f"{r[k] + 0.0:.9g}" for k in CSV_HEADER])  # + 0.0 drops -0
    return buf.getvalue()

"""Multi-start minimization of real objectives over the unitary group U(d).

A unitary is parameterized by d**2 reals through an anti-Hermitian generator
``A`` (``U = exp(A)``): ``d`` diagonal phases followed by the real and
imaginary parts of the ``d(d-1)/2`` strictly-upper entries. Each restart runs
Nelder-Mead in that chart. Restart 0 always starts at the identity.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from scipy.linalg import schur
from scipy.optimize import minimize

from .qcore import haar_unitaries, rng_for

log = logging.getLogger(__name__)

Objective = Callable[[np.ndarray], float]


@dataclass(frozen=True)
class OptimizerConfig:
    restarts: int = 16
    max_iters: int = 2000
    opt_tol: float = 1e-9
    step_tol: float = 1e-10
    seed: int = 0
    # extra Nelder-Mead passes restarted from the incumbent point
    polish: int = 2

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")

    def scaled(self, factor: int) -> OptimizerConfig:
        """Same config with ``factor`` times as many restarts."""
        return OptimizerConfig(self.restarts * factor, self.max_iters, self.opt_tol,
                               self.step_tol, self.seed, self.polish)


@dataclass(frozen=True)
class UnitaryParams:
    dim: int
    params: np.ndarray

    def unitary(self) -> np.ndarray:
        return exp_map(self.params, self.dim)


@dataclass(frozen=True)
class UnitarySearchResult:
    best_params: UnitaryParams
    best_value: float
    per_restart_values: list = field(default_factory=list)
    converged: bool = False
    best_restart: int = 0

    @property
    def unitary(self) -> np.ndarray:
        return self.best_params.unitary()


def _dim_from_params(params) -> int:
    d = math.isqrt(len(params))
    if d * d != len(params):
        raise ValueError(f"{len(params)} parameters do not describe a d x d generator")
    return d


@lru_cache(maxsize=None)
def _generator_basis(d: int) -> np.ndarray:
    """Matrix B, shape (d*d, d*d), with vec(A) = params @ B."""
    iu = np.triu_indices(d, 1)
    k = len(iu[0])
    basis = np.zeros((d * d, d, d), dtype=complex)
    for j in range(d):
        basis[j, j, j] = 1j
    for m, (r, c) in enumerate(zip(*iu)):
        basis[d + m, r, c], basis[d + m, c, r] = 1.0, -1.0
        basis[d + k + m, r, c], basis[d + k + m, c, r] = 1j, 1j
    basis = basis.reshape(d * d, d * d)
    basis.setflags(write=False)
    return basis


def generator(params, dim: int | None = None) -> np.ndarray:
    """Anti-Hermitian generator for ``params``."""
    params = np.asarray(params, dtype=float)
    d = dim or _dim_from_params(params)
    return (params @ _generator_basis(d)).reshape(d, d)


def exp_map(params, dim: int | None = None) -> np.ndarray:
    """U = exp(A), computed by diagonalizing the Hermitian matrix iA."""
    w, v = np.linalg.eigh(1j * generator(params, dim))
    return (v * np.exp(-1j * w)) @ v.conj().T


def log_map(u: np.ndarray) -> np.ndarray:
    """Parameters of a generator A with exp(A) = u (principal branch)."""
    u = np.asarray(u, dtype=complex)
    d = u.shape[0]
    t, z = schur(u, output="complex")
    phases = np.angle(np.diag(t))
    a = (z * (1j * phases)) @ z.conj().T
    a = (a - a.conj().T) / 2
    iu = np.triu_indices(d, 1)
    return np.concatenate([np.imag(np.diag(a)), a[iu].real, a[iu].imag])


class _NonFinite(Exception):
    pass


def _run_restart(f, x0, config: OptimizerConfig):
    opts = {"maxiter": config.max_iters, "xatol": config.step_tol, "fatol": config.opt_tol}
    res = minimize(f, x0, method="Nelder-Mead", options=opts)
    x, fx, ok = res.x, float(res.fun), bool(res.success)
    for _ in range(config.polish):
        res = minimize(f, x, method="Nelder-Mead", options=opts)
        improved = fx - float(res.fun)
        if float(res.fun) < fx:
            x, fx = res.x, float(res.fun)
        ok = ok and bool(res.success)
        if improved <= config.opt_tol:
            break
    return x, fx, ok


def minimize_over_unitaries(
    dim: int,
    objective: Objective,
    config: OptimizerConfig | None = None,
    initial: Sequence[np.ndarray] = (),
) -> UnitarySearchResult:
    """Minimize ``objective(U)`` over U(dim).

    Restart order: identity, then each unitary in ``initial`` (warm starts),
    then ``config.restarts - 1`` Haar-random starting points drawn from
    ``config.seed``. A restart whose objective turns non-finite is aborted and
    recorded as ``inf``. Ties go to the lowest restart index.
    """
    config = config or OptimizerConfig()

    def f(x):
        val = float(objective(exp_map(x, dim)))
        if not math.isfinite(val):
            raise _NonFinite(val)
        return val

    rng = rng_for(config.seed, dim)
    starts = [np.zeros(dim * dim)]
    starts += [log_map(u) for u in initial]
    starts += [log_map(u) for u in haar_unitaries(config.restarts - 1, dim, rng)]

    values, best = [], None
    for i, x0 in enumerate(starts):
        try:
            x, fx, ok = _run_restart(f, x0, config)
        except _NonFinite as exc:
            log.warning("restart %d aborted: non-finite objective %s", i, exc)
            values.append(math.inf)
            continue
        values.append(fx)
        if best is None or fx < best[1]:
            best = (x, fx, ok, i)
    if best is None:
        raise FloatingPointError("objective was non-finite on every restart")
    x, fx, ok, i = best
    return UnitarySearchResult(UnitaryParams(dim, x), fx, values, ok, i)


def grid_oracle(dim: int, objective: Objective, n_samples: int, seed=0, batch: int = 4096) -> float:
    """Minimum of ``objective`` over the identity plus ``n_samples`` Haar unitaries.

    Pure random search; an independent check on the optimizer, never used to
    produce reported values.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    best = float(objective(np.eye(dim, dtype=complex)))
    rng = rng_for(seed, 0x0AC1E)
    done = 0
    while done < n_samples:
        n = min(batch, n_samples - done)
        for u in haar_unitaries(n, dim, rng):
            val = float(objective(u))
            if val < best:
                best = val
        done += n
    return best

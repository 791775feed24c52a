"""Spectral radius and leading eigenvector of nonnegative matrices, plus
isoradial reductions: Schur-like compressions onto an index subset using
the shift rho(M) I, which preserve the spectral radius and the leading
eigenvector's projection.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import ConfigError, NumericalError


@dataclass(frozen=True)
class NumericsConfig:
    """Tolerances for the numerical kernels, surfaced in one place."""

    power_tol: float = 1e-12
    power_iter_factor: int = 100  # iteration cap = factor * n
    dense_fallback_max_n: int = 64
    solve_residual_tol: float = 1e-10


DEFAULT_NUMERICS = NumericsConfig()


@dataclass(frozen=True)
class SpectralData:
    """Spectral radius rho, leading eigenvector v (entries summing to 1,
    strictly positive for irreducible input), and the final residual
    ||M v - rho v||_inf."""

    rho: float
    leading_vector: np.ndarray
    residual: float


@dataclass(frozen=True)
class ReducedMatrix:
    entries: np.ndarray
    subset: tuple
    source_rho: float


def _dense_spectral(M: np.ndarray) -> SpectralData:
    vals, vecs = np.linalg.eig(M)
    k = int(np.argmax(np.abs(vals)))
    rho = float(np.abs(vals[k]))
    v = np.real(vecs[:, k])
    s = v.sum()
    if s < 0:
        v = -v
    v = v / v.sum()
    residual = float(np.max(np.abs(M @ v - rho * v)))
    return SpectralData(rho=rho, leading_vector=v, residual=residual)


def spectral_data(
    M: np.ndarray,
    tol: float = None,
    stochastic: bool = False,
    config: NumericsConfig = DEFAULT_NUMERICS,
) -> SpectralData:
    """Spectral radius and normalized leading eigenvector of a nonnegative
    matrix, by power iteration on M + I (the shift defeats periodicity).

    The caller is expected to have verified irreducibility (strong
    connectivity of the associated graph); that is what guarantees a
    strictly positive eigenvector.  Convergence uses the Collatz-Wielandt
    ratio spread; on non-convergence a dense eigensolver is used for
    n <= config.dense_fallback_max_n, otherwise an error reports the last
    residual.  When ``stochastic`` is set, rho is snapped to exactly 1 if
    it lands within tol of 1.
    """
    M = np.asarray(M, dtype=np.float64)
    n = M.shape[0]
    if n == 0:
        raise ConfigError("empty matrix has no spectral data")
    if tol is None:
        tol = config.power_tol
    if n == 1:
        rho = float(M[0, 0])
        return SpectralData(rho=rho, leading_vector=np.ones(1), residual=0.0)

    v = np.full(n, 1.0 / n)
    cap = config.power_iter_factor * n
    spread = np.inf
    rho = np.nan
    for _ in range(cap):
        w = M @ v + v
        ratios = w / v
        lo = float(ratios.min())
        hi = float(ratios.max())
        if not np.isfinite(hi) or hi <= 0.0:
            break
        v = w / w.sum()
        spread = hi - lo
        rho = 0.5 * (lo + hi) - 1.0
        if spread <= tol * max(1.0, hi):
            break
    residual = float(np.max(np.abs(M @ v - rho * v))) if np.isfinite(rho) else np.inf
    if not (spread <= tol * max(1.0, abs(rho) + 1.0)) or residual > max(tol, 1e-10):
        if n <= config.dense_fallback_max_n:
            sd = _dense_spectral(M)
            rho, v, residual = sd.rho, sd.leading_vector, sd.residual
        else:
            raise NumericalError(
                f"power iteration did not converge within {cap} iterations; "
                f"last residual {residual:.3e}"
            )
    if stochastic and abs(rho - 1.0) < max(tol, 1e-9):
        rho = 1.0
    return SpectralData(rho=rho, leading_vector=v, residual=residual)


def isoradial_reduction(
    M: np.ndarray,
    subset: Sequence[int],
    rho: float,
    config: NumericsConfig = DEFAULT_NUMERICS,
) -> ReducedMatrix:
    """Reduce M onto the index subset S:

        M_SS - M_SC (M_CC - rho I)^(-1) M_CS,

    where C is the complement of S.  Computed with a pivoted linear solve
    of the shifted complement block rather than an explicit inverse.  For
    nonnegative irreducible M the block is safely nonsingular because the
    complement's spectral radius is strictly below rho; singularity is
    guarded anyway.
    """
    M = np.asarray(M, dtype=np.float64)
    n = M.shape[0]
    subset = tuple(int(i) for i in subset)
    if len(subset) == 0:
        raise ConfigError("reduction subset must be nonempty")
    if len(set(subset)) != len(subset):
        raise ConfigError("reduction subset has repeated indices")
    if any(i < 0 or i >= n for i in subset):
        raise ConfigError("reduction subset index out of range")
    comp = np.setdiff1d(np.arange(n), np.array(subset, dtype=np.int64))
    S = np.array(subset, dtype=np.int64)
    if comp.size == 0:
        return ReducedMatrix(M[np.ix_(S, S)].copy(), subset, float(rho))
    A = M[np.ix_(comp, comp)] - rho * np.eye(comp.size)
    B = M[np.ix_(comp, S)]
    try:
        X = np.linalg.solve(A, B)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"shifted complement block is singular: {exc}") from exc
    scale = max(1.0, float(np.max(np.abs(A))))
    res = float(np.max(np.abs(A @ X - B)))
    if res > config.solve_residual_tol * scale:
        raise NumericalError(
            f"shifted-block solve residual {res:.3e} exceeds tolerance"
        )
    out = M[np.ix_(S, S)] - M[np.ix_(S, comp)] @ X
    return ReducedMatrix(out, subset, float(rho))


def sequential_reduction(
    M: np.ndarray,
    chain: Sequence[Sequence[int]],
    rho: Optional[float] = None,
    config: NumericsConfig = DEFAULT_NUMERICS,
) -> ReducedMatrix:
    """Apply isoradial reductions along a strictly nested chain of index
    sets, holding rho(M) fixed throughout (each step preserves the spectral
    radius, so the shift never changes).  The result depends only on the
    final set of the chain.
    """
    M = np.asarray(M, dtype=np.float64)
    n = M.shape[0]
    if rho is None:
        rho = spectral_data(M, config=config).rho
    sets = [tuple(sorted(int(i) for i in s)) for s in chain]
    prev = tuple(range(n))
    for s in sets:
        if not s:
            raise ConfigError("chain sets must be nonempty")
        if not set(s) < set(prev):
            raise ConfigError("chain must be strictly nested")
        prev = s

    current = M
    current_idx = list(range(n))
    for s in sets:
        positions = [current_idx.index(i) for i in s]
        current = isoradial_reduction(current, positions, rho, config=config).entries
        current_idx = list(s)
    return ReducedMatrix(current, tuple(current_idx), float(rho))

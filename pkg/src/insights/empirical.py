# src/insights/empirical.py
"""Fractional-part statistics over zeros: M(y1, y2; T), DM grids, weighted h-sums
and convergence against the integral of h g_alpha.

Unless asked otherwise, N(T) is the observed count of zeros up to T.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Sequence

import numpy as np
import pandas as pd
from mpmath import mp

from src.data_pipeline.zero_store import ZeroSet, count_upto, n_asymptotic
from src.number_theory.density import TRUNCATION_THRESHOLD, Grid2D, TestFunction, integral_h_g
from src.number_theory.landau import check_range, phase_sum
from src.number_theory.relations import AlphaVector, RelationSystem, row_residuals, validate
from src.number_theory.summation import DEFAULT_CHUNK_SIZE, map_chunks
from src.utils.errors import DimensionError, DomainError, EmpiricalError, InconsistentSystemError

logger = logging.getLogger(__name__)

TAIL_NOISE_ALLOWANCE = 1.2


def _alpha_floats(alpha: AlphaVector) -> np.ndarray:
    return np.array(alpha.as_floats(), dtype=np.float64)


def _fractional(gammas: np.ndarray, alpha: np.ndarray) -> np.ndarray:
    products = gammas[:, None] * alpha[None, :]
    return products - np.floor(products)


def fractional_parts(zeros: ZeroSet, alpha: AlphaVector, T: float) -> np.ndarray:
    """({alpha_1 gamma}, ..., {alpha_n gamma}) for every gamma <= T, shape (N, n)"""
    check_range(zeros, T)
    return _fractional(zeros.slice_upto(T), _alpha_floats(alpha))


def iter_fractional_parts(zeros: ZeroSet, alpha: AlphaVector, T: float,
                          chunk_size: int = DEFAULT_CHUNK_SIZE) -> Iterator[np.ndarray]:
    check_range(zeros, T)
    gammas = zeros.slice_upto(T)
    a = _alpha_floats(alpha)
    for start in range(0, gammas.shape[0], chunk_size):
        yield _fractional(gammas[start:start + chunk_size], a)


def _zero_count(zeros: ZeroSet, T: float, use_asymptotic: bool) -> float:
    if use_asymptotic:
        logger.warning("Using the asymptotic zero count in place of the observed count")
        return n_asymptotic(T)
    return count_upto(zeros, T)


def _require_2d(alpha: AlphaVector):
    if alpha.n != 2:
        raise DimensionError(f"this statistic needs n = 2, alpha has n = {alpha.n}")


def m_statistic(zeros: ZeroSet, alpha: AlphaVector, y1: float, y2: float, T: float,
                use_asymptotic: bool = False, workers: int = 1,
                chunk_size: int = DEFAULT_CHUNK_SIZE) -> float:
    """(1/T) #{gamma <= T: {alpha_1 gamma} < y1, {alpha_2 gamma} < y2} - y1 y2 N(T)/T"""
    _require_2d(alpha)
    if not (0 <= y1 <= 1 and 0 <= y2 <= 1):
        raise DomainError(f"y1, y2 must lie in [0, 1], got ({y1}, {y2})")
    if not T > 0:
        raise DomainError(f"T must be positive, got {T}")
    check_range(zeros, T)

    gammas = zeros.slice_upto(T)
    a = _alpha_floats(alpha)

    def box_count(start: int, stop: int) -> int:
        parts = _fractional(gammas[start:stop], a)
        return int(np.count_nonzero((parts[:, 0] < y1) & (parts[:, 1] < y2)))

    count = sum(map_chunks(box_count, gammas.shape[0], chunk_size, workers))
    n_count = _zero_count(zeros, T, use_asymptotic)
    return count / T - y1 * y2 * n_count / T


@dataclass(frozen=True)
class EmpiricalRun:
    alpha: AlphaVector
    T: float
    n_obs: int
    grid: Grid2D
    counts: np.ndarray
    provenance: Dict = field(default_factory=dict)

    @property
    def resolution(self) -> int:
        return self.grid.resolution

    def mass_balance(self) -> int:
        """R^2 T sum of DM Delta^2 in exact integers; zero whenever every zero was binned"""
        cells = self.resolution * self.resolution
        return int(self.counts.sum()) * cells - self.n_obs * cells

    def metadata(self) -> Dict:
        return {
            "kind": "DM",
            "alpha": self.alpha.decimal_strings(30),
            "T": self.T,
            "n_obs": self.n_obs,
            "delta": f"1/{self.resolution}",
            "resolution": self.resolution,
            **self.provenance,
        }


def resolution_from_delta(delta: float) -> int:
    resolution = round(1.0 / delta)
    if resolution < 1 or not math.isclose(resolution * delta, 1.0, rel_tol=1e-12):
        raise DomainError(f"Delta must be 1/R for an integer R, got {delta}")
    return resolution


def cell_counts(zeros: ZeroSet, alpha: AlphaVector, resolution: int, T: float,
                workers: int = 1, chunk_size: int = DEFAULT_CHUNK_SIZE) -> np.ndarray:
    """R x R histogram of fractional-part pairs; cells are left-closed, right-open"""
    _require_2d(alpha)
    check_range(zeros, T)
    gammas = zeros.slice_upto(T)
    a = _alpha_floats(alpha)
    edges = np.arange(resolution + 1, dtype=np.float64) / resolution

    def histogram(start: int, stop: int) -> np.ndarray:
        parts = _fractional(gammas[start:stop], a)
        rows = np.searchsorted(edges, parts[:, 0], side="right") - 1
        cols = np.searchsorted(edges, parts[:, 1], side="right") - 1
        return np.bincount(rows * resolution + cols, minlength=resolution * resolution).astype(np.int64)

    counts = np.zeros(resolution * resolution, dtype=np.int64)
    for partial in map_chunks(histogram, gammas.shape[0], chunk_size, workers):
        counts += partial
    return counts.reshape(resolution, resolution)


def dm_grid(zeros: ZeroSet, alpha: AlphaVector, T: float, resolution: int = 100,
            use_asymptotic: bool = False, workers: int = 1,
            chunk_size: int = DEFAULT_CHUNK_SIZE) -> EmpiricalRun:
    """DM(i, j) = (count(i, j)/T - Delta^2 N/T)/Delta^2 in one pass over the zeros"""
    if not T > 0:
        raise DomainError(f"T must be positive, got {T}")
    if resolution < 1:
        raise DomainError(f"resolution must be positive, got {resolution}")

    counts = cell_counts(zeros, alpha, resolution, T, workers, chunk_size)
    n_obs = count_upto(zeros, T)
    n_count = _zero_count(zeros, T, use_asymptotic)
    delta = 1.0 / resolution
    values = (counts / T - delta * delta * n_count / T) / (delta * delta)

    provenance = {"dataset": zeros.dataset_id, "use_asymptotic": use_asymptotic}
    grid = Grid2D(resolution, values)
    run = EmpiricalRun(alpha, float(T), n_obs, grid, counts, provenance)
    grid.metadata.update(run.metadata())
    logger.info(f"DM grid R={resolution}, T={T}: {n_obs} zeros binned")
    return run


def _half_spectrum(h: TestFunction):
    """One representative of each +-m pair (first nonzero entry positive), in sorted order"""
    for m in sorted(h.coeffs):
        first = next((v for v in m if v != 0), 0)
        if first > 0:
            yield m, h.coeffs[m]


def h_sum(zeros: ZeroSet, h: TestFunction, alpha: AlphaVector, T: float, workers: int = 1,
          chunk_size: int = DEFAULT_CHUNK_SIZE) -> float:
    """(1/T)(sum_{gamma <= T} h(gamma alpha) - N(T) c_0) = (1/T) sum_m 2 Re(c_m S_m) over half the spectrum

    S_m = sum e^(2 pi i gamma m.alpha); the c_0 N(T) terms cancel exactly.
    """
    if not h.coeffs:
        return 0.0
    if h.n != alpha.n:
        raise DimensionError(f"test function has n = {h.n}, alpha has n = {alpha.n}")
    if not T > 0:
        raise DomainError(f"T must be positive, got {T}")
    check_range(zeros, T)

    total = 0.0
    for m, c in _half_spectrum(h):
        with mp.workprec(alpha.precision):
            frequency = float(2 * mp.pi * alpha.dot(m))
        s = phase_sum(zeros, frequency, T, workers, chunk_size)
        total += 2.0 * (c * s).real
    return total / T


@dataclass
class ConvergenceReport:
    limit: float
    rows: List[Dict]
    improving: bool
    system: Dict

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.rows, columns=["T", "n_obs", "h_sum", "integral_h_g", "difference"])

    def to_dict(self) -> Dict:
        return {"integral_h_g": self.limit, "improving": self.improving,
                "system": self.system, "rows": self.rows}


def check_consistency(system: RelationSystem, alpha: AlphaVector, tolerance: Optional[float] = None):
    """Every row must satisfy |b_j . alpha - P_j| below ``tolerance``"""
    if system.n != alpha.n:
        raise InconsistentSystemError(f"system has n = {system.n}, alpha has n = {alpha.n}")
    with mp.workprec(alpha.precision):
        bound = mp.mpf(tolerance) if tolerance is not None else mp.mpf(2) ** (-alpha.precision + 16)
        for index, residual in row_residuals(system, alpha):
            if residual > bound:
                raise InconsistentSystemError(
                    f"row {index} ({list(system.rows[index].b)}) misses its target by {mp.nstr(residual, 5)}")


def theorem_check(zeros: ZeroSet, h: TestFunction, system: RelationSystem, alpha: AlphaVector,
                  T_list: Sequence[float], workers: int = 1, tolerance: Optional[float] = None,
                  noise_allowance: float = TAIL_NOISE_ALLOWANCE,
                  chunk_size: int = DEFAULT_CHUNK_SIZE,
                  truncation_threshold: float = TRUNCATION_THRESHOLD) -> ConvergenceReport:
    """Table of (T, h_sum(T), integral of h g, difference) along increasing T"""
    validate(system)
    check_consistency(system, alpha, tolerance)
    T_list = [float(T) for T in T_list]
    if not T_list:
        raise EmpiricalError("T_list is empty")
    if any(later <= earlier for earlier, later in zip(T_list, T_list[1:])):
        raise EmpiricalError(f"T_list must be increasing, got {T_list}")

    limit = integral_h_g(system, h, truncation_threshold)
    rows = []
    for T in T_list:
        value = h_sum(zeros, h, alpha, T, workers, chunk_size)
        rows.append({"T": T, "n_obs": count_upto(zeros, T), "h_sum": value,
                     "integral_h_g": limit, "difference": value - limit})

    median = rows[(len(rows) - 1) // 2]["difference"]
    last = rows[-1]["difference"]
    improving = abs(last) <= noise_allowance * abs(median)
    if not improving:
        logger.warning(f"Difference at T={T_list[-1]} ({last:.3g}) did not improve on the median ({median:.3g})")
    logger.info(f"Theorem check: limit {limit:.6f}, final difference {last:.3g}")
    return ConvergenceReport(limit, rows, bool(improving), system.to_dict())


def grid_correlation(first: Grid2D, second: Grid2D) -> float:
    """Pearson r between two grids of equal resolution"""
    if first.resolution != second.resolution:
        raise DimensionError(f"resolutions differ: {first.resolution} vs {second.resolution}")
    a, b = first.values.ravel(), second.values.ravel()
    if np.std(a) == 0 or np.std(b) == 0:
        logger.warning("Correlation undefined for a constant grid")
        return float("nan")
    return float(np.corrcoef(a, b)[0, 1])

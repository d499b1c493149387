# src/number_theory/landau.py
"""Landau-type sums over zeros and their main terms.

With rho = 1/2 + i gamma, sum x^rho = sqrt(x) sum x^(i gamma); every sum here is
computed in the normalized form sum e^(i gamma f).
"""
import logging
import math
from dataclasses import asdict, dataclass
from typing import Dict, Optional

import numpy as np
from mpmath import MPContext

from src.data_pipeline.zero_store import ZeroSet, count_upto
from src.number_theory.primes import nearest_prime_power, von_mangoldt
from src.number_theory.summation import DEFAULT_CHUNK_SIZE, compensated_complex_sum
from src.utils.errors import DomainError, InsufficientDataError, LandauError

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi
DEGENERATE_LOG_RATIO = 2.0 ** -40
EXTENDED_PHASE_BITS = 96


def phase_sum(zeros: ZeroSet, frequency: float, T: float, workers: int = 1,
              chunk_size: int = DEFAULT_CHUNK_SIZE, extended_phase: bool = False,
              extended_bits: int = EXTENDED_PHASE_BITS) -> complex:
    """sum over 0 < gamma <= T of e^(i gamma frequency)

    Phases are reduced with fmod (sign-symmetric), so negating ``frequency``
    conjugates the result exactly.
    """
    if extended_phase and extended_bits < 53:
        raise LandauError(f"extended phase needs at least 53 bits, got {extended_bits}")
    check_range(zeros, T)
    gammas = zeros.gammas[:count_upto(zeros, T)]
    if gammas.shape[0] == 0:
        return 0j

    if extended_phase:
        def terms(start: int, stop: int):
            phase = _extended_phases(gammas[start:stop], frequency, extended_bits)
            return np.cos(phase), np.sin(phase)
    else:
        def terms(start: int, stop: int):
            phase = np.fmod(gammas[start:stop] * frequency, TWO_PI)
            return np.cos(phase), np.sin(phase)

    return compensated_complex_sum(terms, gammas.shape[0], chunk_size, workers)


def check_range(zeros: ZeroSet, T: float):
    """T must lie in [0, t_max]"""
    if T < 0:
        raise DomainError(f"T must be >= 0, got {T}")
    if T > 0 and (zeros.count == 0 or T > zeros.t_max):
        raise InsufficientDataError(f"T = {T} exceeds t_max = {zeros.t_max}")


def _extended_phases(gammas: np.ndarray, frequency: float, bits: int) -> np.ndarray:
    """gamma * frequency mod 2 pi evaluated at ``bits`` bits, then rounded

    Uses a private context; the global ``mp`` precision is left alone.
    """
    ctx = MPContext()
    ctx.prec = bits
    two_pi = 2 * ctx.pi
    f = ctx.mpf(frequency)
    return np.array([float(ctx.fmod(ctx.mpf(float(g)) * f, two_pi)) for g in gammas], dtype=np.float64)


def zero_sum(zeros: ZeroSet, x: float, T: float, workers: int = 1, chunk_size: int = DEFAULT_CHUNK_SIZE,
             extended_phase: bool = False, extended_bits: int = EXTENDED_PHASE_BITS) -> complex:
    """sum over 0 < gamma <= T of x^(i gamma)"""
    if not x > 1:
        raise DomainError(f"zero_sum needs x > 1, got {x}")
    total = phase_sum(zeros, math.log(x), T, workers, chunk_size, extended_phase, extended_bits)
    logger.debug(f"zero_sum x={x} T={T}: {total}")
    return total


def landau_main_term(x: float, T: float, degenerate: float = DEGENERATE_LOG_RATIO) -> complex:
    """-(Lambda(n_x)/2pi) (e^(i T log(x/n_x)) - 1)/(i log(x/n_x)); -T Lambda(n_x)/2pi when x = n_x"""
    if not x > 1 or not T > 0:
        raise DomainError(f"landau_main_term needs x > 1 and T > 0, got x={x}, T={T}")
    n_x = nearest_prime_power(x)
    lam = von_mangoldt(n_x)
    log_ratio = math.log(x / n_x)
    if abs(log_ratio) < degenerate:
        return complex(-T * lam / TWO_PI, 0.0)
    return complex(-(lam / TWO_PI) * (np.exp(1j * T * log_ratio) - 1.0) / (1j * log_ratio))


def small_x_main_term(x: float, T: float) -> complex:
    """T log(T/2pi) (e^(i T log x) - 1)/(i T log x), the main term when T log x is small"""
    if not x > 1 or not T > 0:
        raise DomainError(f"small_x_main_term needs x > 1 and T > 0, got x={x}, T={T}")
    z = T * math.log(x)
    # (e^{iz} - 1)/(iz) written via expm1-style pieces to keep accuracy for tiny z
    sinc = complex(math.sin(z) / z, 2.0 * math.sin(z / 2.0) ** 2 / z) if z != 0 else 1 + 0j
    return T * math.log(T / TWO_PI) * sinc


@dataclass(frozen=True)
class LandauReport:
    """``sum`` is sum x^(i gamma); ``main_term`` is landau_main_term(x, T) divided by sqrt(x)"""

    x: float
    T: float
    n_obs: int
    sum: complex
    main_term: complex
    residual: complex
    n_x: int
    lambda_nx: float
    error_scale_x: float
    error_scale_log: float

    def to_dict(self) -> Dict:
        payload = asdict(self)
        for key in ("sum", "main_term", "residual"):
            value = payload[key]
            payload[key] = {"re": value.real, "im": value.imag}
        return payload


def landau_report(zeros: ZeroSet, x: float, T: Optional[float] = None, workers: int = 1,
                  chunk_size: int = DEFAULT_CHUNK_SIZE, extended_phase: bool = False,
                  extended_bits: int = EXTENDED_PHASE_BITS,
                  degenerate: float = DEGENERATE_LOG_RATIO) -> LandauReport:
    T = zeros.default_height() if T is None else T
    total = zero_sum(zeros, x, T, workers, chunk_size, extended_phase, extended_bits)
    main = landau_main_term(x, T, degenerate) / math.sqrt(x)
    n_x = nearest_prime_power(x)
    report = LandauReport(
        x=float(x), T=float(T), n_obs=count_upto(zeros, T),
        sum=total, main_term=main, residual=total - main,
        n_x=n_x, lambda_nx=von_mangoldt(n_x),
        error_scale_x=x * math.log(2 * x * T) ** 2,
        error_scale_log=math.log(2 * T) / math.log(x),
    )
    logger.info(f"Landau x={x} T={T}: sum={total:.6g}, main={main:.6g}")
    return report

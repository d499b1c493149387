# src/number_theory/diophantine.py
"""Continued fractions of xi = alpha_1/alpha_2 and Diophantine diagnostics.

Norms are sup-norms throughout.
"""
import itertools
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from mpmath import mp, mpf

from src.number_theory.relations import AlphaVector
from src.utils.errors import DiophantineError

logger = logging.getLogger(__name__)

MAX_TERMS = 60
MIN_REMAINING_BITS = 16
EXP_CUTOFF = 700.0
INPUT_ACCURACY_BITS = 8


@dataclass(frozen=True)
class DiophantineConfig:
    C: float = 1e-6
    epsilon: float = 0.1
    B: float = 5.0
    J: int = 15
    mu: float = 3.0

    def __post_init__(self):
        if not self.C > 0:
            raise DiophantineError(f"C must be positive, got {self.C}")
        if not self.epsilon > 0:
            raise DiophantineError(f"epsilon must be positive, got {self.epsilon}")
        if not self.B > 4:
            raise DiophantineError(f"B must exceed 4, got {self.B}")
        if not self.epsilon < self.B - self.epsilon:
            raise DiophantineError(f"empty exponent range: epsilon={self.epsilon}, B={self.B}")
        if self.J < 1:
            raise DiophantineError(f"J must be positive, got {self.J}")
        if not self.mu > 0:
            raise DiophantineError(f"mu must be positive, got {self.mu}")


@dataclass(frozen=True)
class ContinuedFraction:
    """Partial quotients a_0; a_1, ... and exact convergents p_n/q_n of xi

    ``truncated`` is set when the working precision ran out before
    ``max_terms``; ``terminated`` when xi is rational at working precision.
    """

    xi: Union[mpf, Fraction]
    partial_quotients: Tuple[int, ...]
    convergents: Tuple[Tuple[int, int], ...]
    truncated: bool = False
    terminated: bool = False
    precision: Optional[int] = None

    @classmethod
    def from_quotients(cls, quotients: Sequence[int]) -> "ContinuedFraction":
        quotients = tuple(int(a) for a in quotients)
        convergents = _convergents(quotients)
        p, q = convergents[-1]
        return cls(Fraction(p, q), quotients, convergents, terminated=True)

    def __len__(self) -> int:
        return len(self.partial_quotients)

    @property
    def denominators(self) -> Tuple[int, ...]:
        return tuple(q for _, q in self.convergents)

    def verify_identities(self) -> bool:
        """Recurrences and p_{n+1} q_n - p_n q_{n+1} = (-1)^n, in exact integers"""
        p_prev, q_prev = 1, 0
        p_cur, q_cur = self.partial_quotients[0], 1
        if self.convergents[0] != (p_cur, q_cur):
            return False
        for n, a in enumerate(self.partial_quotients[1:]):
            p_next, q_next = a * p_cur + p_prev, a * q_cur + q_prev
            if self.convergents[n + 1] != (p_next, q_next):
                return False
            if p_next * q_cur - p_cur * q_next != (-1) ** n:
                return False
            if n >= 1 and not q_next > q_cur:
                return False
            p_prev, q_prev, p_cur, q_cur = p_cur, q_cur, p_next, q_next
        return True

    def to_dict(self) -> Dict:
        return {
            "partial_quotients": list(self.partial_quotients),
            "convergents": [{"p": str(p), "q": str(q)} for p, q in self.convergents],
            "truncated": self.truncated,
            "terminated": self.terminated,
            "precision": self.precision,
        }


def _convergents(quotients: Sequence[int]) -> Tuple[Tuple[int, int], ...]:
    convergents = []
    p_prev, q_prev, p_cur, q_cur = 1, 0, quotients[0], 1
    convergents.append((p_cur, q_cur))
    for a in quotients[1:]:
        p_prev, q_prev, p_cur, q_cur = p_cur, q_cur, a * p_cur + p_prev, a * q_cur + q_prev
        convergents.append((p_cur, q_cur))
    return tuple(convergents)


def _as_fraction(value: mpf) -> Fraction:
    mantissa, exponent = value.man_exp
    if exponent >= 0:
        return Fraction(int(mantissa) << exponent)
    return Fraction(int(mantissa), 1 << -exponent)


def continued_fraction(xi, max_terms: int = MAX_TERMS, precision: Optional[int] = None,
                       min_remaining_bits: int = MIN_REMAINING_BITS) -> ContinuedFraction:
    """Continued fraction of xi > 0.

    An exact ``Fraction`` (or int) gives the exact expansion. Any other value is
    taken at ``precision`` bits and treated as known to within a relative
    2^-(precision - 8); the expansion runs on that enclosing interval and stops,
    flagged as truncated, once fewer than ``min_remaining_bits`` bits remain.
    """
    if max_terms < 1 or max_terms > MAX_TERMS:
        raise DiophantineError(f"max_terms must be in 1..{MAX_TERMS}, got {max_terms}")

    if isinstance(xi, (Fraction, int)):
        return _exact_continued_fraction(Fraction(xi), max_terms)

    precision = precision or 160
    with mp.workprec(precision):
        value = mpf(xi)
    if not value > 0:
        raise DiophantineError(f"xi must be positive, got {value}")

    mid = _as_fraction(value)
    radius = mid * Fraction(1, 2 ** (precision - INPUT_ACCURACY_BITS))
    lo, hi = mid - radius, mid + radius

    quotients: List[int] = []
    truncated = terminated = False
    while len(quotients) < max_terms:
        a = math.floor(mid)
        if mid == a:
            quotients.append(a)
            terminated = True
            break
        if math.floor(lo) != a or math.floor(hi) != a or lo <= a:
            truncated = True
            break
        if math.log2(mid / (hi - lo)) < min_remaining_bits:
            truncated = True
            break
        quotients.append(a)
        mid = 1 / (mid - a)
        lo, hi = 1 / (hi - a), 1 / (lo - a)

    if not quotients:
        raise DiophantineError(f"precision {precision} bits is not enough to extract a single quotient")
    if truncated:
        logger.warning(f"Continued fraction truncated after {len(quotients)} terms at {precision} bits")

    return ContinuedFraction(value, tuple(quotients), _convergents(quotients), truncated, terminated, precision)


def _exact_continued_fraction(xi: Fraction, max_terms: int) -> ContinuedFraction:
    if not xi > 0:
        raise DiophantineError(f"xi must be positive, got {xi}")
    quotients: List[int] = []
    value = xi
    terminated = False
    while len(quotients) < max_terms:
        a = math.floor(value)
        quotients.append(a)
        if value == a:
            terminated = True
            break
        value = 1 / (value - a)
    return ContinuedFraction(xi, tuple(quotients), _convergents(quotients), False, terminated, None)


@dataclass(frozen=True)
class ConvergentCheck:
    index: int
    p: int
    q: int
    middle: mpf
    lower_ok: Optional[bool]
    upper_ok: Optional[bool]
    flag: str = "ok"

    def to_dict(self) -> Dict:
        return {"index": self.index, "p": str(self.p), "q": str(self.q),
                "middle": mp.nstr(self.middle, 20), "lower_ok": self.lower_ok,
                "upper_ok": self.upper_ok, "flag": self.flag}


def convergent_inequality_check(alpha1, alpha2, cf: ContinuedFraction,
                                precision: int = 160) -> List[ConvergentCheck]:
    """alpha_2/(q_j + q_{j+1}) < |q_j alpha_1 - p_j alpha_2| < alpha_2/q_{j+1} for every index"""
    if len(cf.convergents) < 2:
        raise DiophantineError("need at least two convergents")

    checks = []
    with mp.workprec(precision):
        alpha1, alpha2 = mpf(alpha1), mpf(alpha2)
        noise = mpf(2) ** (-precision + INPUT_ACCURACY_BITS + MIN_REMAINING_BITS)
        for j, (p, q) in enumerate(cf.convergents):
            middle = abs(q * alpha1 - p * alpha2)
            if j + 1 == len(cf.convergents):
                flag = "exact-zero" if middle == 0 else "no-successor"
                checks.append(ConvergentCheck(j, p, q, middle, None, None, flag))
                continue
            q_next = cf.convergents[j + 1][1]
            lower_ok = alpha2 / (q + q_next) < middle
            upper_ok = middle < alpha2 / q_next
            flag = "ok"
            if cf.terminated and j + 2 == len(cf.convergents):
                flag = "rational-tail"
            elif middle <= noise * q * abs(alpha1):
                flag = "precision-insufficient"
            checks.append(ConvergentCheck(j, p, q, middle, bool(lower_ok), bool(upper_ok), flag))

    flagged = [c.index for c in checks if c.flag == "precision-insufficient"]
    if flagged:
        logger.warning(f"Convergent checks at indices {flagged} are below working precision")
    return checks


@dataclass(frozen=True)
class UAlphaMembership:
    member: bool
    witness: Optional[int]
    interval: Optional[Tuple[float, float]]

    def to_dict(self) -> Dict:
        return {"member": self.member, "witness": self.witness,
                "interval": None if self.interval is None else list(self.interval)}


def u_alpha_intervals(cf: ContinuedFraction, epsilon: float, B: float,
                      exp_cutoff: float = EXP_CUTOFF) -> List[Tuple[int, float, float]]:
    """(n, q_n^(1+eps), e^(q_n^(B-eps))) for n >= 1; upper end +inf beyond the exp cutoff"""
    intervals = []
    for n, q in enumerate(cf.denominators):
        if n == 0:
            continue
        log_q = math.log(q)
        lower = math.exp((1 + epsilon) * log_q) if (1 + epsilon) * log_q < exp_cutoff else math.inf
        exponent_log = (B - epsilon) * log_q
        if exponent_log > math.log(exp_cutoff):
            upper = math.inf
        else:
            upper = math.exp(math.exp(exponent_log))
        intervals.append((n, lower, upper))
    return intervals


def u_alpha_membership(cf: ContinuedFraction, T: float, epsilon: float, B: float,
                       exp_cutoff: float = EXP_CUTOFF) -> UAlphaMembership:
    """Is T in the union over n >= 1 of [q_n^(1+eps), exp(q_n^(B-eps))]? Witness is the first such n"""
    if not T > 0:
        raise DiophantineError(f"T must be positive, got {T}")
    for n, lower, upper in u_alpha_intervals(cf, epsilon, B, exp_cutoff):
        if lower <= T <= upper:
            return UAlphaMembership(True, n, (lower, upper))
    return UAlphaMembership(False, None, None)


@dataclass(frozen=True)
class EFPartition:
    """``F`` holds the primitive pairs under the threshold; ``multiples`` the k >= 2 multiples of them"""

    E: Tuple[Tuple[int, int], ...]
    F: Tuple[Tuple[int, int], ...]
    J: int
    C: float
    multiples: Tuple[Tuple[int, int], ...] = ()

    def to_dict(self) -> Dict:
        return {"J": self.J, "C": self.C, "E_size": len(self.E), "F": [list(pair) for pair in self.F],
                "multiples": [list(pair) for pair in self.multiples]}


def _coordinates(alpha) -> Tuple[Tuple[mpf, ...], int]:
    if isinstance(alpha, AlphaVector):
        return alpha.values, alpha.precision
    return tuple(mpf(v) for v in alpha), mp.prec


def classify_EF(alpha, J: int, C: float) -> EFPartition:
    """Split pairs (m, l), 0 < max(|m|,|l|) <= J, m alpha_1 + l alpha_2 > 0, into E_J and F_J

    The F side holds the pairs with value <= min(C e^-max(|m|,|l|), |alpha_2|/(2m), 1/(4 pi)).
    For m < 0 the middle term is negative, so those pairs are always in E_J; for m = 0 it is
    dropped. F side pairs with gcd(m, l) > 1 are multiples of a primitive F_J member and are
    kept apart in ``multiples``, so F_J itself only holds pairs (q_n, -p_n).
    """
    values, precision = _coordinates(alpha)
    if len(values) != 2:
        raise DiophantineError(f"classify_EF needs a 2-dimensional alpha, got n = {len(values)}")
    if J > 50:
        raise DiophantineError(f"J must be <= 50, got {J}")
    if not C > 0:
        raise DiophantineError(f"C must be positive, got {C}")

    E, F, multiples = [], [], []
    with mp.workprec(precision):
        alpha1, alpha2 = values
        cap = 1 / (4 * mp.pi)
        for m, l in itertools.product(range(-J, J + 1), repeat=2):
            norm = max(abs(m), abs(l))
            if norm == 0:
                continue
            value = m * alpha1 + l * alpha2
            if not value > 0:
                continue
            threshold = min(mpf(C) * mp.exp(-norm), cap)
            if m != 0:
                threshold = min(threshold, abs(alpha2) / (2 * m))
            if value > threshold:
                E.append((m, l))
            elif math.gcd(m, l) == 1:
                F.append((m, l))
            else:
                multiples.append((m, l))

    logger.info(f"E_J/F_J split at J={J}, C={C}: |E|={len(E)}, |F|={len(F)}, multiples={len(multiples)}")
    return EFPartition(tuple(E), tuple(F), J, C, tuple(multiples))


@dataclass(frozen=True)
class ConditionReport:
    J: int
    C: float
    min_value: mpf
    argmin: Tuple[int, ...]
    holds: bool
    exact_dependence: bool
    mu: Optional[float] = None
    baker_min: Optional[mpf] = None
    baker_argmin: Optional[Tuple[int, ...]] = None

    def to_dict(self) -> Dict:
        return {
            "J": self.J, "C": self.C, "holds": self.holds, "exact_dependence": self.exact_dependence,
            "min_value": mp.nstr(self.min_value, 15), "argmin": list(self.argmin),
            "mu": self.mu,
            "baker_min": None if self.baker_min is None else mp.nstr(self.baker_min, 15),
            "baker_argmin": None if self.baker_argmin is None else list(self.baker_argmin),
        }


def check_linear_form_bound(alpha, C: float, J: int, mu: Optional[float] = None) -> ConditionReport:
    """min over 0 < ||m|| <= J of |m.alpha| e^||m||, compared with C

    With ``mu`` the same scan also reports min |m.alpha| (||m|| + 1)^mu.
    Only one of each pair +-m is visited; ties keep the first in scan order.
    """
    values, precision = _coordinates(alpha)
    n = len(values)
    if n == 2 and J > 25:
        raise DiophantineError(f"J must be <= 25 for n = 2, got {J}")

    best = best_m = None
    baker = baker_m = None
    exact_zero = False
    with mp.workprec(precision):
        for m in itertools.product(range(-J, J + 1), repeat=n):
            first = next((v for v in m if v != 0), 0)
            if first <= 0:
                continue
            norm = max(abs(v) for v in m)
            dot = abs(mp.fsum(c * v for c, v in zip(m, values)))
            if dot == 0 and not exact_zero:
                exact_zero = True
                best, best_m = mpf(0), m
            if not exact_zero:
                scaled = dot * mp.exp(norm)
                if best is None or scaled < best:
                    best, best_m = scaled, m
            if mu is not None:
                weighted = dot * (norm + 1) ** mpf(mu)
                if baker is None or weighted < baker:
                    baker, baker_m = weighted, m
        holds = (not exact_zero) and best > C

    report = ConditionReport(J, C, best, tuple(best_m), bool(holds), exact_zero,
                             mu, baker, None if baker_m is None else tuple(baker_m))
    logger.info(f"Condition scan J={J}: min |m.alpha| e^||m|| = {mp.nstr(best, 6)} at {list(best_m)}, holds={holds}")
    return report

# src/number_theory/relations.py
"""Rational relation systems M alpha = P with P_j = (a_j/q_j) log(p_j)/(2 pi).

The maximal-rank system attached to alpha decides the limiting density g_alpha.
"""
import bisect
import itertools
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from mpmath import mp, mpf
from sympy import Matrix

from src.number_theory.primes import check_prime, primes_upto
from src.utils.errors import (AlphaError, AmbiguousRelationError, NonPositiveExponentError,
                              RankDeficientError, RelationError, RepeatedPrimeError,
                              RowGcdError, UnderdeterminedError)

logger = logging.getLogger(__name__)

DEFAULT_PRECISION = 160

# one exact term of an alpha coordinate: (coefficient, prime) meaning coefficient * log(prime) / (2 pi)
ExactTerm = Tuple[Fraction, int]


@dataclass(frozen=True)
class RelationRow:
    b: Tuple[int, ...]
    a: int
    q: int
    p: int

    def __post_init__(self):
        object.__setattr__(self, "b", tuple(int(v) for v in self.b))

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.a, self.q)

    @property
    def sup_norm(self) -> int:
        return max(abs(v) for v in self.b)

    def target(self, precision: int = DEFAULT_PRECISION) -> mpf:
        """(a/q) log(p)/(2 pi) at ``precision`` bits"""
        with mp.workprec(precision):
            return mpf(self.a) / self.q * mp.log(self.p) / (2 * mp.pi)

    def to_dict(self) -> Dict:
        return {"b": list(self.b), "a": self.a, "q": self.q, "p": self.p}


@dataclass(frozen=True)
class RelationSystem:
    n: int
    rows: Tuple[RelationRow, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(self.rows))

    @property
    def r(self) -> int:
        return len(self.rows)

    def matrix(self) -> List[List[int]]:
        return [list(row.b) for row in self.rows]

    def canonical(self) -> "RelationSystem":
        """Same system with rows sorted by (sup-norm, b); used for order-free comparison"""
        ordered = sorted(self.rows, key=lambda row: (row.sup_norm, row.b, row.p))
        return RelationSystem(self.n, tuple(ordered))

    def to_dict(self) -> Dict:
        return {"n": self.n, "rows": [row.to_dict() for row in self.rows]}

    def describe(self) -> str:
        if not self.rows:
            return f"n={self.n}, r=0 (g = 0)"
        parts = [f"{list(row.b)}.alpha = ({row.a}/{row.q}) log({row.p})/(2pi)" for row in self.rows]
        return f"n={self.n}, r={self.r}: " + "; ".join(parts)


@dataclass(frozen=True)
class AlphaVector:
    """alpha in R^n at ``precision`` bits, optionally with its exact form"""

    values: Tuple[mpf, ...]
    exact: Optional[Tuple[Tuple[ExactTerm, ...], ...]] = None
    precision: int = field(default=DEFAULT_PRECISION)

    def __post_init__(self):
        with mp.workprec(self.precision):
            values = tuple(mpf(v) for v in self.values)
        object.__setattr__(self, "values", values)
        if len(values) < 1:
            raise AlphaError("alpha needs at least one coordinate")
        if any(v <= 0 for v in values):
            raise AlphaError("alpha coordinates must be positive")
        if len(set(values)) != len(values):
            raise AlphaError("alpha coordinates must be pairwise distinct")
        if self.exact is not None and len(self.exact) != len(values):
            raise AlphaError("exact form does not match the number of coordinates")

    @property
    def n(self) -> int:
        return len(self.values)

    @classmethod
    def from_exact(cls, exact: Sequence[Sequence[ExactTerm]], precision: int = DEFAULT_PRECISION) -> "AlphaVector":
        exact = tuple(tuple((Fraction(c), int(p)) for c, p in coordinate) for coordinate in exact)
        with mp.workprec(precision + 16):
            two_pi = 2 * mp.pi
            values = [mp.fsum(mpf(c.numerator) / c.denominator * mp.log(p) for c, p in coordinate) / two_pi
                      for coordinate in exact]
        with mp.workprec(precision):
            values = tuple(+v for v in values)
        return cls(values, exact, precision)

    @classmethod
    def from_decimals(cls, decimals: Sequence[str], precision: int = DEFAULT_PRECISION) -> "AlphaVector":
        with mp.workprec(precision):
            try:
                return cls(tuple(mpf(str(d)) for d in decimals), None, precision)
            except ValueError as e:
                raise AlphaError(f"not a decimal alpha coordinate: {e}")

    def as_floats(self) -> Tuple[float, ...]:
        """Each coordinate rounded once to double"""
        return tuple(float(v) for v in self.values)

    def swapped(self, i: int = 0, j: int = 1) -> "AlphaVector":
        values = list(self.values)
        values[i], values[j] = values[j], values[i]
        exact = None
        if self.exact is not None:
            exact = list(self.exact)
            exact[i], exact[j] = exact[j], exact[i]
            exact = tuple(exact)
        return AlphaVector(tuple(values), exact, self.precision)

    def dot(self, m: Sequence[int]) -> mpf:
        with mp.workprec(self.precision):
            return mp.fsum(int(c) * v for c, v in zip(m, self.values))

    def decimal_strings(self, digits: Optional[int] = None) -> List[str]:
        digits = digits or int(self.precision * math.log10(2))
        with mp.workprec(self.precision):
            return [mp.nstr(v, digits, min_fixed=-math.inf, max_fixed=math.inf) for v in self.values]

    def to_dict(self) -> Dict:
        payload = {"decimal": self.decimal_strings()}
        if self.exact is not None:
            payload["exact"] = [[{"num": c.numerator, "den": c.denominator, "p": p} for c, p in coordinate]
                                for coordinate in self.exact]
        return payload


def _rank(rows: Sequence[Sequence[int]]) -> int:
    if not rows:
        return 0
    return Matrix(rows).rank()


def validate(system: RelationSystem) -> RelationSystem:
    """Check every row and system invariant; returns the system unchanged"""
    if system.n < 1:
        raise RelationError(f"dimension must be positive, got n={system.n}")
    if system.r > system.n:
        raise RankDeficientError(f"{system.r} rows exceed dimension {system.n}")

    seen_primes = {}
    for index, row in enumerate(system.rows):
        if len(row.b) != system.n:
            raise RelationError(f"row {index}: b has length {len(row.b)}, expected {system.n}")
        if not any(row.b):
            raise RowGcdError(f"row {index}: b is the zero vector")
        if math.gcd(*row.b) != 1:
            raise RowGcdError(f"row {index}: gcd of {list(row.b)} is {math.gcd(*row.b)}, expected 1")
        if row.a <= 0:
            raise NonPositiveExponentError(f"row {index}: a must be >= 1, got {row.a}")
        if row.q <= 0:
            raise NonPositiveExponentError(f"row {index}: q must be >= 1, got {row.q}")
        if math.gcd(row.a, row.q) != 1:
            raise RelationError(f"row {index}: gcd(a, q) = {math.gcd(row.a, row.q)}, expected 1")
        if not check_prime(row.p):
            raise RelationError(f"row {index}: p = {row.p} is not prime")
        if row.p in seen_primes:
            raise RepeatedPrimeError(f"rows {seen_primes[row.p]} and {index} share p = {row.p}")
        seen_primes[row.p] = index

    rank = _rank(system.matrix())
    if rank != system.r:
        raise RankDeficientError(f"rows have rank {rank}, expected full row rank {system.r}")
    return system


def solve_alpha(system: RelationSystem, precision: int = DEFAULT_PRECISION) -> AlphaVector:
    """Exact solution of M alpha = P for a square system"""
    validate(system)
    if system.r < system.n:
        raise UnderdeterminedError(f"r = {system.r} < n = {system.n}; alpha is not determined")

    inverse = Matrix(system.matrix()).inv()
    exact = []
    for i in range(system.n):
        terms = []
        for j, row in enumerate(system.rows):
            coefficient = Fraction(int(inverse[i, j].p), int(inverse[i, j].q)) * row.ratio
            if coefficient != 0:
                terms.append((coefficient, row.p))
        exact.append(tuple(terms))

    alpha = AlphaVector.from_exact(exact, precision)
    residual = relation_residual(system, alpha)
    with mp.workprec(precision):
        bound = mpf(2) ** (-precision + 8)
        if residual >= bound:
            raise RelationError(f"residual {mp.nstr(residual, 5)} exceeds {mp.nstr(bound, 5)}")
    logger.info(f"Solved alpha for {system.describe()}")
    return alpha


def relation_residual(system: RelationSystem, alpha: AlphaVector) -> mpf:
    """max_j |b_j . alpha - P_j|"""
    worst = mpf(0)
    for index, value in row_residuals(system, alpha):
        worst = max(worst, value)
    return worst


def row_residuals(system: RelationSystem, alpha: AlphaVector) -> List[Tuple[int, mpf]]:
    residuals = []
    with mp.workprec(alpha.precision):
        for index, row in enumerate(system.rows):
            residuals.append((index, abs(alpha.dot(row.b) - row.target(alpha.precision))))
    return residuals


@dataclass(frozen=True)
class DetectionBounds:
    max_norm: int = 20
    max_prime: int = 20
    max_q: int = 8
    max_a: int = 4


def _targets(bounds: DetectionBounds, precision: int) -> List[Tuple[mpf, Fraction, int]]:
    """All (value, a/q, p) targets sorted by value"""
    targets = {}
    with mp.workprec(precision):
        two_pi = 2 * mp.pi
        for p in primes_upto(bounds.max_prime):
            log_p = mp.log(p) / two_pi
            for q in range(1, bounds.max_q + 1):
                for a in range(1, bounds.max_a + 1):
                    if math.gcd(a, q) == 1:
                        targets[(Fraction(a, q), p)] = mpf(a) / q * log_p
    return sorted(((value, ratio, p) for (ratio, p), value in targets.items()), key=lambda t: t[0])


def _scan_vectors(n: int, max_norm: int):
    """Integer vectors with 0 < sup-norm <= max_norm whose first nonzero entry is positive"""
    for m in itertools.product(range(-max_norm, max_norm + 1), repeat=n):
        first = next((v for v in m if v != 0), 0)
        if first > 0:
            yield m


def detect_relations(alpha: AlphaVector, bounds: DetectionBounds = DetectionBounds(),
                     tol: float = 1e-30) -> RelationSystem:
    """Bounded exhaustive search for a maximal-rank relation system"""
    n = alpha.n
    precision = alpha.precision
    targets = _targets(bounds, precision)
    values = [t[0] for t in targets]

    accepted: Dict[Tuple[int, ...], Tuple[Fraction, int, Tuple[int, ...]]] = {}
    with mp.workprec(precision):
        tolerance = mpf(tol)
        for m in _scan_vectors(n, bounds.max_norm):
            value = alpha.dot(m)
            if value < 0:
                m = tuple(-v for v in m)
                value = -value
            if value == 0:
                continue
            lo = bisect.bisect_left(values, value - tolerance)
            hi = bisect.bisect_right(values, value + tolerance)
            matches = targets[lo:hi]
            if not matches:
                continue
            if len(matches) > 1:
                described = ", ".join(f"({r.numerator}/{r.denominator}) log({p})/(2pi)" for _, r, p in matches[:2])
                raise AmbiguousRelationError(f"m = {list(m)} matches several targets: {described}")

            _, ratio, p = matches[0]
            g = math.gcd(*m)
            b = tuple(v // g for v in m)
            ratio = ratio / g
            previous = accepted.get(b)
            if previous is not None and previous[:2] != (ratio, p):
                raise AmbiguousRelationError(
                    f"b = {list(b)} matches ({previous[0]}) log({previous[1]}) via {list(previous[2])} "
                    f"and ({ratio}) log({p}) via {list(m)}")
            if previous is None:
                accepted[b] = (ratio, p, m)

    candidates = sorted(accepted.items(), key=lambda item: (max(abs(v) for v in item[0]), item[0]))
    rows: List[RelationRow] = []
    used_primes = set()
    for b, (ratio, p, _) in candidates:
        if p in used_primes or len(rows) == n:
            continue
        trial = [list(row.b) for row in rows] + [list(b)]
        if _rank(trial) == len(trial):
            rows.append(RelationRow(b, ratio.numerator, ratio.denominator, p))
            used_primes.add(p)

    system = validate(RelationSystem(n, tuple(rows)))
    logger.info(f"Detected {len(accepted)} candidate relations, selected {system.describe()}")
    return system

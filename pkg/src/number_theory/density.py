# src/number_theory/density.py
"""Limiting density g_alpha of the joint fractional parts.

For a validated relation system with rows (b_j, a_j, q_j, p_j)

    g(x) = -(1/pi) sum_j log p_j Re sum_{k>=1} p_j^(-a_j k/2) e^(-2 pi i k q_j b_j.x)

which resums (Re z/(1-z), z = p^(-a/2) e^(-i phi)) to the closed form used by
``g_eval``.  An empty system gives g = 0.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple

import numpy as np

from src.number_theory.relations import RelationSystem, validate
from src.utils.errors import AmbiguousFrequencyError, DensityError, DimensionError, TestFunctionError

logger = logging.getLogger(__name__)

Frequency = Tuple[int, ...]

TRUNCATION_THRESHOLD = 2.0 ** -70
HERMITIAN_TOLERANCE = 1e-12


@dataclass(frozen=True)
class TestFunction:
    """Real trigonometric polynomial h(x) = sum_m c_m e^(2 pi i m.x)

    ``B_decay`` and ``C_decay`` are the declared constants of |c_m| << (||m||+1)^-B;
    they are reported, never enforced.
    """

    __test__ = False

    coeffs: Mapping[Frequency, complex]
    B_decay: Optional[float] = None
    C_decay: Optional[float] = None

    def __post_init__(self):
        coeffs = {tuple(int(v) for v in m): complex(c) for m, c in dict(self.coeffs).items()}
        lengths = {len(m) for m in coeffs}
        if len(lengths) > 1:
            raise TestFunctionError(f"frequency vectors have mixed lengths {sorted(lengths)}")
        for m, c in coeffs.items():
            partner = coeffs.get(tuple(-v for v in m), 0j)
            if abs(partner - c.conjugate()) > HERMITIAN_TOLERANCE * max(1.0, abs(c)):
                raise TestFunctionError(f"c_{{-m}} != conj(c_m) at m = {list(m)}; h would not be real")
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def n(self) -> int:
        return len(next(iter(self.coeffs))) if self.coeffs else 0

    @property
    def constant_term(self) -> float:
        """c_0 = integral of h over the torus"""
        if not self.coeffs:
            return 0.0
        return self.coeffs.get((0,) * self.n, 0j).real

    @property
    def support_norm(self) -> int:
        return max((max(abs(v) for v in m) for m in self.coeffs), default=0)

    @property
    def max_abs(self) -> float:
        return max((abs(c) for c in self.coeffs.values()), default=0.0)

    @classmethod
    def cosine(cls, m: Sequence[int], amplitude: float = 1.0) -> "TestFunction":
        """amplitude * cos(2 pi m.x)"""
        m = tuple(m)
        if not any(m):
            return cls.constant(amplitude, len(m))
        minus = tuple(-v for v in m)
        return cls({m: amplitude / 2, minus: amplitude / 2})

    @classmethod
    def sine(cls, m: Sequence[int], amplitude: float = 1.0) -> "TestFunction":
        m = tuple(m)
        minus = tuple(-v for v in m)
        return cls({m: -0.5j * amplitude, minus: 0.5j * amplitude})

    @classmethod
    def constant(cls, value: float, n: int = 2) -> "TestFunction":
        return cls({(0,) * n: complex(value)})

    @classmethod
    def from_terms(cls, terms: Iterable[Mapping], B_decay: Optional[float] = None,
                   C_decay: Optional[float] = None) -> "TestFunction":
        """Build from [{"m": [...], "re": x, "im": y}, ...], completing Hermitian symmetry"""
        coeffs: Dict[Frequency, complex] = {}

        def put(m: Frequency, c: complex):
            if m in coeffs and abs(coeffs[m] - c) > HERMITIAN_TOLERANCE * max(1.0, abs(c)):
                raise TestFunctionError(f"inconsistent coefficients given for m = {list(m)}")
            coeffs[m] = c

        for term in terms:
            m = tuple(int(v) for v in term["m"])
            c = complex(float(term.get("re", 0.0)), float(term.get("im", 0.0)))
            if not any(m) and c.imag != 0:
                raise TestFunctionError("c_0 must be real")
            put(m, c)
            put(tuple(-v for v in m), c.conjugate())
        return cls(coeffs, B_decay, C_decay)

    def __add__(self, other: "TestFunction") -> "TestFunction":
        coeffs = dict(self.coeffs)
        for m, c in other.coeffs.items():
            coeffs[m] = coeffs.get(m, 0j) + c
        return TestFunction(coeffs)

    def __mul__(self, scalar: float) -> "TestFunction":
        return TestFunction({m: float(scalar) * c for m, c in self.coeffs.items()})

    __rmul__ = __mul__

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        """h at points of shape (..., n)"""
        points = np.asarray(points, dtype=np.float64)
        total = np.zeros(points.shape[:-1], dtype=np.complex128)
        for m, c in self.coeffs.items():
            total += c * np.exp(2j * np.pi * (points @ np.array(m, dtype=np.float64)))
        return total.real

    def decay_report(self) -> Dict:
        """Largest |c_m| (||m|| + 1)^B against the declared C (reporting only)"""
        if self.B_decay is None:
            return {"B": None, "C": self.C_decay, "observed_max": None}
        observed = max((abs(c) * (max(abs(v) for v in m) + 1) ** self.B_decay
                        for m, c in self.coeffs.items()), default=0.0)
        return {"B": self.B_decay, "C": self.C_decay, "observed_max": observed,
                "within_declared": None if self.C_decay is None else observed <= self.C_decay}

    def to_terms(self) -> list:
        return [{"m": list(m), "re": c.real, "im": c.imag} for m, c in sorted(self.coeffs.items())]


@dataclass(frozen=True)
class Grid2D:
    """R x R values; entry (i, j) belongs to the cell [i/R, (i+1)/R) x [j/R, (j+1)/R)"""

    resolution: int
    values: np.ndarray
    metadata: Dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if self.resolution < 1 or values.shape != (self.resolution, self.resolution):
            raise DensityError(f"grid shape {values.shape} does not match resolution {self.resolution}")
        if not np.all(np.isfinite(values)):
            raise DensityError("grid holds non-finite values")
        object.__setattr__(self, "values", values)

    @property
    def delta(self) -> float:
        return 1.0 / self.resolution

    def mean(self) -> float:
        return float(np.mean(self.values))

    def transposed(self) -> "Grid2D":
        return Grid2D(self.resolution, self.values.T.copy(), dict(self.metadata))

    def argmin_cell(self) -> Tuple[int, int]:
        i, j = np.unravel_index(int(np.argmin(self.values)), self.values.shape)
        return int(i), int(j)


def _row_arrays(system: RelationSystem):
    b = np.array([row.b for row in system.rows], dtype=np.float64).reshape(system.r, system.n)
    q = np.array([row.q for row in system.rows], dtype=np.float64)
    a = np.array([row.a for row in system.rows], dtype=np.float64)
    p = np.array([row.p for row in system.rows], dtype=np.float64)
    return b, q, a, p


def _phases(system: RelationSystem, x) -> np.ndarray:
    """2 pi q_j (b_j . x) for every point, shape (..., r)"""
    x = np.mod(np.asarray(x, dtype=np.float64), 1.0)
    if x.shape[-1] != system.n:
        raise DimensionError(f"points have dimension {x.shape[-1]}, system has n = {system.n}")
    b, q, _, _ = _row_arrays(system)
    return 2.0 * np.pi * q * (x @ b.T)


def g_eval(system: RelationSystem, x):
    """Closed form of g at x (shape (n,) or (..., n))"""
    x = np.asarray(x, dtype=np.float64)
    if system.r == 0:
        return 0.0 if x.ndim == 1 else np.zeros(x.shape[:-1])

    _, _, a, p = _row_arrays(system)
    cosine = np.cos(_phases(system, x))
    half = p ** (a / 2.0)
    terms = np.log(p) * (half * cosine - 1.0) / (p ** a - 2.0 * half * cosine + 1.0)
    values = -np.sum(terms, axis=-1) / np.pi
    return float(values) if x.ndim == 1 else values


def g_eval_series(system: RelationSystem, x, K: int):
    """Series form truncated at k <= K (summed from the smallest terms up)"""
    if K < 1:
        raise DensityError(f"K must be >= 1, got {K}")
    x = np.asarray(x, dtype=np.float64)
    if system.r == 0:
        return 0.0 if x.ndim == 1 else np.zeros(x.shape[:-1])

    _, _, a, p = _row_arrays(system)
    phases = _phases(system, x)
    total = np.zeros(phases.shape, dtype=np.float64)
    for k in range(K, 0, -1):
        weight = p ** (-a * k / 2.0)
        total += weight * np.cos(k * phases)
    values = -np.sum(np.log(p) * total, axis=-1) / np.pi
    return float(values) if x.ndim == 1 else values


def series_tail_bound(system: RelationSystem, K: int) -> float:
    """Bound on |g_eval - g_eval_series(K)|"""
    total = 0.0
    for row in system.rows:
        ratio = row.p ** (-row.a / 2.0)
        total += math.log(row.p) * row.p ** (-row.a * (K + 1) / 2.0) / (1.0 - ratio)
    return total / math.pi


def g_sup_bound(system: RelationSystem) -> float:
    """sup |g| = (1/pi) sum_j log p_j / (p_j^(a_j/2) - 1), attained at x = 0"""
    return sum(math.log(row.p) / (row.p ** (row.a / 2.0) - 1.0) for row in system.rows) / math.pi


def _multiple_of(m: Frequency, v: Frequency) -> int:
    """k with m = k v, or 0 when m is not an integer multiple of v"""
    pivot = next(i for i, value in enumerate(v) if value != 0)
    if m[pivot] % v[pivot] != 0:
        return 0
    k = m[pivot] // v[pivot]
    if k != 0 and all(mi == k * vi for mi, vi in zip(m, v)):
        return k
    return 0


def g_fourier_coefficient(system: RelationSystem, m: Sequence[int]) -> complex:
    """Coefficient of g at frequency m: -(log p_j) p_j^(-a_j k/2)/(2 pi) at m = +-k q_j b_j"""
    m = tuple(int(v) for v in m)
    if len(m) != system.n:
        raise DimensionError(f"frequency has length {len(m)}, system has n = {system.n}")
    if not any(m):
        return 0j

    coefficient = None
    matched_row = None
    for index, row in enumerate(system.rows):
        k = _multiple_of(m, tuple(row.q * v for v in row.b))
        if k == 0:
            continue
        if coefficient is not None:
            raise AmbiguousFrequencyError(f"m = {list(m)} is a multiple of rows {matched_row} and {index}")
        coefficient = -math.log(row.p) * row.p ** (-row.a * abs(k) / 2.0) / (2.0 * math.pi)
        matched_row = index
    return complex(coefficient or 0.0)


def integral_h_g(system: RelationSystem, h: TestFunction,
                 threshold: float = TRUNCATION_THRESHOLD) -> float:
    """-(1/pi) Re sum_j sum_k (log p_j) p_j^(-a_j k/2) c_{k q_j b_j}"""
    if system.r == 0 or not h.coeffs:
        return 0.0
    if h.n != system.n:
        raise DimensionError(f"test function has n = {h.n}, system has n = {system.n}")

    largest = h.max_abs
    support = h.support_norm
    total = 0.0
    for row in system.rows:
        step = tuple(row.q * v for v in row.b)
        step_norm = max(abs(v) for v in step)
        log_p = math.log(row.p)
        k = 1
        while k * step_norm <= support:
            weight = row.p ** (-row.a * k / 2.0)
            if weight * largest < threshold:
                break
            c = h.coeffs.get(tuple(k * v for v in step), 0j)
            total += log_p * weight * c.real
            k += 1
    return -total / math.pi


def cell_centers(resolution: int) -> np.ndarray:
    return (np.arange(resolution, dtype=np.float64) + 0.5) / resolution


def midpoint_points(n: int, resolution: int) -> np.ndarray:
    centers = cell_centers(resolution)
    mesh = np.meshgrid(*([centers] * n), indexing="ij")
    return np.stack(mesh, axis=-1)


def g_grid(system: RelationSystem, resolution: int) -> Grid2D:
    """g sampled at cell centres of an R x R grid (n = 2 only)"""
    if system.n != 2:
        raise DimensionError(f"g_grid needs n = 2, system has n = {system.n}")
    if resolution < 2:
        raise DensityError(f"resolution must be >= 2, got {resolution}")
    validate(system)

    points = midpoint_points(2, resolution)
    values = g_eval(system, points) if system.r else np.zeros((resolution, resolution))
    logger.info(f"Sampled g on a {resolution}x{resolution} grid for {system.describe()}")
    return Grid2D(resolution, values, {"kind": "g_alpha", "resolution": resolution,
                                       "system": system.to_dict()})


def quadrature_h_g(system: RelationSystem, h: TestFunction, resolution: int = 512) -> float:
    """Midpoint-rule value of the integral of h g over the torus"""
    points = midpoint_points(system.n, resolution)
    return float(np.mean(h.evaluate(points) * g_eval(system, points)))


def quadrature_fourier_coefficient(system: RelationSystem, m: Sequence[int], resolution: int = 512) -> complex:
    points = midpoint_points(system.n, resolution)
    kernel = np.exp(-2j * np.pi * (points @ np.array(m, dtype=np.float64)))
    return complex(np.mean(g_eval(system, points) * kernel))

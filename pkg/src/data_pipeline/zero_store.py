# src/data_pipeline/zero_store.py
"""Tables of imaginary parts of nontrivial zeta zeros.

Zeros are assumed to lie on the critical line (rho = 1/2 + i*gamma) for the
ingested range; only gamma is stored, as float64.
"""
import logging
import math
import os
import re
from dataclasses import dataclass, field
from typing import IO, Iterable, Optional, Union

import numpy as np

from src.utils.errors import DomainError, InsufficientDataError, NonMonotoneError, ZeroParseError

logger = logging.getLogger(__name__)

DECIMAL_TOKEN = re.compile(r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")


@dataclass(frozen=True)
class ZeroSet:
    """Immutable, strictly increasing table of zero heights"""

    gammas: np.ndarray
    dataset_id: str = field(default="", compare=False)

    def __post_init__(self):
        gammas = np.ascontiguousarray(self.gammas, dtype=np.float64)
        if gammas.ndim != 1:
            raise ValueError("gammas must be one-dimensional")
        if gammas.size:
            if not np.all(np.isfinite(gammas)) or gammas[0] <= 0:
                raise ValueError("gammas must be finite and positive")
            steps = np.diff(gammas)
            if np.any(steps <= 0):
                bad = int(np.argmax(steps <= 0)) + 2
                raise NonMonotoneError("zero heights not strictly increasing", line=bad)
        gammas.setflags(write=False)
        object.__setattr__(self, "gammas", gammas)

    @property
    def count(self) -> int:
        return int(self.gammas.size)

    @property
    def t_max(self) -> Optional[float]:
        return float(self.gammas[-1]) if self.count else None

    def default_height(self) -> float:
        """t_max, the height used when no T is given"""
        if self.count == 0:
            raise InsufficientDataError("zero table is empty; give T explicitly")
        return self.t_max

    def __eq__(self, other) -> bool:
        if not isinstance(other, ZeroSet):
            return NotImplemented
        return self.gammas.tobytes() == other.gammas.tobytes()

    def __len__(self) -> int:
        return self.count

    def count_upto(self, T: float) -> int:
        return count_upto(self, T)

    def slice_upto(self, T: float) -> np.ndarray:
        """View of the heights gamma <= T"""
        return self.gammas[:count_upto(self, T)]

    def height_of(self, k: int) -> float:
        """Height of the k-th zero, 1-based"""
        if not 1 <= k <= self.count:
            raise DomainError(f"zero index {k} outside 1..{self.count}")
        return float(self.gammas[k - 1])


def parse_zeros(text_source: Union[IO, Iterable[Union[str, bytes]]], dataset_id: str = "") -> ZeroSet:
    """Parse one decimal per line; '#' lines and blank lines are skipped

    Byte lines must be ASCII. Tokens are plain decimals with an optional exponent.
    """
    values = []
    previous = -math.inf
    for line_number, raw in enumerate(text_source, start=1):
        if isinstance(raw, bytes):
            try:
                raw = raw.decode("ascii")
            except UnicodeDecodeError:
                raise ZeroParseError("non-ASCII bytes", line=line_number)
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if not DECIMAL_TOKEN.fullmatch(line):
            raise ZeroParseError(f"non-numeric token {line!r}", line=line_number)
        value = float(line)
        if not math.isfinite(value) or value <= 0:
            raise ZeroParseError(f"zero height must be a positive finite number, got {line!r}", line=line_number)
        if value <= previous:
            raise NonMonotoneError(f"value {line} does not exceed the previous value", line=line_number)
        values.append(value)
        previous = value

    zeros = ZeroSet(np.array(values, dtype=np.float64), dataset_id=dataset_id)
    logger.info(f"Parsed {zeros.count} zeros" + (f", t_max={zeros.t_max}" if zeros.count else ""))
    return zeros


def load_zeros(path: str) -> ZeroSet:
    """Load either a text table or a binary cache, detected by the magic bytes"""
    from src.data_pipeline.zero_cache import MAGIC, load_cache

    dataset_id = os.path.basename(path)
    with open(path, "rb") as handle:
        head = handle.read(len(MAGIC))
    if head == MAGIC:
        with open(path, "rb") as handle:
            zeros = load_cache(handle)
        zeros = ZeroSet(zeros.gammas, dataset_id=dataset_id)
    else:
        with open(path, "rb") as handle:
            zeros = parse_zeros(handle, dataset_id=dataset_id)
    logger.info(f"Loaded {zeros.count} zeros from {path}")
    return zeros


def count_upto(zeros: ZeroSet, T: float) -> int:
    """N_obs(T) = #{gamma <= T}; heights equal to T are counted"""
    if T < 0:
        raise DomainError(f"T must be >= 0, got {T}")
    return int(np.searchsorted(zeros.gammas, T, side="right"))


def n_asymptotic(T: float) -> float:
    """Smooth zero count (T/2pi) log(T/(2 pi e)) + 7/8, without the S(T) term"""
    if T <= 1:
        raise DomainError(f"n_asymptotic needs T > 1, got {T}")
    t = T / (2.0 * math.pi)
    return t * math.log(t / math.e) + 7.0 / 8.0

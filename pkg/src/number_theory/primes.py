# src/number_theory/primes.py
"""Prime sieve, von Mangoldt function and prime-power helpers."""
import math
from functools import lru_cache
from typing import Optional, Tuple

import numpy as np
from sympy import factorint, isprime

from src.utils.errors import DomainError


def prime_sieve(nmax: int) -> Tuple[np.ndarray, np.ndarray]:
    """Eratosthenes sieve up to nmax inclusive; returns (primes, is_prime)"""
    if nmax < 2:
        return np.array([], dtype=np.int64), np.zeros(max(nmax + 1, 0), dtype=bool)

    is_prime = np.ones(nmax + 1, dtype=bool)
    is_prime[0] = is_prime[1] = False
    for i in range(2, math.isqrt(nmax) + 1):
        if is_prime[i]:
            is_prime[i * i::i] = False

    primes = np.nonzero(is_prime)[0].astype(np.int64)
    return primes, is_prime


def von_mangoldt_sieve(nmax: int) -> np.ndarray:
    """float64 array with Lambda(n) at index n for 0 <= n <= nmax"""
    lam = np.zeros(nmax + 1, dtype=np.float64)
    primes, _ = prime_sieve(nmax)
    for p in primes.tolist():
        log_p = math.log(p)
        power = p
        while power <= nmax:
            lam[power] = log_p
            power *= p
    return lam


@lru_cache(maxsize=65536)
def prime_power_base(n: int) -> Optional[int]:
    """The prime p when n = p^k with k >= 1, else None"""
    if n < 2:
        return None
    factors = factorint(n)
    if len(factors) == 1:
        return next(iter(factors))
    return None


def is_prime_power(n: int) -> bool:
    return prime_power_base(n) is not None


def von_mangoldt(n: int) -> float:
    """Lambda(n): log p when n is a power of the prime p, else 0"""
    if n < 1:
        raise DomainError(f"von_mangoldt needs n >= 1, got {n}")
    base = prime_power_base(int(n))
    return math.log(base) if base is not None else 0.0


def nearest_prime_power(x: float) -> int:
    """Prime power minimizing |x - n_x|; equidistant candidates resolve to the smaller"""
    if not x > 1:
        raise DomainError(f"nearest_prime_power needs x > 1, got {x}")

    above = math.ceil(x)
    while not is_prime_power(above):
        above += 1

    below = math.floor(x)
    while below >= 2 and not is_prime_power(below):
        below -= 1
    if below < 2:
        return above

    if x - below <= above - x:
        return below
    return above


def primes_upto(nmax: int) -> list:
    return [int(p) for p in prime_sieve(nmax)[0]]


def check_prime(p: int) -> bool:
    return bool(isprime(int(p)))

"""
Hecke relations: extension of prime eigenvalues to a full coefficient table
"""

import logging
import math
from typing import Dict, List, Mapping

import numpy as np

from maasslab.core.config import settings
from maasslab.core.errors import DomainError, MissingPrimeError
from maasslab.models.form import HeckeTable

logger = logging.getLogger(__name__)


def smallest_prime_factors(limit: int) -> np.ndarray:
    """spf[n] = smallest prime factor of n for 2 <= n <= limit"""
    spf = np.zeros(limit + 1, dtype=np.int64)
    for p in range(2, limit + 1):
        if spf[p] == 0:
            spf[p::p][spf[p::p] == 0] = p
    return spf


def primes_up_to(limit: int) -> List[int]:
    if limit < 2:
        return []
    spf = smallest_prime_factors(limit)
    return [n for n in range(2, limit + 1) if spf[n] == n]


def next_prime(n: int) -> int:
    candidate = n + 1
    while True:
        if candidate >= 2 and all(candidate % d for d in range(2, int(math.isqrt(candidate)) + 1)):
            return candidate
        candidate += 1


def factorize(n: int, spf: np.ndarray = None) -> Dict[int, int]:
    """Prime factorisation as {p: exponent}"""
    factors: Dict[int, int] = {}
    m = n
    while m > 1:
        p = int(spf[m]) if spf is not None and m < spf.size else _trial_factor(m)
        while m % p == 0:
            m //= p
            factors[p] = factors.get(p, 0) + 1
    return factors


def _trial_factor(m: int) -> int:
    for d in range(2, int(math.isqrt(m)) + 1):
        if m % d == 0:
            return d
    return m


def divisor_count(n: int) -> int:
    return math.prod(e + 1 for e in factorize(n).values())


def ramanujan_majorant(n: int) -> float:
    """d(n) n^{theta + slack}, the soft bound used for coefficients beyond a table"""
    return divisor_count(n) * n ** (settings.HECKE_THETA + settings.HECKE_BOUND_SLACK)


def hecke_extend(prime_eigenvalues: Mapping[int, float], n_max: int) -> HeckeTable:
    """
    Extend prime eigenvalues to lambda(1..n_max)

    lambda(p^{k+1}) = lambda(p) lambda(p^k) - lambda(p^{k-1}) and
    lambda(mn) = lambda(m) lambda(n) for coprime m, n.

    Raises:
        MissingPrimeError: a prime p <= n_max has no eigenvalue
    """
    if n_max < 1:
        raise DomainError(f"table extent must be positive, got {n_max}")

    primes = primes_up_to(n_max)
    for p in primes:
        if p not in prime_eigenvalues:
            raise MissingPrimeError(p)

    spf = smallest_prime_factors(max(n_max, 2))
    values = np.zeros(n_max + 1)
    values[1] = 1.0
    for n in range(2, n_max + 1):
        p = int(spf[n])
        m, k = n, 0
        while m % p == 0:
            m //= p
            k += 1
        power = n // m
        if m > 1:
            values[n] = values[power] * values[m]
        elif k == 1:
            values[n] = float(prime_eigenvalues[p])
        else:
            values[n] = values[p] * values[power // p] - values[power // (p * p)]

    violations = tuple(
        n for n in range(2, n_max + 1) if abs(values[n]) > ramanujan_majorant(n)
    )
    if violations:
        logger.warning(f"{len(violations)} coefficients exceed d(n) n^(7/64+0.01), first at n={violations[0]}")

    kept = {int(p): float(prime_eigenvalues[p]) for p in primes}
    return HeckeTable(
        prime_eigenvalues=kept,
        extent=n_max,
        values=tuple(float(v) for v in values[1:]),
        bound_violations=violations,
    )

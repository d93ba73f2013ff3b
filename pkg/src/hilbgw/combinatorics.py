"""Partitions, divisor sums, Bernoulli numbers and the q-series built from them.

Partitions are plain tuples of descending positive integers.  The order
returned by :func:`partitions` (reverse lexicographic, so ``(n,)`` first and
``(1,)*n`` last) indexes every operator matrix and every JSON listing.
"""

from __future__ import annotations

from collections import Counter
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial, prod

from .kernel import TruncSeries, series_exp, series_log

Partition = tuple[int, ...]


@lru_cache(maxsize=None)
def _partitions(n: int, largest: int) -> tuple[Partition, ...]:
    if n == 0:
        return ((),)
    out = []
    for first in range(min(n, largest), 0, -1):
        for rest in _partitions(n - first, first):
            out.append((first,) + rest)
    return tuple(out)


def partitions(n: int) -> list[Partition]:
    if n < 0:
        raise ValueError("n must be nonnegative")
    return list(_partitions(n, n))


def aut(mu: Partition) -> int:
    """Order of the automorphism group: product of multiplicity factorials."""
    return prod(factorial(m) for m in Counter(mu).values())


def zee(mu: Partition) -> int:
    """|Aut(mu)| times the product of the parts."""
    return aut(mu) * prod(mu)


def multiplicity(mu: Partition, r: int) -> int:
    return sum(1 for p in mu if p == r)


def sigma(r: int, n: int) -> Fraction:
    if n <= 0:
        raise ValueError("sigma needs a positive argument")
    return sum((Fraction(d) ** r for d in divisors(n)), Fraction(0))


@lru_cache(maxsize=None)
def divisors(n: int) -> tuple[int, ...]:
    small = [d for d in range(1, int(n ** 0.5) + 1) if n % d == 0]
    large = [n // d for d in reversed(small) if d * d != n]
    return tuple(small + large)


def prime_divisors(n: int) -> list[int]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


@lru_cache(maxsize=None)
def _bernoulli_table(m: int) -> tuple[Fraction, ...]:
    b = [Fraction(1)]
    for k in range(1, m + 1):
        s = sum(comb(k + 1, j) * b[j] for j in range(k))
        b.append(-s / (k + 1))
    return tuple(b)


def bernoulli(m: int) -> Fraction:
    """B_m from sum_{j<=m} C(m+1, j) B_j = 0 (so B_1 = -1/2, odd m > 1 give 0)."""
    if m < 0:
        raise ValueError("Bernoulli index must be nonnegative")
    return _bernoulli_table(m)[m]


def eisenstein(g: int, order: int) -> TruncSeries:
    """E_{2g} = 1 - (4g/B_{2g}) sum sigma_{2g-1}(n) Q^n."""
    if g < 1:
        raise ValueError("g must be at least 1")
    c = Fraction(4 * g) / bernoulli(2 * g)
    return TruncSeries([Fraction(1)] + [-c * sigma(2 * g - 1, n) for n in range(1, order + 1)], order)


def partition_series(order: int) -> TruncSeries:
    """P(Q) = prod_l (1 - Q^l)^(-1), via Euler's pentagonal recurrence."""
    p = [0] * (order + 1)
    p[0] = 1
    for n in range(1, order + 1):
        total = 0
        k = 1
        while True:
            g1 = k * (3 * k - 1) // 2
            if g1 > n:
                break
            sign = 1 if k % 2 else -1
            total += sign * p[n - g1]
            g2 = k * (3 * k + 1) // 2
            if g2 <= n:
                total += sign * p[n - g2]
            k += 1
        p[n] = total
    return TruncSeries(p, order)


def log_partition_series(order: int) -> TruncSeries:
    return series_log(partition_series(order))


def ptilde_series(order: int) -> TruncSeries:
    """P * log P: partitions weighted by their number of connected pieces."""
    p = partition_series(order)
    return p * series_log(p)


@lru_cache(maxsize=None)
def _hur_table(order: int) -> tuple[tuple[Fraction, ...], ...]:
    # exp(y log P(x)) = sum_k y^k (log P)^k / k!
    lp = log_partition_series(order)
    rows = []
    power = TruncSeries.one(order)
    for k in range(order + 1):
        rows.append(tuple(c / factorial(k) for c in power.coeffs))
        power = power * lp
    return tuple(rows)


def hur(l: int, k: int) -> Fraction:
    """Coefficient of x^l y^k in exp(y log P(x))."""
    if l < 1 or k < 1:
        raise ValueError("hur needs l >= 1 and k >= 1")
    if k > l:
        return Fraction(0)
    return _hur_table(l)[k][l]


def ecal2(order: int) -> TruncSeries:
    """sum_k k Q^k / (1 - Q^k)."""
    return TruncSeries([Fraction(0)] + [sigma(1, n) for n in range(1, order + 1)], order)


def ecal3(order: int) -> TruncSeries:
    """sum_k k^2 Q^k / (1 - Q^k)."""
    return TruncSeries([Fraction(0)] + [sigma(2, n) for n in range(1, order + 1)], order)


def pexp_series(order: int, exponent) -> TruncSeries:
    """prod_n (1 - Q^n)^exponent for a symbolic or rational exponent."""
    lp = log_partition_series(order)
    return series_exp(lp.map(lambda c: exponent * (-c)))


def degenerate_factor(g: int) -> Fraction:
    """|B_{2g-2}|/(2g-2)!, with |B_0| = 0! = 1 covering the genus-one case."""
    if g < 1:
        raise ValueError("g must be at least 1")
    return abs(bernoulli(2 * g - 2)) / factorial(2 * g - 2)

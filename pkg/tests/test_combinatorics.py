from fractions import Fraction
from math import factorial, gcd

from hypothesis import given, strategies as st

from hilbgw.combinatorics import (aut, bernoulli, divisors, eisenstein, partition_series,
                                  partitions, prime_divisors, ptilde_series, sigma, zee)
from hilbgw.kernel import series_log


def test_partition_counts():
    assert [len(partitions(n)) for n in range(1, 11)] == [1, 2, 3, 5, 7, 11, 15, 22, 30, 42]


def test_partition_order_ends_with_ones():
    assert partitions(4)[-1] == (1, 1, 1, 1)
    assert all(list(mu) == sorted(mu, reverse=True) for mu in partitions(7))


@given(st.integers(1, 9))
def test_class_sizes_sum_to_factorial(n):
    # n!/z(mu) is the size of the conjugacy class of cycle type mu
    assert sum(Fraction(factorial(n), zee(mu)) for mu in partitions(n)) == factorial(n)


def test_aut_and_zee():
    assert aut((2, 1, 1)) == 2
    assert zee((2, 1, 1)) == 4
    assert zee((3,)) == 3


@given(st.integers(1, 60), st.integers(1, 60), st.integers(-1, 5))
def test_sigma_multiplicative(a, b, r):
    if gcd(a, b) == 1:
        assert sigma(r, a * b) == sigma(r, a) * sigma(r, b)


@given(st.integers(1, 200))
def test_divisors_brute_force(n):
    assert list(divisors(n)) == [d for d in range(1, n + 1) if n % d == 0]
    assert prime_divisors(n) == [p for p in divisors(n) if p > 1 and all(p % k for k in range(2, p))]


def test_bernoulli_values():
    assert [bernoulli(m) for m in (0, 1, 2, 4, 6, 8, 10, 12)] == [
        1, Fraction(-1, 2), Fraction(1, 6), Fraction(-1, 30), Fraction(1, 42), Fraction(-1, 30),
        Fraction(5, 66), Fraction(-691, 2730)]
    assert all(bernoulli(m) == 0 for m in (3, 5, 7, 9))


def test_eisenstein_known_expansions():
    e2, e4, e6 = (eisenstein(g, 4) for g in (1, 2, 3))
    assert [e2[k] for k in range(5)] == [1, -24, -72, -96, -168]
    assert [e4[k] for k in range(5)] == [1, 240, 2160, 6720, 17520]
    assert [e6[k] for k in range(5)] == [1, -504, -16632, -122976, -532728]


def test_e4_squared_is_e8():
    # weight 8 forms are one-dimensional
    assert eisenstein(2, 12) * eisenstein(2, 12) == eisenstein(4, 12)


def test_partition_series_and_ptilde():
    p = partition_series(10)
    assert [p[k] for k in range(11)] == [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42]
    # log P = sum sigma_{-1}(n) Q^n, and P~ = P log P
    lp = series_log(p)
    assert all(lp[n] == sigma(-1, n) for n in range(1, 11))
    assert ptilde_series(10) == p * lp

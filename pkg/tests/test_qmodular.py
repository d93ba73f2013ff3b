from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, strategies as st

from hilbgw.hilb import trn
from hilbgw.kernel import TruncSeries
from hilbgw.qmodular import (CotBasisExpr, bseries, cot_expansion, lemma_trace_check,
                             tr_cot_expr, trace_u_expansion)


def _cot_oracle(r: int, order: int) -> list[Fraction]:
    """Coefficients of x*cot(x) at x = r*u/2 from the sine and cosine series."""
    n = order + 2
    sin_over_x = TruncSeries([Fraction((-1) ** (k // 2), factorial(k + 1)) if k % 2 == 0 else 0
                              for k in range(n)], n - 1, "u")
    cos = TruncSeries([Fraction((-1) ** (k // 2), factorial(k)) if k % 2 == 0 else 0
                       for k in range(n)], n - 1, "u")
    xcot = cos * sin_over_x.inverse()
    half = Fraction(r, 2)
    return [xcot[k] * half ** k for k in range(n)]


@pytest.mark.parametrize("r", [1, 2, 3, 5])
def test_cot_expansion_against_sine_cosine(r):
    # -(r/2) cot(ru/2) = -(1/u) * [x cot x]_{x = ru/2}
    order = 9
    lau = cot_expansion(r, order, pole=True)
    oracle = _cot_oracle(r, order)
    for e in range(-1, order + 1):
        assert lau.coefficient(e)[0] == -oracle[e + 1]


@pytest.mark.parametrize("n", range(1, 7))
def test_cot_basis_reproduces_trace(n):
    assert tr_cot_expr(n).to_ratfunc() == trn(n)


@pytest.mark.parametrize("n", range(1, 6))
def test_decomposition_route_agrees(n):
    a = trace_u_expansion(n, 7, route="partitions")
    b = trace_u_expansion(n, 7, route="decompose")
    assert a == b


@pytest.mark.parametrize("n", range(1, 7))
def test_trace_has_no_pole(n):
    lau = trace_u_expansion(n, 3, pole=True)
    assert lau.coefficient(-1)[0] == 0


def test_value_at_q0():
    # c_r(0) = -1
    e = CotBasisExpr({1: 2, 3: Fraction(1, 2)}, 1)
    assert e.at_q0() == 1 - 2 - Fraction(1, 2)
    assert e.to_ratfunc().subs({"q": 0}).const_value() == e.at_q0()


@given(st.dictionaries(st.integers(1, 4), st.fractions(-3, 3, max_denominator=5), max_size=4),
       st.fractions(-3, 3, max_denominator=5))
def test_from_ratfunc_round_trip(coeffs, const):
    e = CotBasisExpr(coeffs, const)
    assert CotBasisExpr.from_ratfunc(e.to_ratfunc(), 4) == e


def test_bseries_leading_terms():
    b = bseries(3, 4)
    # u^-1 and even powers vanish; u^1 carries (|B_2|/2!)(sigma_3 - sigma_1)
    assert b.coefficient(-1).is_zero() and b.coefficient(0).is_zero()
    sig = lambda r, m: sum(d ** r for d in range(1, m + 1) if m % d == 0)
    assert [b.coefficient(1)[m] for m in range(5)] == [0] + [
        Fraction(sig(3, m) - sig(1, m), 12) for m in range(1, 5)]


def test_lemma_trace_identity():
    rep = lemma_trace_check(5, 7)
    assert rep.passed, rep.failure
    assert rep.checked > 0

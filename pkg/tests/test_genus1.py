from fractions import Fraction
from math import prod

import pytest
from hypothesis import given, strategies as st

from hilbgw.combinatorics import bernoulli, eisenstein, partitions, sigma
from hilbgw.genus1 import (connected_fixed_target_check, d_series, d_series_qexp,
                           degree0_identity_check, exxx_check, fixed_elliptic_integral,
                           hodge_check, hodge_family_series, hodge_general_series,
                           hodge_general_series_from_integrals, invert_q, load_table,
                           nl_coefficient, nl_projection_check, ones_closed, ones_series,
                           parse_trace_combo, psi_lambda_integral, section5_check, table_audit,
                           table_eval, theorem1_consistency, xcce_series)
from hilbgw.hilb import trn
from hilbgw.kernel import RatFunc, parse_ratfunc

PREF = "-1/24*(t1+t2)^2/(t1*t2)"


def test_d_series_low_n():
    assert d_series(1).is_zero()
    assert d_series(2) == parse_ratfunc(f"{PREF}*(q+1)/(q-1)")


@pytest.mark.parametrize("n,closed", [
    (3, "(5*q^3-3*q^2-3*q+5)/((q-1)*(q^2-q+1))"),
    (4, "(35*q^5-28*q^4+23*q^3+23*q^2-28*q+35)/(2*(q-1)*(q^2+1)*(q^2-q+1))"),
])
def test_d_series_closed_forms(n, closed):
    assert d_series(n) == parse_ratfunc(f"{PREF}*{closed}")


def test_d_series_bracket_is_sigma_convolution():
    # the bracket is Tr_n + sum sigma_{-1}(n-k) Tr_k, checked against n=4: Tr4 + Tr3 + (3/2) Tr2
    bracket = trn(4) + trn(3) + trn(2) * RatFunc.const(Fraction(3, 2))
    assert d_series(4) == parse_ratfunc(PREF) * bracket


def test_d_series_specialization():
    f = d_series(3, (1, 5))
    assert f.free_of("t1", "t2")
    assert f == d_series(3).subs({"t1": 1, "t2": 5})


@pytest.mark.parametrize("n", range(2, 7))
def test_t_symmetry(n):
    assert d_series(n).swap("t1", "t2") == d_series(n)


def test_qexp_coefficients_n3():
    s = d_series_qexp(3, 7)
    assert [s[k] for k in range(8)] == [-5, -7, -1, 2, -1, -7, -10, -7]


@pytest.mark.parametrize("n", range(2, 6))
def test_q_inversion_parity(n):
    # every trace is odd under q -> 1/q, so the bracket is too
    assert invert_q(d_series(n)) == -d_series(n)


@pytest.mark.parametrize("n,value", [(2, Fraction(5, 2)), (3, Fraction(29, 6)),
                                     (4, Fraction(109, 12)), (5, Fraction(907, 60))])
def test_ones_series(n, value):
    v, pref = ones_series(n)
    assert v == value
    assert pref == parse_ratfunc("-1/24*(t1+t2)/(t1*t2)")


def test_ones_series_brute_force():
    # P log P with log P = sum_l sum_m Q^(lm)/m and P counted by enumeration
    for n in range(1, 8):
        log_p = [sum((Fraction(1, m) for m in range(1, k + 1) if k % m == 0), Fraction(0))
                 for k in range(n + 1)]
        p = [len(partitions(m)) if m else 1 for m in range(n + 1)]
        assert ones_series(n)[0] == sum(p[n - k] * log_p[k] for k in range(1, n + 1))


def test_exxx_generating_function():
    rep = exxx_check(6)
    assert rep.passed, rep.failure


def test_degree0_identity():
    rep = degree0_identity_check(8)
    assert rep.passed, rep.failure


def test_hodge_family_g1_and_g2():
    order = 6
    assert hodge_family_series(1, order) == eisenstein(1, order).scale(Fraction(-1, 576))
    s = hodge_family_series(2, order)
    assert s[0] == Fraction(1, 69120)
    # Q^n coefficient is (1/24)|B_2| sigma_3(n) / 2!
    assert all(s[n] == Fraction(1, 24) * Fraction(1, 12) * sigma(3, n) for n in range(1, order + 1))


@pytest.mark.parametrize("g", range(2, 7))
def test_hodge_family_matches_fixed_target(g):
    s = hodge_family_series(g, 12)
    b = abs(bernoulli(2 * g - 2))
    fact = prod(range(1, 2 * g - 1))
    for n in range(1, 13):
        assert s[n] == b * sigma(2 * g - 1, n) / fact / 24
        assert s[n] * 24 == fixed_elliptic_integral(g, n)


def test_hodge_check_suite():
    assert hodge_check(5, 8).passed


@pytest.mark.parametrize("g", range(2, 6))
def test_psi_lambda_one_point(g):
    # int psi^(g-1) lambda_g lambda_(g-1) = |B_2g| / (2^(2g-1) (2g-1)!! 2g)
    dfact = prod(range(2 * g - 1, 0, -2))
    expect = abs(bernoulli(2 * g)) / (2 ** (2 * g - 1) * dfact * 2 * g)
    assert psi_lambda_integral(g, [g - 1], 1) == expect


@pytest.mark.parametrize("g,ks,m", [(2, [1, 0], 1), (2, [1, 0], 2), (3, [1, 1], 2), (3, [2, 0, 0], 3)])
def test_general_hodge_routes_agree(g, ks, m):
    _, a = hodge_general_series(g, m, ks, 6)
    assert a == hodge_general_series_from_integrals(g, m, ks, 6)


def test_psi_lambda_dimension_guard():
    with pytest.raises(ValueError):
        psi_lambda_integral(3, [1], 1)


def test_xcce_and_connected_series():
    _, rep = xcce_series(4, 6)
    assert rep.passed, rep.failure
    assert connected_fixed_target_check(5, 5).passed


@pytest.mark.parametrize("g", [2, 3, 4])
def test_nl_projection(g):
    assert nl_projection_check(g, 8).passed


@given(st.integers(2, 5), st.integers(1, 200))
def test_nl_coefficient_depends_on_radical(g, n):
    rad = prod(p for p in range(2, n + 1) if n % p == 0 and all(p % k for k in range(2, p)))
    scaled = nl_coefficient(g, n) / Fraction(n) ** (2 * g - 1)
    assert scaled == nl_coefficient(g, rad) / Fraction(rad) ** (2 * g - 1)


def test_nl_g2_first_values():
    # g=2: n^3 * 2/(6 * 1/30) * prod (1 - p^-2)
    assert nl_coefficient(2, 1) == 10
    assert nl_coefficient(2, 2) == 10 * 8 * Fraction(3, 4)


def test_table_shape():
    table = load_table()
    assert {n for n, _ in table} == {2, 3, 4, 5}
    for n in range(2, 6):
        assert {mu for m, mu in table if m == n} == set(partitions(n))


def test_table_ones_against_p_log_p():
    for n in range(2, 6):
        assert table_eval(n, (1,) * n).value == ones_closed(n)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_table_divisor_entry_against_trace_formula(n):
    assert theorem1_consistency(n)


@pytest.mark.parametrize("spec", [(1, 5), (2, 7)])
def test_table_divisor_entry_n5(spec):
    # exercises the full cubic structure of M_D through the (2,1,1,1) trace combination
    assert theorem1_consistency(5, spec)
    assert theorem1_consistency(5, spec, form="closed")


def test_table_audit():
    rep = table_audit()
    assert rep.passed, rep.failure


def test_section5_suite():
    rep = section5_check(((1, 5),))
    assert rep.passed, rep.failure


def test_trace_combo_parser():
    tc = parse_trace_combo("t1*Tr(2) - Tr(2,1)/(t1+t2)")
    assert tc.symbols() == {(2,), (2, 1)}
    with pytest.raises(ValueError):
        parse_trace_combo("Tr(1,2)")


def test_n5_displayed_form_differs_only_by_sign():
    # the displayed n=5 closed form is -d_series(5); the (2,1,1,1) table row agrees with d_series
    shown = parse_ratfunc(f"{PREF}*-(272*q^9-539*q^8+760*q^7-629*q^6+302*q^5+302*q^4-629*q^3"
                          "+760*q^2-539*q+272)/(6*(q-1)*(q^2+1)*(q^2-q+1)*(q^4-q^3+q^2-q+1))")
    assert d_series(5) == -shown
    assert table_eval(5, (2, 1, 1, 1), "closed").value == shown

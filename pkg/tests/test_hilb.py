from fractions import Fraction

import pytest

from hilbgw.combinatorics import partitions, zee
from hilbgw.genus1 import invert_q
from hilbgw.hilb import (build_md, commutativity_check, cot_basis_ratfunc, gram_diagonal,
                         mult_operator, selfadjoint_check, trace_identity_check, trmu, trn)
from hilbgw.kernel import RatFunc


# brute-force Fock space: states are {partition: RatFunc} in the power-sum basis

def _key(parts):
    return tuple(sorted(parts, reverse=True))


def _create(state, r):
    return {_key(mu + (r,)): c for mu, c in state.items()}


def _annihilate(state, r):
    out = {}
    for mu, c in state.items():
        m = mu.count(r)
        if m:
            rest = list(mu)
            rest.remove(r)
            nu = tuple(rest)
            out[nu] = out.get(nu, RatFunc.const(0)) + c * RatFunc.const(r * m)
    return out


def _add(a, b, scale):
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, RatFunc.const(0)) + v * scale
    return out


def _md_apply(mu, n):
    t1, t2 = RatFunc.gen("t1"), RatFunc.gen("t2")
    state = {mu: RatFunc.const(1)}
    out = {}
    for k in range(1, n + 1):
        out = _add(out, _create(_annihilate(state, k), k), (t1 + t2) * cot_basis_ratfunc(k)
                   * RatFunc.const(Fraction(k, 2)))
    for k in range(1, n + 1):
        for l in range(1, n + 1):
            # t1 t2 alpha_{-k} alpha_{-l} alpha_{k+l} splits a part, the other term joins two
            split = _create(_create(_annihilate(state, k + l), k), l)
            out = _add(out, split, t1 * t2 * RatFunc.const(Fraction(1, 2)))
            join = _create(_annihilate(_annihilate(state, l), k), k + l)
            out = _add(out, join, RatFunc.const(Fraction(-1, 2)))
    out = _add(out, state, (t1 + t2) * cot_basis_ratfunc(1) * RatFunc.const(Fraction(-n, 2)))
    return out


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_md_against_brute_force_fock_space(n):
    m = build_md(n)
    parts = m.parts
    for j, mu in enumerate(parts):
        image = _md_apply(mu, n)
        for i, nu in enumerate(parts):
            expect = image.get(nu, RatFunc.const(0)) * RatFunc.const(Fraction(zee(nu), zee(mu)))
            assert m.entry(i, j) == expect, (nu, mu)


def test_md_n2_explicit():
    # diagonal (t1+t2)(q+1)/(q-1)-type entries on (2); off-diagonal constants
    m = build_md(2)
    assert m.parts == [(2,), (1, 1)]
    t1, t2 = RatFunc.gen("t1"), RatFunc.gen("t2")
    q = RatFunc.gen("q")
    c1 = (-q + 1) / (-q - 1)
    c2 = (q * q + 1) / (q * q - 1)
    assert m.entry(0, 0) == (t1 + t2) * (c2 * 2 - c1)
    assert m.entry(1, 1) == RatFunc.const(0)


@pytest.mark.parametrize("n", range(1, 6))
def test_trace_formula(n):
    assert build_md(n).trace() == trn(n) * (RatFunc.gen("t1") + RatFunc.gen("t2"))


def test_trace_identity_suite():
    rep = trace_identity_check(6, symbolic_max=4)
    assert rep.passed, rep.failure


@pytest.mark.parametrize("n", range(1, 8))
def test_trace_parity_under_q_inversion(n):
    # Tr_n(1/q) = -Tr_n(q)
    assert invert_q(trn(n)) == -trn(n)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_selfadjoint_against_gram(n):
    assert selfadjoint_check(n)


def test_gram_diagonal_values():
    g = gram_diagonal(2, (1, 5))
    # <(2)|(2)> = -1/(5*2), <(1,1)|(1,1)> = 1/(25*2)
    assert g[0] == RatFunc.const(Fraction(-1, 10))
    assert g[1] == RatFunc.const(Fraction(1, 50))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_identity_and_divisor_operators(n):
    spec = (1, 5)
    one = mult_operator((1,) * n, spec)
    assert one.is_identity()
    d = mult_operator((2,) + (1,) * (n - 2), spec)
    md = build_md(n, spec)
    # D = -|2,1^(n-2)>
    assert all(d.entry(i, j) == -md.entry(i, j) for i in range(md.dim) for j in range(md.dim))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_trace_of_unit_is_dimension(n):
    assert trmu((1,) * n, (1, 5)) == RatFunc.const(len(partitions(n)))


def test_trmu_of_divisor_class():
    for n in (2, 3, 4):
        mu = (2,) + (1,) * (n - 2)
        assert trmu(mu, (2, 7)) == -(trn(n) * RatFunc.const(9)).subs({"t1": 2, "t2": 7})


def test_commutativity_small():
    rep = commutativity_check(3)
    assert rep.passed, rep.failure


def test_specialization_commutes_with_construction():
    full = build_md(3)
    spec = build_md(3, (2, 7))
    for i in range(full.dim):
        for j in range(full.dim):
            assert full.entry(i, j).subs({"t1": 2, "t2": 7}) == spec.entry(i, j)

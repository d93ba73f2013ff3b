import random
from fractions import Fraction
from itertools import combinations_with_replacement

import pytest
from hypothesis import given, settings, strategies as st

from hilbgw.kernel import Poly
from hilbgw.symfun import (DiffPoly, DiffSymbol, LocalizedExpr, SymfunParseError, Y, discriminant,
                           eliminate_roots, evaluation_oracle, f, family_values, is_symmetric,
                           omega, oracle_run, parse_diffpoly, phi, px_at, random_family,
                           random_symmetric, rewrite, symmetrize, zgens)


def _family(rows, m=1):
    gens = zgens(m)
    return [Poly(r, gens) for r in rows]


def test_symbol_grammar():
    p = parse_diffpoly("d[1,1,2]f3", 3)
    (sym,) = p.symbols()
    assert sym == DiffSymbol("f", 3, (1, 1, 2))
    assert str(p) == "d[1,1,2]f3"
    assert parse_diffpoly("d[2,1]s1", 2) == DiffPoly.symbol(DiffSymbol("s", 1, (1, 2)))


def test_sum_binds_following_product():
    a = parse_diffpoly("sum_i f_i*f_i + 1", 3)
    b = parse_diffpoly("f1^2 + f2^2 + f3^2 + 1", 3)
    assert a == b


@pytest.mark.parametrize("text", ["f1 +", "d[]f1", "f1 / f2", "(f1", "sum_i f_j", "f0"])
def test_parse_errors(text):
    with pytest.raises(SymfunParseError):
        parse_diffpoly(text, 2)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_rewrite_sum_of_first_derivatives(n):
    out = rewrite(parse_diffpoly("sum_i d[1]f_i", n), n)
    assert out.power == 0
    assert str(out) == "-d[1]s1"


def test_rewrite_discriminant_n2():
    out = rewrite(parse_diffpoly("(f1-f2)*(f2-f1)", 2), 2)
    assert out.power == 0
    assert str(out) == "4*s2 - s1^2"
    assert out.numerator == discriminant(2)


def test_discriminant_n3_closed_form():
    expect = parse_diffpoly("27*s3^2 + 4*s2^3 + 4*s1^3*s3 - s1^2*s2^2 - 18*s1*s2*s3", 3)
    assert discriminant(3) == expect


def test_rewrite_product_of_derivatives_n2():
    out = rewrite(parse_diffpoly("d[1]f1*d[1]f2", 2), 2)
    assert out.power == 1
    assert str(out) == "(d[1]s2^2 + d[1]s1^2*s2 - s1*d[1]s1*d[1]s2) / Delta"


def test_oracle_linear_family():
    # f = {z, 2z}: f1' f2' = 2
    expr = parse_diffpoly("d[1]f1*d[1]f2", 2)
    family = _family([{(1,): 1}, {(1,): 2}])
    assert evaluation_oracle(expr, family, [3]) == (2, 2)


def test_oracle_random_cubic_family():
    rng = random.Random(7)
    expr = symmetrize(parse_diffpoly("d[1]f1^2*f2", 3), 3)
    family = random_family(rng, 3, 1)
    rw = rewrite(expr, 3)
    hits = 0
    for z in range(-15, 15):
        try:
            direct, via = evaluation_oracle(expr, family, [z], rw)
        except ZeroDivisionError:
            continue
        assert direct == via
        hits += 1
    assert hits >= 20


def test_non_symmetric_rejected():
    with pytest.raises(ValueError):
        rewrite(parse_diffpoly("d[1]f1", 2), 2)
    with pytest.raises(ValueError):
        rewrite(parse_diffpoly("Y", 2), 2)


@given(st.integers(0, 10 ** 6), st.integers(-3, 3), st.integers(-3, 3))
@settings(max_examples=15, deadline=None)
def test_rewrite_is_linear(seed, a, b):
    rng = random.Random(seed)
    n, m = rng.randint(2, 3), rng.randint(1, 2)
    x = random_symmetric(rng, n, m, max_order=2)
    y = random_symmetric(rng, n, m, max_order=2)
    lhs = rewrite(x.scale(a) + y.scale(b), n)
    rx, ry = rewrite(x, n), rewrite(y, n)
    k = max(rx.power, ry.power)
    delta = discriminant(n)
    num = (rx.numerator * delta ** (k - rx.power)).scale(a) + (ry.numerator * delta ** (k - ry.power)).scale(b)
    assert lhs == LocalizedExpr(num, k, n)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_discriminant_identity_numerically(n):
    rng = random.Random(n)
    family = random_family(rng, n, 1)
    values = family_values(family, [Fraction(1, 3)])
    roots = [values(f(i)) for i in range(1, n + 1)]
    vandermonde = 1
    for i in range(n):
        for j in range(n):
            if i != j:
                vandermonde *= roots[i] - roots[j]
    px = 1
    for r in roots:
        px *= px_at(DiffPoly.const(r), n).evaluate(values)
    assert discriminant(n).evaluate(values) == vandermonde == px


@pytest.mark.parametrize("n", [2, 3, 4])
def test_derivative_free_rewrite_matches_triangular(n):
    rng = random.Random(100 + n)
    for _ in range(4):
        mono = DiffPoly.const(1)
        for _ in range(rng.randint(1, 3)):
            mono = mono * DiffPoly.symbol(f(rng.randint(1, n))) ** rng.randint(1, 3)
        expr = symmetrize(mono, n)
        out = rewrite(expr, n)
        assert out.power == 0
        assert out.numerator == eliminate_roots(expr, n)


def test_power_sum_by_hand():
    # p_2 = s1^2 - 2 s2
    assert rewrite(parse_diffpoly("sum_i f_i^2", 3), 3).numerator == parse_diffpoly("s1^2 - 2*s2", 3)


def test_phi_first_order_n2():
    expect = parse_diffpoly("-d[1]s1*Y - d[1]s2", 2)
    assert phi((1,), 2) == expect


def test_phi_needs_nonzero_index():
    with pytest.raises(ValueError):
        phi((), 2)


def _y_values(family, point, i):
    base = family_values(family, point)

    def value(sym):
        if sym.kind == "Y":
            return base(DiffSymbol("f", i, sym.deriv))
        return base(sym)
    return value


@pytest.mark.parametrize("n,m", [(2, 1), (2, 2), (3, 1), (3, 2)])
def test_phi_round_trip(n, m):
    # d^b f_i * P_x(f_i) = Phi_b with Y and its lower derivatives read off the roots
    rng = random.Random(10 * n + m)
    family = random_family(rng, n, m)
    point = [Fraction(rng.randint(-3, 3), 2) for _ in range(m)]
    for order in (1, 2, 3):
        for b in combinations_with_replacement(range(1, m + 1), order):
            for i in range(1, n + 1):
                values = _y_values(family, point, i)
                lhs = values(Y(*b)) * px_at(DiffPoly.symbol(Y()), n).evaluate(values)
                assert phi(b, n).evaluate(values) == lhs


@pytest.mark.parametrize("n,b", [(2, (1,)), (2, (1, 1)), (2, (1, 2)), (3, (1,)), (3, (1, 1))])
def test_omega_normalization(n, b):
    rng = random.Random(3)
    family = random_family(rng, n, 2)
    om, power = omega(b, n)
    assert om.kinds() <= {"s", "Y"}
    for i in range(1, n + 1):
        values = _y_values(family, [Fraction(1, 2), Fraction(-1, 3)], i)
        delta = discriminant(n).evaluate(values)
        assert om.evaluate(values) == values(Y(*b)) * delta ** power


def test_oracle_run_small():
    for expr, n, m, direct, via in oracle_run(30, 11, n_max=3):
        assert direct == via, (expr, n, m)


def test_is_symmetric():
    assert not is_symmetric(parse_diffpoly("f1*f2 + f3", 3), 3)
    assert is_symmetric(parse_diffpoly("f1*f2 + f1*f3 + f2*f3", 3), 3)


def test_output_is_deterministic():
    a = str(rewrite(parse_diffpoly("sum_i d[1]f_i^2", 3), 3))
    b = str(rewrite(parse_diffpoly("sum_i d[1]f_i*d[1]f_i", 3), 3))
    assert a == b

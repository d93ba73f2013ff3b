"""Rational functions num/den over :class:`Poly`, plus an expression parser.

Equality is decided by cross multiplication.  Normalization is best effort:
monomial factors and rational content are always removed, common factors are
cancelled by a univariate gcd when both sides are free of everything but one
generator, and otherwise by trial division against a fixed factor base
(cyclotomic polynomials in q and a few linear forms in t1, t2).  That base
covers every denominator this package produces.
"""

from __future__ import annotations

import ast
from fractions import Fraction
from functools import lru_cache
from typing import Mapping

from .poly import GENS, Poly, as_rat


@lru_cache(maxsize=None)
def cyclotomic_coeffs(d: int) -> tuple[Fraction, ...]:
    """Coefficients of the d-th cyclotomic polynomial, ascending."""
    num = [Fraction(-1)] + [Fraction(0)] * (d - 1) + [Fraction(1)]
    for e in range(1, d):
        if d % e == 0:
            num = _udiv_exact(num, list(cyclotomic_coeffs(e)))
    return tuple(num)


def _udiv_exact(a: list, b: list) -> list:
    q, r = _udivmod(a, b)
    if any(r):
        raise ArithmeticError("inexact univariate division")
    return q


def _udivmod(a: list, b: list) -> tuple[list, list]:
    a = list(a)
    while b and not b[-1]:
        b = b[:-1]
    if not b:
        raise ZeroDivisionError
    db = len(b) - 1
    if len(a) - 1 < db:
        return [], a
    q = [Fraction(0)] * (len(a) - db)
    lc = b[-1]
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i]
        if c:
            c = c / lc
            q[i - db] = c
            for j in range(db + 1):
                a[i - db + j] -= c * b[j]
    r = a[:db]
    while r and not r[-1]:
        r.pop()
    return q, r


def ugcd(a: list, b: list) -> list:
    """Monic gcd of two univariate rational polynomials (ascending lists)."""
    a = _trim(list(a))
    b = _trim(list(b))
    while b:
        _, r = _udivmod(a, b)
        a, b = b, _trim(r)
        if b:
            lc = b[-1]
            b = [c / lc for c in b]
    if not a:
        return []
    lc = a[-1]
    return [c / lc for c in a]


def _trim(a: list) -> list:
    while a and not a[-1]:
        a.pop()
    return a


_FACTOR_CACHE: dict = {}


def _factor_base(gens: tuple[str, ...]) -> list[Poly]:
    if gens in _FACTOR_CACHE:
        return _FACTOR_CACHE[gens]
    base = []
    if "q" in gens:
        for d in range(1, 41):
            base.append(Poly.from_univariate(cyclotomic_coeffs(d), "q", gens))
    if "t1" in gens and "t2" in gens:
        t1, t2 = Poly.gen("t1", gens), Poly.gen("t2", gens)
        base += [t1 + t2, t1 - t2, 2 * t1 + t2, t1 + 2 * t2]
        if "m" in gens:
            m = Poly.gen("m", gens)
            base += [t1 + m, t2 + m, t1 + t2 + m]
    _FACTOR_CACHE[gens] = base
    return base


class RatFunc:
    __slots__ = ("num", "den")

    def __init__(self, num, den=1, gens: tuple[str, ...] | None = None, reduce: bool = True):
        if gens is None:
            gens = num.gens if isinstance(num, Poly) else den.gens if isinstance(den, Poly) else GENS
        if not isinstance(num, Poly):
            num = Poly.const(num, gens)
        if not isinstance(den, Poly):
            den = Poly.const(den, gens)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        self.num, self.den = (_reduce(num, den) if reduce else _cheap(num, den))

    @classmethod
    def _raw(cls, num: Poly, den: Poly) -> "RatFunc":
        r = object.__new__(cls)
        r.num, r.den = num, den
        return r

    @property
    def gens(self) -> tuple[str, ...]:
        return self.num.gens

    @classmethod
    def const(cls, c, gens: tuple[str, ...] = GENS) -> "RatFunc":
        return cls._raw(Poly.const(c, gens), Poly.const(1, gens))

    @classmethod
    def gen(cls, name: str, gens: tuple[str, ...] = GENS) -> "RatFunc":
        return cls._raw(Poly.gen(name, gens), Poly.const(1, gens))

    def _coerce(self, other) -> "RatFunc":
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, Poly):
            return RatFunc._raw(other, Poly.const(1, other.gens))
        if isinstance(other, (int, Fraction)):
            return RatFunc.const(other, self.gens)
        raise TypeError(f"cannot combine RatFunc with {type(other).__name__}")

    def __add__(self, other) -> "RatFunc":
        if not isinstance(other, (RatFunc, Poly, int, Fraction)):
            return NotImplemented
        o = self._coerce(other)
        if self.den == o.den:
            return RatFunc(self.num + o.num, self.den)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self) -> "RatFunc":
        return RatFunc._raw(-self.num, self.den)

    def __sub__(self, other) -> "RatFunc":
        if not isinstance(other, (RatFunc, Poly, int, Fraction)):
            return NotImplemented
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "RatFunc":
        return self._coerce(other) - self

    def __mul__(self, other) -> "RatFunc":
        if isinstance(other, (int, Fraction)):
            if not other:
                return RatFunc.const(0, self.gens)
            return RatFunc._raw(self.num.scale(other), self.den)
        if not isinstance(other, (RatFunc, Poly)):
            return NotImplemented
        o = self._coerce(other)
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero rational function")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other) -> "RatFunc":
        if isinstance(other, (int, Fraction)):
            return RatFunc._raw(self.num.scale(Fraction(1) / as_rat(other)), self.den)
        if not isinstance(other, (RatFunc, Poly)):
            return NotImplemented
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other) -> "RatFunc":
        return self._coerce(other) * self.inverse()

    def __pow__(self, k: int) -> "RatFunc":
        if k < 0:
            return self.inverse() ** (-k)
        return RatFunc(self.num ** k, self.den ** k)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, Poly)):
            other = self._coerce(other)
        if not isinstance(other, RatFunc):
            return NotImplemented
        return ratfunc_eq(self, other)

    __hash__ = None  # equality is not structural

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_const(self) -> bool:
        return self.num.is_const() and self.den.is_const()

    def const_value(self) -> Fraction:
        return self.num.const_value() / self.den.const_value()

    def free_of(self, *names: str) -> bool:
        return self.num.free_of(*names) and self.den.free_of(*names)

    def subs(self, values: Mapping[str, object]) -> "RatFunc":
        den = self.den.subs(values)
        if den.is_zero():
            raise ZeroDivisionError(f"denominator vanishes at {dict(values)}")
        return RatFunc(self.num.subs(values), den)

    def evaluate(self, values: Mapping[str, object]) -> Fraction:
        d = self.den.evaluate(values)
        if not d:
            raise ZeroDivisionError(f"denominator vanishes at {dict(values)}")
        return self.num.evaluate(values) / d

    def swap(self, a: str, b: str) -> "RatFunc":
        return RatFunc._raw(self.num.swap(a, b), self.den.swap(a, b))

    def change_gens(self, gens: tuple[str, ...]) -> "RatFunc":
        return RatFunc(change_gens(self.num, gens), change_gens(self.den, gens))

    def normalize(self) -> "RatFunc":
        return RatFunc(self.num, self.den)

    def __str__(self) -> str:
        if self.den.is_const() and self.den.const_value() == 1:
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self) -> str:
        return f"RatFunc({self})"


def change_gens(p: Poly, gens: tuple[str, ...]) -> Poly:
    """Re-embed a polynomial into a ring with other generator names."""
    idx = []
    for name in p.gens:
        idx.append(gens.index(name) if name in gens else None)
    out = {}
    for e, c in p.terms.items():
        e2 = [0] * len(gens)
        for k, a in enumerate(e):
            if a:
                if idx[k] is None:
                    raise ValueError(f"generator {p.gens[k]} missing from target ring")
                e2[idx[k]] = a
        out[tuple(e2)] = c
    return Poly(out, gens)


def ratfunc_eq(a: RatFunc, b: RatFunc) -> bool:
    """num(a)*den(b) == num(b)*den(a)."""
    if a.gens != b.gens:
        raise ValueError("generator mismatch")
    return a.num * b.den == b.num * a.den


def _cheap(num: Poly, den: Poly) -> tuple[Poly, Poly]:
    if num.is_zero():
        return num, Poly.const(1, num.gens)
    mg = tuple(min(x, y) for x, y in zip(num.monomial_gcd(), den.monomial_gcd()))
    if any(mg):
        num, den = num.shift(mg, -1), den.shift(mg, -1)
    c = den.content()
    if den.leading_coeff() < 0:
        c = -c
    if c != 1:
        inv = 1 / c
        num, den = num.scale(inv), den.scale(inv)
    return num, den


def _reduce(num: Poly, den: Poly) -> tuple[Poly, Poly]:
    num, den = _cheap(num, den)
    if num.is_zero() or den.is_const():
        return num, den
    gens = num.gens
    used = num.variables() | den.variables()
    if len(used) == 1:
        (v,) = used
        g = ugcd(num.univariate_coeffs(v), den.univariate_coeffs(v))
        if len(g) > 1:
            gp = Poly.from_univariate(g, v, gens)
            num, den = num.divexact(gp), den.divexact(gp)
        return _cheap(num, den)
    changed = False
    for f in _factor_base(gens):
        if not (f.variables() <= den.variables()):
            continue
        if f.degree() > den.degree():
            continue
        while True:
            qd, rd = den.divmod_lex(f)
            if not rd.is_zero():
                break
            qn, rn = num.divmod_lex(f)
            if not rn.is_zero():
                break
            num, den = qn, qd
            changed = True
            if den.is_const():
                break
        if den.is_const():
            break
    return _cheap(num, den) if changed else (num, den)


# parsing --------------------------------------------------------------------

def parse_ratfunc(text: str, gens: tuple[str, ...] = GENS) -> RatFunc:
    """Parse an arithmetic expression in the generators into a RatFunc.

    Accepts integers, the generator names, ``+ - * /``, ``^`` or ``**`` with
    integer exponents, and parentheses.
    """
    return _eval_expr(text, lambda name: RatFunc.gen(name, gens) if name in gens else None,
                      lambda c: RatFunc.const(c, gens))


def _eval_expr(text: str, lookup, const, call=None):
    src = " ".join(text.replace("^", "**").replace("−", "-").split())
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"cannot parse expression {text!r}: {exc.msg}") from None

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return const(node.value)
        if isinstance(node, ast.Name):
            v = lookup(node.id)
            if v is None:
                raise ValueError(f"unknown symbol {node.id!r} in {text!r}")
            return v
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                if not (isinstance(node.right, ast.Constant) and isinstance(node.right.value, int)):
                    ex = node.right
                    if isinstance(ex, ast.UnaryOp) and isinstance(ex.op, ast.USub) \
                            and isinstance(ex.operand, ast.Constant):
                        return ev(node.left) ** (-ex.operand.value)
                    raise ValueError(f"non-integer exponent in {text!r}")
                return ev(node.left) ** node.right.value
            a, b = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Add):
                return a + b
            if isinstance(node.op, ast.Sub):
                return a - b
            if isinstance(node.op, ast.Mult):
                return a * b
            if isinstance(node.op, ast.Div):
                return a / b
        if isinstance(node, ast.Call) and call is not None and isinstance(node.func, ast.Name):
            args = []
            for arg in node.args:
                if not (isinstance(arg, ast.Constant) and isinstance(arg.value, int)):
                    raise ValueError(f"call arguments must be integers in {text!r}")
                args.append(arg.value)
            return call(node.func.id, args)
        raise ValueError(f"unsupported syntax in {text!r}")

    return ev(tree)

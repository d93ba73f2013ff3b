"""Sparse multivariate polynomials over the rationals.

A :class:`Poly` is a dictionary from exponent tuples to nonzero ``Fraction``
coefficients, tied to an ordered tuple of generator names.  The default ring
is Q[t1, t2, q]; other generator tuples are used for the ``m`` variable of the
degree-0 identities and for tests.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping

GENS: tuple[str, ...] = ("t1", "t2", "q")

Rat = Fraction


def as_rat(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot coerce {type(x).__name__} to a rational")


def _lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


class Poly:
    __slots__ = ("gens", "terms")

    def __init__(self, terms: Mapping[tuple[int, ...], object] | None = None,
                 gens: tuple[str, ...] = GENS):
        self.gens = gens
        clean: dict[tuple[int, ...], Fraction] = {}
        if terms:
            for e, c in terms.items():
                c = as_rat(c)
                if c:
                    clean[tuple(e)] = c
        self.terms = clean

    @classmethod
    def _raw(cls, terms: dict, gens: tuple[str, ...]) -> "Poly":
        p = object.__new__(cls)
        p.gens = gens
        p.terms = terms
        return p

    @classmethod
    def const(cls, c, gens: tuple[str, ...] = GENS) -> "Poly":
        c = as_rat(c)
        return cls._raw({(0,) * len(gens): c} if c else {}, gens)

    @classmethod
    def gen(cls, name: str, gens: tuple[str, ...] = GENS) -> "Poly":
        e = [0] * len(gens)
        e[gens.index(name)] = 1
        return cls._raw({tuple(e): Fraction(1)}, gens)

    @classmethod
    def from_univariate(cls, coeffs: Iterable, var: str = "q",
                        gens: tuple[str, ...] = GENS) -> "Poly":
        k = gens.index(var)
        out = {}
        for i, c in enumerate(coeffs):
            c = as_rat(c)
            if c:
                e = [0] * len(gens)
                e[k] = i
                out[tuple(e)] = c
        return cls._raw(out, gens)

    # basic queries ----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_const(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def const_value(self) -> Fraction:
        if not self.is_const():
            raise ValueError("polynomial is not constant")
        return next(iter(self.terms.values())) if self.terms else Fraction(0)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * len(self.gens), Fraction(0))

    def degree(self, var: str | None = None) -> int:
        if not self.terms:
            return -1
        if var is None:
            return max(sum(e) for e in self.terms)
        k = self.gens.index(var)
        return max(e[k] for e in self.terms)

    def min_degree(self, var: str) -> int:
        k = self.gens.index(var)
        return min(e[k] for e in self.terms) if self.terms else 0

    def variables(self) -> set[str]:
        used = set()
        for e in self.terms:
            for name, a in zip(self.gens, e):
                if a:
                    used.add(name)
        return used

    def free_of(self, *names: str) -> bool:
        idx = [self.gens.index(v) for v in names if v in self.gens]
        return all(e[k] == 0 for e in self.terms for k in idx)

    # arithmetic -------------------------------------------------------------
    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.gens != self.gens:
                raise ValueError(f"generator mismatch {self.gens} vs {other.gens}")
            return other
        return Poly.const(other, self.gens)

    def __add__(self, other) -> "Poly":
        if not isinstance(other, (Poly, int, Fraction)):
            return NotImplemented
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e)
            if v is None:
                out[e] = c
            else:
                v += c
                if v:
                    out[e] = v
                else:
                    del out[e]
        return Poly._raw(out, self.gens)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._raw({e: -c for e, c in self.terms.items()}, self.gens)

    def __sub__(self, other) -> "Poly":
        if not isinstance(other, (Poly, int, Fraction)):
            return NotImplemented
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Poly":
        return self._coerce(other) - self

    def scale(self, c) -> "Poly":
        c = as_rat(c)
        if not c:
            return Poly._raw({}, self.gens)
        return Poly._raw({e: v * c for e, v in self.terms.items()}, self.gens)

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, Poly):
            return NotImplemented
        other = self._coerce(other)
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        if len(b) == 1:
            (eb, cb), = b.items()
            return Poly._raw({tuple(x + y for x, y in zip(ea, eb)): ca * cb
                              for ea, ca in a.items()}, self.gens)
        if len(a) * len(b) > _PACK_THRESHOLD:
            return Poly._raw(_packed_mul(a, b, len(self.gens)), self.gens)
        out: dict[tuple[int, ...], Fraction] = {}
        get = out.get
        for eb, cb in b.items():
            for ea, ca in a.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                out[e] = get(e, 0) + ca * cb
        return Poly._raw({e: c for e, c in out.items() if c}, self.gens)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result = Poly.const(1, self.gens)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __truediv__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            return self.scale(Fraction(1) / as_rat(other))
        return NotImplemented

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other, self.gens)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.gens == other.gens and self.terms == other.terms

    def __hash__(self):
        return hash((self.gens, frozenset(self.terms.items())))

    # division ---------------------------------------------------------------
    def _lead(self, order: tuple[int, ...]) -> tuple[tuple[int, ...], Fraction]:
        e = max(self.terms, key=lambda x: tuple(x[k] for k in order))
        return e, self.terms[e]

    def divmod_lex(self, other: "Poly") -> tuple["Poly", "Poly"]:
        """Multivariate division by a single divisor in lex order.

        The remainder is zero exactly when ``other`` divides ``self``.
        """
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        order = tuple(range(len(self.gens) - 1, -1, -1))
        eb, cb = other._lead(order)
        rem = dict(self.terms)
        quot: dict[tuple[int, ...], Fraction] = {}
        remainder: dict[tuple[int, ...], Fraction] = {}
        key = lambda x: tuple(x[k] for k in order)
        while rem:
            ea = max(rem, key=key)
            ca = rem[ea]
            if all(x >= y for x, y in zip(ea, eb)):
                es = tuple(x - y for x, y in zip(ea, eb))
                cs = ca / cb
                quot[es] = quot.get(es, 0) + cs
                for e, c in other.terms.items():
                    t = tuple(x + y for x, y in zip(e, es))
                    v = rem.get(t, 0) - c * cs
                    if v:
                        rem[t] = v
                    else:
                        rem.pop(t, None)
            else:
                remainder[ea] = ca
                del rem[ea]
        return Poly(quot, self.gens), Poly._raw(remainder, self.gens)

    def divexact(self, other: "Poly") -> "Poly":
        q, r = self.divmod_lex(other)
        if not r.is_zero():
            raise ArithmeticError("inexact polynomial division")
        return q

    def divides(self, other: "Poly") -> bool:
        """True when self divides other."""
        return other.divmod_lex(self)[1].is_zero()

    # evaluation and structure -----------------------------------------------
    def subs(self, values: Mapping[str, object]) -> "Poly":
        """Substitute rational values for some generators (same ring)."""
        idx = {self.gens.index(k): as_rat(v) for k, v in values.items() if k in self.gens}
        out: dict[tuple[int, ...], Fraction] = {}
        for e, c in self.terms.items():
            e2 = list(e)
            for k, v in idx.items():
                if e[k]:
                    c = c * v ** e[k]
                    e2[k] = 0
            t = tuple(e2)
            out[t] = out.get(t, 0) + c
        return Poly(out, self.gens)

    def evaluate(self, values: Mapping[str, object]) -> Fraction:
        p = self.subs(values)
        if not p.is_const():
            raise ValueError(f"unassigned variables {sorted(p.variables())}")
        return p.const_value()

    def collect(self, var: str) -> dict[int, "Poly"]:
        """Coefficients with respect to one generator."""
        k = self.gens.index(var)
        out: dict[int, dict] = {}
        for e, c in self.terms.items():
            e2 = e[:k] + (0,) + e[k + 1:]
            out.setdefault(e[k], {})[e2] = c
        return {d: Poly._raw(t, self.gens) for d, t in out.items()}

    def univariate_coeffs(self, var: str = "q") -> list[Fraction]:
        if not self.free_of(*[g for g in self.gens if g != var]):
            raise ValueError("polynomial is not univariate in " + var)
        k = self.gens.index(var)
        out = [Fraction(0)] * (self.degree(var) + 1 if self.terms else 0)
        for e, c in self.terms.items():
            out[e[k]] = c
        return out

    def diff(self, var: str) -> "Poly":
        k = self.gens.index(var)
        out = {}
        for e, c in self.terms.items():
            if e[k]:
                out[e[:k] + (e[k] - 1,) + e[k + 1:]] = c * e[k]
        return Poly._raw(out, self.gens)

    def content(self) -> Fraction:
        """Positive rational c with self/c having coprime integer coefficients."""
        if not self.terms:
            return Fraction(0)
        num = 0
        den = 1
        for c in self.terms.values():
            num = gcd(num, c.numerator)
            den = _lcm(den, c.denominator)
        return Fraction(num, den)

    def monomial_gcd(self) -> tuple[int, ...]:
        if not self.terms:
            return (0,) * len(self.gens)
        return tuple(min(e[k] for e in self.terms) for k in range(len(self.gens)))

    def shift(self, e: tuple[int, ...], sign: int = 1) -> "Poly":
        return Poly._raw({tuple(x + sign * y for x, y in zip(k, e)): c
                          for k, c in self.terms.items()}, self.gens)

    def swap(self, a: str, b: str) -> "Poly":
        i, j = self.gens.index(a), self.gens.index(b)
        out = {}
        for e, c in self.terms.items():
            e2 = list(e)
            e2[i], e2[j] = e[j], e[i]
            out[tuple(e2)] = c
        return Poly._raw(out, self.gens)

    def leading_coeff(self) -> Fraction:
        """Coefficient of the largest monomial in the display order."""
        return self.terms[max(self.terms, key=self._display_key_rev)] if self.terms else Fraction(0)

    def _display_key(self, e: tuple[int, ...]):
        # ascending in the last generator, then degree-lex (descending) in the rest
        head = e[:-1]
        return (e[-1], -sum(head), tuple(-x for x in head))

    def _display_key_rev(self, e):
        head = e[:-1]
        return (e[-1], sum(head), head)

    # rendering --------------------------------------------------------------
    def __str__(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for e in sorted(self.terms, key=self._display_key):
            c = self.terms[e]
            mono = "*".join(n if a == 1 else f"{n}^{a}" for n, a in zip(self.gens, e) if a)
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if not mono:
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            pieces.append((sign, body))
        out = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
        for sign, body in pieces[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self) -> str:
        return f"Poly({self})"


_PACK_THRESHOLD = 400
_PACK_BITS = 24


def _packed_mul(a: dict, b: dict, k: int) -> dict:
    """Product of two term dicts with exponent vectors packed into single ints
    (Kronecker substitution); integral coefficients are multiplied as ints."""
    shifts = [_PACK_BITS * i for i in range(k)]

    def pack(terms):
        out = []
        for e, c in terms.items():
            key = 0
            for x, sh in zip(e, shifts):
                key |= x << sh
            if c.denominator == 1:
                c = c.numerator
            out.append((key, c))
        return out

    pa, pb = pack(a), pack(b)
    acc: dict[int, object] = {}
    get = acc.get
    for kb, cb in pb:
        for ka, ca in pa:
            key = ka + kb
            acc[key] = get(key, 0) + ca * cb
    mask = (1 << _PACK_BITS) - 1
    out = {}
    for key, c in acc.items():
        if c:
            out[tuple((key >> sh) & mask for sh in shifts)] = Fraction(c)
    return out


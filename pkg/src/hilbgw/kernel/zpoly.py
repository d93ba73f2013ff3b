"""Dense univariate integer polynomials, the fast ring for specialized runs.

With t1, t2 fixed to rationals and the matrix scaled to integer entries, all
fraction-free linear algebra happens in Z[q].  Products use Kronecker packing
into one big integer; exact quotients use schoolbook division, which is exact
over Z whenever the quotient lies in Z[q] (always the case for Bareiss minors).
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from .series import _pack, _unpack


class ZPoly:
    __slots__ = ("c",)

    def __init__(self, coeffs=()):
        c = [int(x) for x in coeffs]
        while c and not c[-1]:
            c.pop()
        self.c = c

    @classmethod
    def _raw(cls, c: list[int]) -> "ZPoly":
        while c and not c[-1]:
            c.pop()
        p = object.__new__(cls)
        p.c = c
        return p

    @classmethod
    def const(cls, k: int) -> "ZPoly":
        return cls._raw([k])

    def is_zero(self) -> bool:
        return not self.c

    def degree(self) -> int:
        return len(self.c) - 1

    def __add__(self, other: "ZPoly") -> "ZPoly":
        a, b = self.c, other.c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, x in enumerate(b):
            out[i] += x
        return ZPoly._raw(out)

    def __sub__(self, other: "ZPoly") -> "ZPoly":
        a, b = self.c, other.c
        out = list(a) + [0] * max(0, len(b) - len(a))
        for i, x in enumerate(b):
            out[i] -= x
        return ZPoly._raw(out)

    def __neg__(self) -> "ZPoly":
        return ZPoly._raw([-x for x in self.c])

    def __mul__(self, other) -> "ZPoly":
        if isinstance(other, int):
            return ZPoly._raw([x * other for x in self.c]) if other else ZPoly._raw([])
        a, b = self.c, other.c
        if not a or not b:
            return ZPoly._raw([])
        if min(len(a), len(b)) < 8:
            out = [0] * (len(a) + len(b) - 1)
            for i, x in enumerate(a):
                if x:
                    for j, y in enumerate(b):
                        out[i + j] += x * y
            return ZPoly._raw(out)
        ma = max(abs(x) for x in a)
        mb = max(abs(x) for x in b)
        slot = ma.bit_length() + mb.bit_length() + min(len(a), len(b)).bit_length() + 2
        return ZPoly._raw(_unpack(_pack(a, slot) * _pack(b, slot), slot, len(a) + len(b) - 1))

    __rmul__ = __mul__

    def divexact(self, other: "ZPoly") -> "ZPoly":
        b = other.c
        if not b:
            raise ZeroDivisionError("division by the zero polynomial")
        a = list(self.c)
        if not a:
            return ZPoly._raw([])
        db = len(b) - 1
        if len(a) - 1 < db:
            raise ArithmeticError("inexact polynomial division")
        lc = b[-1]
        if db == 0:
            out = []
            for x in a:
                qv, r = divmod(x, lc)
                if r:
                    raise ArithmeticError("inexact polynomial division")
                out.append(qv)
            return ZPoly._raw(out)
        q = [0] * (len(a) - db)
        for i in range(len(a) - 1, db - 1, -1):
            x = a[i]
            if x:
                qv, r = divmod(x, lc)
                if r:
                    raise ArithmeticError("inexact polynomial division")
                q[i - db] = qv
                base = i - db
                for j in range(db + 1):
                    a[base + j] -= qv * b[j]
        if any(a[:db]):
            raise ArithmeticError("inexact polynomial division")
        return ZPoly._raw(q)

    def content(self) -> int:
        g = 0
        for x in self.c:
            g = gcd(g, x)
        return g

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = ZPoly.const(other)
        if not isinstance(other, ZPoly):
            return NotImplemented
        return self.c == other.c

    __hash__ = None

    def evaluate(self, x):
        acc = 0
        for c in reversed(self.c):
            acc = acc * x + c
        return acc

    def to_fractions(self) -> list[Fraction]:
        return [Fraction(x) for x in self.c]

    def __repr__(self) -> str:
        return f"ZPoly({self.c})"

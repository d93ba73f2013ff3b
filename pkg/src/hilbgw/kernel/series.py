"""Truncated power series and truncated Laurent series in u.

A :class:`TruncSeries` stores coefficients 0..order of a series in one formal
variable.  Coefficients past ``order`` are unknown, so binary operations keep
the smaller order and nothing ever extends precision on its own.

Rational-coefficient products go through integer convolution on a common
denominator (with Kronecker packing for long series); other coefficient rings
(RatFunc, Poly) use the generic loop.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Callable, Iterable, Sequence


def _is_rat(x) -> bool:
    return isinstance(x, (int, Fraction))


def _pack(a: Sequence[int], slot: int) -> int:
    v = 0
    for c in reversed(a):
        v = (v << slot) + c
    return v


def _unpack(v: int, slot: int, count: int) -> list[int]:
    out = []
    mask = (1 << slot) - 1
    half = 1 << (slot - 1)
    full = 1 << slot
    for _ in range(count):
        c = v & mask
        if c >= half:
            c -= full
        out.append(c)
        v = (v - c) >> slot
    return out


def int_convolve(a: Sequence[int], b: Sequence[int], n: int) -> list[int]:
    """First n coefficients of the product of two integer coefficient lists."""
    a = a[:n]
    b = b[:n]
    if not a or not b:
        return [0] * n
    if min(len(a), len(b)) < 12:
        out = [0] * n
        for i, x in enumerate(a):
            if x:
                lim = min(len(b), n - i)
                for j in range(lim):
                    out[i + j] += x * b[j]
        return out
    ma = max(abs(x) for x in a)
    mb = max(abs(x) for x in b)
    if not ma or not mb:
        return [0] * n
    slot = ma.bit_length() + mb.bit_length() + min(len(a), len(b)).bit_length() + 2
    prod = _pack(a, slot) * _pack(b, slot)
    out = _unpack(prod, slot, min(n, len(a) + len(b) - 1))
    out += [0] * (n - len(out))
    return out


def _common(a: Sequence) -> tuple[list[int], int]:
    d = 1
    for c in a:
        if isinstance(c, Fraction):
            den = c.denominator
            if den != 1:
                d = d // gcd(d, den) * den
    return [int(c * d) if isinstance(c, int) else c.numerator * (d // c.denominator) for c in a], d


def rat_convolve(a: Sequence, b: Sequence, n: int) -> list[Fraction]:
    ia, da = _common(a[:n])
    ib, db = _common(b[:n])
    d = da * db
    return [Fraction(c, d) for c in int_convolve(ia, ib, n)]


class TruncSeries:
    __slots__ = ("coeffs", "order", "var")

    def __init__(self, coeffs: Iterable, order: int | None = None, var: str = "Q"):
        cs = list(coeffs)
        if order is None:
            order = len(cs) - 1
        if order < 0:
            raise ValueError("truncation order must be nonnegative")
        zero = Fraction(0)
        if len(cs) > order + 1:
            cs = cs[:order + 1]
        else:
            if cs and not _is_rat(cs[0]):
                zero = cs[0] * 0
            cs += [zero] * (order + 1 - len(cs))
        self.coeffs = tuple(Fraction(c) if isinstance(c, int) else c for c in cs)
        self.order = order
        self.var = var

    @classmethod
    def one(cls, order: int, var: str = "Q") -> "TruncSeries":
        return cls([Fraction(1)], order, var)

    @classmethod
    def monomial(cls, k: int, order: int, c=1, var: str = "Q") -> "TruncSeries":
        cs = [Fraction(0)] * (order + 1)
        if k <= order:
            cs[k] = c if not isinstance(c, int) else Fraction(c)
        return cls(cs, order, var)

    def __getitem__(self, k: int):
        if k < 0:
            return Fraction(0)
        if k > self.order:
            raise IndexError(f"coefficient {k} is beyond the truncation order {self.order}")
        return self.coeffs[k]

    def __len__(self) -> int:
        return self.order + 1

    def _check(self, other: "TruncSeries") -> int:
        if other.var != self.var:
            raise ValueError(f"series variables differ: {self.var} vs {other.var}")
        return min(self.order, other.order)

    def truncate(self, order: int) -> "TruncSeries":
        if order > self.order:
            raise ValueError("cannot extend truncation order")
        return TruncSeries(self.coeffs[:order + 1], order, self.var)

    def __add__(self, other) -> "TruncSeries":
        if isinstance(other, TruncSeries):
            n = self._check(other)
            return TruncSeries([a + b for a, b in zip(self.coeffs[:n + 1], other.coeffs)], n, self.var)
        cs = list(self.coeffs)
        cs[0] = cs[0] + other
        return TruncSeries(cs, self.order, self.var)

    __radd__ = __add__

    def __neg__(self) -> "TruncSeries":
        return TruncSeries([-c for c in self.coeffs], self.order, self.var)

    def __sub__(self, other) -> "TruncSeries":
        return self + (-other)

    def __rsub__(self, other) -> "TruncSeries":
        return (-self) + other

    def scale(self, c) -> "TruncSeries":
        return TruncSeries([x * c for x in self.coeffs], self.order, self.var)

    def __mul__(self, other) -> "TruncSeries":
        if not isinstance(other, TruncSeries):
            if isinstance(other, ULaurent):
                return NotImplemented
            return self.scale(other)
        n = self._check(other)
        return TruncSeries(series_convolve(self.coeffs, other.coeffs, n + 1), n, self.var)

    def __rmul__(self, other) -> "TruncSeries":
        return self.scale(other)

    def inverse(self) -> "TruncSeries":
        a = self.coeffs
        if a[0] == 0:
            raise ZeroDivisionError("series with zero constant term is not invertible")
        inv0 = 1 / a[0]
        if all(_is_rat(c) for c in a):
            return self._rat_inverse()
        b = [inv0]
        for k in range(1, self.order + 1):
            s = a[1] * b[k - 1]
            for j in range(2, k + 1):
                s = s + a[j] * b[k - j]
            b.append(-s * inv0)
        return TruncSeries(b, self.order, self.var)

    def _rat_inverse(self) -> "TruncSeries":
        # Newton iteration b <- b(2 - a b), doubling precision
        a = self.coeffs
        b = [Fraction(1) / a[0]]
        prec = 1
        n = self.order + 1
        while prec < n:
            prec = min(2 * prec, n)
            ab = rat_convolve(a[:prec], b, prec)
            ab = [-c for c in ab]
            ab[0] += 2
            b = rat_convolve(b, ab, prec)
        return TruncSeries(b, self.order, self.var)

    def __truediv__(self, other) -> "TruncSeries":
        if isinstance(other, TruncSeries):
            return self * other.inverse()
        return self.scale(1 / Fraction(other) if isinstance(other, int) else 1 / other)

    def __rtruediv__(self, other) -> "TruncSeries":
        return self.inverse().scale(other)

    def __pow__(self, k: int) -> "TruncSeries":
        if k < 0:
            return self.inverse() ** (-k)
        result = TruncSeries.one(self.order, self.var)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, TruncSeries):
            n = min(self.order, other.order)
            return self.var == other.var and all(
                _eq(a, b) for a, b in zip(self.coeffs[:n + 1], other.coeffs[:n + 1]))
        return NotImplemented

    __hash__ = None

    def is_zero(self) -> bool:
        return all(_is_zero(c) for c in self.coeffs)

    def valuation(self) -> int | None:
        """Index of the first nonzero coefficient, None if all known ones vanish."""
        for k, c in enumerate(self.coeffs):
            if not _is_zero(c):
                return k
        return None

    def shift_down(self, v: int) -> "TruncSeries":
        """Divide by var^v; the caller guarantees the low coefficients vanish."""
        if v > self.order:
            raise ValueError("shift exceeds known precision")
        if any(not _is_zero(c) for c in self.coeffs[:v]):
            raise ValueError("series is not divisible by the requested power")
        return TruncSeries(self.coeffs[v:], self.order - v, self.var)

    def shift_up(self, v: int) -> "TruncSeries":
        """Multiply by var^v (the order grows by v since the low part is exact)."""
        return TruncSeries([self.coeffs[0] * 0] * v + list(self.coeffs), self.order + v, self.var)

    def theta(self) -> "TruncSeries":
        """var * d/dvar."""
        return TruncSeries([c * k for k, c in enumerate(self.coeffs)], self.order, self.var)

    def map(self, f: Callable) -> "TruncSeries":
        return TruncSeries([f(c) for c in self.coeffs], self.order, self.var)

    def __repr__(self) -> str:
        terms = ", ".join(str(c) for c in self.coeffs)
        return f"TruncSeries([{terms}], order={self.order}, var={self.var!r})"


def _is_zero(c) -> bool:
    if _is_rat(c):
        return c == 0
    return c.is_zero()


def _eq(a, b) -> bool:
    if _is_rat(a) and _is_rat(b):
        return a == b
    return _is_zero(a - b)


def series_convolve(a: Sequence, b: Sequence, n: int) -> list:
    if all(_is_rat(c) for c in a) and all(_is_rat(c) for c in b):
        return rat_convolve(a, b, n)
    out = []
    for k in range(n):
        s = None
        for j in range(max(0, k - len(b) + 1), min(k, len(a) - 1) + 1):
            x = a[j]
            if _is_rat(x) and x == 0:
                continue
            t = x * b[k - j]
            s = t if s is None else s + t
        if s is None:
            s = a[0] * 0
        out.append(s)
    return out


def series_log(s: TruncSeries) -> TruncSeries:
    """Formal logarithm of a series with constant term 1."""
    if not _eq(s.coeffs[0], Fraction(1)):
        raise ValueError("series_log needs constant term 1")
    # log s = integral of s'/s
    ds = TruncSeries([s.coeffs[k + 1] * (k + 1) for k in range(s.order)] or [Fraction(0)],
                     max(s.order - 1, 0), s.var)
    if s.order == 0:
        return TruncSeries([Fraction(0)], 0, s.var)
    quot = ds * s.truncate(s.order - 1).inverse()
    zero = s.coeffs[0] * 0
    return TruncSeries([zero] + [quot.coeffs[k] / (k + 1) if _is_rat(quot.coeffs[k])
                                 else quot.coeffs[k] * Fraction(1, k + 1)
                                 for k in range(s.order)], s.order, s.var)


def series_exp(s: TruncSeries) -> TruncSeries:
    """Formal exponential of a series with zero constant term."""
    if not _is_zero(s.coeffs[0]):
        raise ValueError("series_exp needs constant term 0")
    a = s.coeffs
    n = s.order
    rat = all(_is_rat(c) for c in a)
    one = Fraction(1) if rat else a[0] * 0 + 1
    e = [one]
    ja = [a[j] * j for j in range(n + 1)]
    for k in range(1, n + 1):
        acc = None
        for j in range(1, k + 1):
            x = ja[j]
            if rat and x == 0:
                continue
            t = x * e[k - j]
            acc = t if acc is None else acc + t
        if acc is None:
            acc = one * 0
        e.append(acc / k if rat else acc * Fraction(1, k))
    return TruncSeries(e, n, s.var)


def series_mul(a: TruncSeries, b: TruncSeries) -> TruncSeries:
    return a * b


def series_pow_with_symbolic_exponent(base: TruncSeries, exponent) -> TruncSeries:
    """base**exponent computed as exp(exponent * log(base))."""
    lg = series_log(base)
    return series_exp(lg.map(lambda c: c * exponent))


class ULaurent:
    """Truncated Laurent series in u with TruncSeries coefficients in Q.

    ``coeffs[i]`` is the coefficient of ``u**(low + i)``; exponents above
    ``u_order`` are unknown.
    """

    __slots__ = ("low", "coeffs", "u_order")

    LOW_FLOOR = -3

    def __init__(self, low: int, coeffs: Sequence[TruncSeries], u_order: int | None = None):
        if low < self.LOW_FLOOR:
            raise ValueError(f"lowest u-exponent {low} is below the floor {self.LOW_FLOOR}")
        cs = list(coeffs)
        if u_order is None:
            u_order = low + len(cs) - 1
        if u_order < low - 1:
            raise ValueError("u_order below the lowest exponent")
        if len(cs) > u_order - low + 1:
            cs = cs[:u_order - low + 1]
        self.low = low
        self.coeffs = cs
        self.u_order = u_order
        if len(cs) < u_order - low + 1:
            if not cs:
                raise ValueError("cannot pad an empty ULaurent without a Q-order")
            pad = TruncSeries([], cs[0].order, cs[0].var)
            self.coeffs = cs + [pad] * (u_order - low + 1 - len(cs))

    @property
    def q_order(self) -> int:
        return min(c.order for c in self.coeffs)

    @classmethod
    def zero(cls, u_order: int, q_order: int, low: int = LOW_FLOOR) -> "ULaurent":
        z = TruncSeries([], q_order)
        return cls(low, [z] * (u_order - low + 1), u_order)

    def coefficient(self, e: int) -> TruncSeries:
        if e > self.u_order:
            raise IndexError(f"u-exponent {e} beyond truncation order {self.u_order}")
        if e < self.low:
            return TruncSeries([], self.q_order)
        return self.coeffs[e - self.low]

    def __add__(self, other: "ULaurent") -> "ULaurent":
        if not isinstance(other, ULaurent):
            return NotImplemented
        low = min(self.low, other.low)
        top = min(self.u_order, other.u_order)
        qo = min(self.q_order, other.q_order)
        cs = [self.coefficient(e).truncate(qo) + other.coefficient(e).truncate(qo)
              for e in range(low, top + 1)]
        return ULaurent(low, cs, top)

    def __neg__(self) -> "ULaurent":
        return ULaurent(self.low, [-c for c in self.coeffs], self.u_order)

    def __sub__(self, other: "ULaurent") -> "ULaurent":
        return self + (-other)

    def __mul__(self, other) -> "ULaurent":
        if isinstance(other, TruncSeries):
            return ULaurent(self.low, [c * other for c in self.coeffs], self.u_order)
        if isinstance(other, ULaurent):
            low = self.low + other.low
            # known exponents: every product term with both factors known
            top = min(self.u_order + other.low, other.u_order + self.low)
            qo = min(self.q_order, other.q_order)
            cs = []
            for e in range(low, top + 1):
                acc = TruncSeries([], qo)
                for i in range(self.low, self.u_order + 1):
                    j = e - i
                    if other.low <= j <= other.u_order:
                        acc = acc + self.coefficient(i) * other.coefficient(j)
                cs.append(acc)
            return ULaurent(low, cs, top)
        return ULaurent(self.low, [c.scale(other) for c in self.coeffs], self.u_order)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, ULaurent):
            return NotImplemented
        top = min(self.u_order, other.u_order)
        low = min(self.low, other.low)
        return all(self.coefficient(e) == other.coefficient(e) for e in range(low, top + 1))

    __hash__ = None

    def __repr__(self) -> str:
        return f"ULaurent(low={self.low}, u_order={self.u_order}, q_order={self.q_order})"

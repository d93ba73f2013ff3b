"""The u-side of the variable change -q = e^{iu}.

Everything happens on the basis c_r(q) = ((-q)^r + 1)/((-q)^r - 1), where
(-ir/2) c_r = -(r/2) cot(ru/2) has a real Laurent expansion in u.  No
complex numbers are ever formed: an expression sum_r a_r c_r is multiplied
by -i symbolically, via (-i) c_r = (2/r) * [(-ir/2) c_r].
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Mapping

from .combinatorics import bernoulli, degenerate_factor, partition_series, partitions, sigma
from .kernel import GENS, Poly, RatFunc, TruncSeries, ULaurent
from .kernel.linalg import solve_fractions
from .report import CheckReport


class CotBasisExpr:
    """const + sum_r coeffs[r] * c_r(q) with rational coefficients."""

    __slots__ = ("coeffs", "const")

    def __init__(self, coeffs: Mapping[int, Fraction] | None = None, const=0):
        cs = {}
        for r, a in (coeffs or {}).items():
            if r < 1:
                raise ValueError("cotangent basis index must be positive")
            a = Fraction(a)
            if a:
                cs[r] = a
        self.coeffs = dict(sorted(cs.items()))
        self.const = Fraction(const)

    def __add__(self, other: "CotBasisExpr") -> "CotBasisExpr":
        cs = dict(self.coeffs)
        for r, a in other.coeffs.items():
            cs[r] = cs.get(r, Fraction(0)) + a
        return CotBasisExpr(cs, self.const + other.const)

    def scale(self, c) -> "CotBasisExpr":
        c = Fraction(c)
        return CotBasisExpr({r: a * c for r, a in self.coeffs.items()}, self.const * c)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CotBasisExpr):
            return NotImplemented
        return self.coeffs == other.coeffs and self.const == other.const

    __hash__ = None

    def is_zero(self) -> bool:
        return not self.coeffs and not self.const

    def to_ratfunc(self, gens: tuple[str, ...] = GENS) -> RatFunc:
        from .hilb import cot_basis_ratfunc

        out = RatFunc.const(self.const, gens)
        for r, a in self.coeffs.items():
            out = out + cot_basis_ratfunc(r, gens) * RatFunc.const(a, gens)
        return out

    def at_q0(self) -> Fraction:
        # c_r(0) = -1 for every r
        return self.const - sum(self.coeffs.values(), Fraction(0))

    def u_expansion(self, u_order: int, q_order: int = 0, pole: bool = False) -> ULaurent:
        """Laurent expansion of (-i) * self in u."""
        if self.const:
            raise ValueError("(-i) times a nonzero constant has no real u-expansion")
        out = _constant_laurent({}, u_order, q_order)
        for r, a in self.coeffs.items():
            out = out + cot_expansion(r, u_order, q_order, pole) * (Fraction(2, r) * a)
        return out

    def __repr__(self) -> str:
        terms = [f"{a}*c{r}" for r, a in self.coeffs.items()]
        if self.const or not terms:
            terms.insert(0, str(self.const))
        return " + ".join(terms)

    @classmethod
    def from_ratfunc(cls, f: RatFunc, r_max: int) -> "CotBasisExpr":
        """Decompose a rational function of q alone over c_1..c_{r_max}.

        Raises ValueError when no such combination exists.
        """
        from .hilb import _common_den, _den_times_cot

        if not f.free_of(*(g for g in f.gens if g != "q")):
            raise ValueError("only rational functions of q have a cotangent decomposition")
        f = f.change_gens(GENS) if f.gens != GENS else f
        den = _common_den(r_max)
        target, rem = (f.num * den).divmod_lex(f.den)
        if not rem.is_zero():
            raise ValueError("denominator has poles outside the roots of (-q)^r = 1, r <= r_max")
        columns = [den.univariate_coeffs("q")] + [_den_times_cot(r_max, r).univariate_coeffs("q")
                                                  for r in range(1, r_max + 1)]
        rhs = target.univariate_coeffs("q")
        size = max([len(rhs)] + [len(c) for c in columns])
        pad = lambda v: list(v) + [Fraction(0)] * (size - len(v))
        cols = [pad(c) for c in columns]
        mat = [[cols[j][i] for j in range(len(cols))] for i in range(size)]
        sol = solve_fractions(mat, pad(rhs))
        if sol is None:
            raise ValueError("rational function is not a combination of cotangent basis functions")
        return cls({r: sol[r] for r in range(1, r_max + 1)}, sol[0])


def tr_cot_expr(n: int) -> CotBasisExpr:
    """Tr_n on the cotangent basis, read off partition by partition."""
    if n < 1:
        raise ValueError("n must be positive")
    cs: dict[int, Fraction] = {}
    for mu in partitions(n):
        for p in mu:
            cs[p] = cs.get(p, Fraction(0)) + Fraction(p * p, 2)
            cs[1] = cs.get(1, Fraction(0)) - Fraction(p, 2)
    return CotBasisExpr(cs)


def _constant_laurent(values: Mapping[int, Fraction], u_order: int, q_order: int,
                      low: int = -1) -> ULaurent:
    cs = [TruncSeries([values.get(e, Fraction(0))], q_order) for e in range(low, u_order + 1)]
    return ULaurent(low, cs, u_order)


def cot_expansion(r: int, u_order: int, q_order: int = 0, pole: bool = False) -> ULaurent:
    """Expansion of (-ir/2) c_r(q) under -q = e^{iu}.

    The function itself is -(r/2)cot(ru/2) = -1/u + sum_{h>=1} |B_2h| r^2h u^(2h-1)/(2h)!.
    With ``pole=False`` (the default) the u^-1 term is dropped: that is the
    form sum_{h>=0} ... - 1/u in which the h = 0 term cancels the pole.  The
    pole is the same for every r, so it cancels in any combination whose
    coefficients (weighted by 2/r) sum to zero, such as Tr_n.
    """
    if r < 1:
        raise ValueError("r must be positive")
    vals: dict[int, Fraction] = {}
    if pole:
        vals[-1] = Fraction(-1)
    h = 1
    while 2 * h - 1 <= u_order:
        vals[2 * h - 1] = abs(bernoulli(2 * h)) * Fraction(r) ** (2 * h) / factorial(2 * h)
        h += 1
    return _constant_laurent(vals, u_order, q_order)


def bseries(u_order: int, q_order: int) -> ULaurent:
    """B(u,Q) = sum_{g,m>=1} |B_{2g-2}|/(2g-2)! (sigma_{2g-1}(m) - sigma_1(m)) Q^m u^{2g-3}."""
    if u_order < -1 or q_order < 0:
        raise ValueError("orders out of range")
    cs = []
    for e in range(-1, u_order + 1):
        if e % 2 == 0:
            cs.append(TruncSeries([], q_order))
            continue
        g = (e + 3) // 2
        d = degenerate_factor(g)
        cs.append(TruncSeries([Fraction(0)] + [d * (sigma(2 * g - 1, m) - sigma(1, m))
                                               for m in range(1, q_order + 1)], q_order))
    return ULaurent(-1, cs, u_order)


def trace_u_expansion(n: int, u_order: int, q_order: int = 0, route: str = "partitions",
                      pole: bool = False) -> ULaurent:
    """u-expansion of (-i) Tr_n.

    ``route="partitions"`` reads the cotangent coefficients off the partition
    sum; ``route="decompose"`` recovers them from the rational function
    Tr_n by an exact linear solve.
    """
    if route == "partitions":
        expr = tr_cot_expr(n)
    elif route == "decompose":
        from .hilb import trn

        expr = CotBasisExpr.from_ratfunc(trn(n), n)
    else:
        raise ValueError(f"unknown route {route!r}")
    return expr.u_expansion(u_order, q_order, pole)


def trace_generating_laurent(n_max: int, u_order: int, pole: bool = False) -> ULaurent:
    """(-i) sum_{m=1}^{n_max} Tr_m Q^m as a Laurent series in u over Q-series."""
    rows: dict[int, list[Fraction]] = {e: [Fraction(0)] * (n_max + 1) for e in range(-1, u_order + 1)}
    for m in range(1, n_max + 1):
        lau = trace_u_expansion(m, u_order, 0, pole=pole)
        for e in range(-1, u_order + 1):
            rows[e][m] = lau.coefficient(e)[0]
    return ULaurent(-1, [TruncSeries(rows[e], n_max) for e in range(-1, u_order + 1)], u_order)


def lemma_trace_check(n_max: int, u_order: int, q_order: int | None = None) -> CheckReport:
    """(-i) sum Tr_m Q^m = P(Q) B(u,Q), coefficient by coefficient."""
    if n_max < 1:
        raise ValueError("n_max must be positive")
    q_order = n_max if q_order is None else min(q_order, n_max)
    rep = CheckReport("lemma34")
    lhs = trace_generating_laurent(n_max, u_order)
    rhs = bseries(u_order, n_max) * partition_series(n_max)
    for e in range(-1, u_order + 1):
        a, b = lhs.coefficient(e), rhs.coefficient(e)
        for m in range(q_order + 1):
            rep.record(a[m] == b[m], f"u^{e} Q^{m}: {a[m]} != {b[m]}")
    for m in range(q_order + 1):
        rep.record(lhs.coefficient(-1)[m] == 0, f"u^-1 Q^{m} on the trace side is nonzero")
    rep.notes.append(f"n_max={n_max}, u_order={u_order}")
    return rep

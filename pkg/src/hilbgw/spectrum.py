"""Eigenvalues of M_D as power series in q at a rational point (t1, t2).

Two independent lifts produce each eigenvalue: Newton iteration on the
characteristic polynomial, and an order-by-order eigenpair solve on a
bordered system, which also yields the eigenvector.  The Wronskian of the
eigenvalue series is then expanded until an exact nonzero coefficient
certifies det(W) != 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import count, permutations
from math import isqrt, lcm
from typing import Iterator, Sequence

from .combinatorics import Partition, partitions
from .hilb import OperatorMatrix, build_md, gram_diagonal, mult_operator, normalize_spec, trn
from .kernel import Poly, RatFunc, TruncSeries, series_exp, series_log
from .kernel.linalg import berkowitz
from .kernel.ratfunc import _trim, _udivmod
from .kernel.zpoly import ZPoly
from .report import CheckReport

DEFAULT_SPECIALIZATIONS = [(Fraction(1), Fraction(5)), (Fraction(2), Fraction(7)),
                           (Fraction(3), Fraction(11))]
GRAM_CONVENTION = "<mu|mu> = (-1)^(|mu|-l(mu)) / ((t1 t2)^l(mu) z(mu))"
Q_ORDER_CAP = 512


class SpecializationCollision(ValueError):
    """Candidate eigenvalues collide at this (t1, t2); pick another point."""


class StructuralDegeneracy(ValueError):
    """Two partitions have the same box-content sum for every (t1, t2), so M_D
    has a repeated eigenvalue at q = 0 whatever the specialization."""


class ConventionError(ArithmeticError):
    """Neither sign of the box-content candidates roots the q = 0 polynomial."""


def specialization_sequence() -> Iterator[tuple[Fraction, Fraction]]:
    """(1,5), (2,7), (3,11), then (k, k-th odd prime after 11), deterministically."""
    yield from DEFAULT_SPECIALIZATIONS
    primes = (p for p in count(13, 2) if all(p % d for d in range(3, int(p ** 0.5) + 1, 2)))
    for k, p in zip(count(4), primes):
        yield Fraction(k), Fraction(p)


def _spec(spec) -> tuple[Fraction, Fraction]:
    spec = normalize_spec(spec)
    if spec is None:
        raise ValueError("spectral computations need a rational specialization")
    return spec


# characteristic polynomial ----------------------------------------------------------

def charpoly(m: OperatorMatrix) -> list[RatFunc]:
    """Coefficients [1, c1, ..., cN] of det(x I - M), by division-free expansion."""
    k = m.dim
    if all(e.free_of("t1", "t2") for row in m.num for e in row) and m.den.free_of("t1", "t2"):
        # dense integer polynomials in q after clearing denominators
        d = 1
        for row in m.num:
            for e in row:
                for c in e.terms.values():
                    d = lcm(d, c.denominator)
        a = [[ZPoly(c * d for c in e.univariate_coeffs("q")) for e in row] for row in m.num]
        raw = berkowitz(a, zero=ZPoly.const(0), one=ZPoly.const(1))
        coeffs = [Poly.from_univariate(c.c, "q") for c in raw]
        scale = m.den.scale(d)
    else:
        raw = berkowitz(m.num, zero=Poly.const(0), one=Poly.const(1))
        coeffs, scale = raw, m.den
    out = []
    power = Poly.const(1)
    for i in range(k + 1):
        out.append(RatFunc(coeffs[i], power))
        power = power * scale
    return out


@lru_cache(maxsize=32)
def _charpoly_cached(n: int, spec: tuple[Fraction, Fraction]) -> tuple[RatFunc, ...]:
    return tuple(charpoly(build_md(n, spec, basis="power")))


def _series(f: RatFunc, order: int) -> TruncSeries:
    from .genus1 import qexp

    return qexp(f, order)


def charpoly_series(n: int, spec, q_order: int) -> list[TruncSeries]:
    """Characteristic-polynomial coefficients expanded in q."""
    return [_series(c, q_order) for c in _charpoly_cached(n, _spec(spec))]


def _poly_at(coeffs: Sequence, x):
    acc = coeffs[0] * 0 + coeffs[0]
    for c in coeffs[1:]:
        acc = acc * x + c
    return acc


# initial eigenvalues ------------------------------------------------------------------

def box_content_pair(lam: Partition) -> tuple[int, int]:
    """(A, B) with sum over boxes (i, j) of lam of i t1 + j t2 = A t1 + B t2."""
    return sum(r * (r - 1) // 2 for r in lam), sum(j * r for j, r in enumerate(lam))


def box_content_sum(lam: Partition, t1, t2) -> Fraction:
    """sum over boxes (i, j) of lam (0-indexed, i along rows) of i t1 + j t2."""
    a, b = box_content_pair(lam)
    return a * Fraction(t1) + b * Fraction(t2)


def structural_clusters(n: int) -> list[list[Partition]]:
    """Groups of partitions whose box-content sums agree for every (t1, t2)."""
    groups: dict[tuple[int, int], list[Partition]] = {}
    for lam in partitions(n):
        groups.setdefault(box_content_pair(lam), []).append(lam)
    return [g for g in groups.values() if len(g) > 1]


def _root_multiplicity(coeffs: Sequence[Fraction], x: Fraction) -> int:
    """Multiplicity of x as a root of the polynomial with descending coefficients."""
    k, cur = 0, list(coeffs)
    while len(cur) > 1 and _poly_at(cur, x) == 0:
        k += 1
        deg = len(cur) - 1
        cur = [c * (deg - i) for i, c in enumerate(cur[:-1])]
    return k


def initial_eigenvalues(n: int, spec, allow_clusters: bool = False) -> tuple[list[Fraction], int]:
    """Box-content candidates with the sign that roots the q = 0 polynomial.

    Returns (values in the order of partitions(n), sign).  Candidates that agree
    only at this (t1, t2) raise SpecializationCollision.  Candidates that agree
    identically in (t1, t2) raise StructuralDegeneracy unless ``allow_clusters``,
    in which case each is checked to be a root of exactly that multiplicity.
    """
    t1, t2 = _spec(spec)
    parts = partitions(n)
    cands = [box_content_sum(lam, t1, t2) for lam in parts]
    pairs = [box_content_pair(lam) for lam in parts]
    if len(set(cands)) != len(set(pairs)):
        raise SpecializationCollision(f"box-content values collide at t=({t1},{t2}) for n={n}")
    if len(set(pairs)) != len(pairs) and not allow_clusters:
        raise StructuralDegeneracy(f"box-content values coincide identically for n={n}: "
                                   f"{structural_clusters(n)}")
    p0 = [c.evaluate({"q": 0}) for c in _charpoly_cached(n, (t1, t2))]
    for sign in (1, -1):
        vals = [sign * c for c in cands]
        if all(_poly_at(p0, v) == 0 for v in vals):
            for v in set(vals):
                if _root_multiplicity(p0, v) != vals.count(v):
                    raise SpecializationCollision(f"root {v} has the wrong multiplicity")
            return vals, sign
    raise ConventionError(f"no sign makes the box-content values roots for n={n}")


# Newton lift on the characteristic polynomial --------------------------------------------

@dataclass
class EigenSeries:
    index: int
    label: Partition
    series: TruncSeries

    @property
    def initial(self) -> Fraction:
        return self.series[0]


def _newton(coeffs: list[TruncSeries], e0: Fraction, q_order: int) -> TruncSeries:
    deriv = [c.scale(len(coeffs) - 1 - i) for i, c in enumerate(coeffs[:-1])]
    e = TruncSeries([e0], 0, "q")
    prec = 0
    while prec < q_order:
        prec = min(2 * prec + 1, q_order)
        x = TruncSeries(list(e.coeffs), prec, "q")
        cs = [c.truncate(prec) for c in coeffs]
        ds = [c.truncate(prec) for c in deriv]
        val = _horner(cs, x)
        dv = _horner(ds, x)
        e = x - val * dv.inverse()
    return e


def _horner(cs: list[TruncSeries], x: TruncSeries) -> TruncSeries:
    acc = cs[0]
    for c in cs[1:]:
        acc = acc * x + c
    return acc


def newton_lift(n: int, spec, q_order: int) -> list[EigenSeries]:
    """All eigenvalues of M_D as series to q^q_order, by Newton iteration.

    Needs simple q = 0 eigenvalues; see lift_eigenvalues for the general case.
    """
    spec = _spec(spec)
    init, _ = initial_eigenvalues(n, spec)
    coeffs = charpoly_series(n, spec, q_order)
    return [EigenSeries(i, lam, _newton(coeffs, e0, q_order))
            for i, (lam, e0) in enumerate(zip(partitions(n), init))]


# repeated q = 0 eigenvalues -------------------------------------------------------------

def _upoly_mul(a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _upoly_sub(a: list, b: list) -> list:
    k = max(len(a), len(b))
    return _trim([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(k)])


def _bezout(a: list, b: list) -> tuple[list, list]:
    """(u, v) with u a + v b = 1 for coprime ascending polynomials a, b."""
    r0, r1 = _trim(list(a)), _trim(list(b))
    u0, u1, v0, v1 = [Fraction(1)], [], [], [Fraction(1)]
    while r1:
        quo, rem = _udivmod(r0, r1)
        quo = _trim(quo)
        r0, r1 = r1, _trim(rem)
        u0, u1 = u1, _upoly_sub(u0, _upoly_mul(quo, u1))
        v0, v1 = v1, _upoly_sub(v0, _upoly_mul(quo, v1))
    if len(r0) != 1:
        raise ArithmeticError("factors are not coprime")
    c = r0[0]
    return [x / c for x in u0], [x / c for x in v0]


def hensel_cluster(coeffs: list[TruncSeries], e0: Fraction, k: int) -> list[TruncSeries]:
    """Monic factor G(x, q) of the characteristic polynomial with G(x, 0) = (x - e0)^k.

    Linear Hensel lifting against the cofactor, which is coprime to G at q = 0.
    Returns the coefficients of G, ascending in x, as q-series (leading 1 omitted).
    """
    order = min(c.order for c in coeffs)
    deg = len(coeffs) - 1
    # layers[j] = coefficient of q^j as an ascending polynomial in x
    layers = [_trim([coeffs[deg - d][j] for d in range(deg + 1)]) for j in range(order + 1)]
    g0 = [Fraction(1)]
    for _ in range(k):
        g0 = _upoly_mul(g0, [-e0, Fraction(1)])
    h0, rem = _udivmod(list(layers[0]), g0)
    if any(rem):
        raise ArithmeticError(f"(x - {e0})^{k} does not divide the q = 0 polynomial")
    h0 = _trim(h0)
    _, v = _bezout(g0, h0)
    g, h = [g0], [h0]
    for j in range(1, order + 1):
        c = list(layers[j])
        for i in range(1, j):
            c = _upoly_sub(c, _upoly_mul(g[i], h[j - i]))
        gj = _trim(_udivmod(_upoly_mul(v, c), g0)[1])
        hj, rem = _udivmod(_upoly_sub(c, _upoly_mul(h0, gj)), g0)
        if any(rem):
            raise ArithmeticError("Hensel step left a remainder")
        g.append(gj)
        h.append(_trim(hj))
    return [TruncSeries([g[j][i] if i < len(g[j]) else 0 for j in range(order + 1)], order, "q")
            for i in range(k)]


def _rational_sqrt(x: Fraction) -> Fraction | None:
    if x < 0:
        return None
    a, b = isqrt(x.numerator), isqrt(x.denominator)
    return Fraction(a, b) if a * a == x.numerator and b * b == x.denominator else None


def _split_quadratic(a: TruncSeries, b: TruncSeries) -> tuple[TruncSeries, TruncSeries]:
    """Both roots of x^2 + a x + b in Q[[q]]; raises if they are not power series over Q."""
    disc = a * a - b.scale(4)
    v = disc.valuation()
    if v is None:
        raise ArithmeticError("discriminant vanishes to the working order; raise q_order")
    if v % 2:
        raise ArithmeticError("odd discriminant valuation: the roots are Puiseux series")
    r = _rational_sqrt(disc[v])
    if r is None:
        raise ArithmeticError(f"leading discriminant coefficient {disc[v]} is not a rational square")
    w = v // 2
    unit = disc.shift_down(v).scale(1 / (r * r))
    root = series_exp(series_log(unit).scale(Fraction(1, 2))).scale(r).shift_up(w)
    order = disc.order - w
    a = a.truncate(order)
    root = root.truncate(order)
    return (root - a).scale(Fraction(1, 2)), (-root - a).scale(Fraction(1, 2))


def lift_eigenvalues(n: int, spec, q_order: int, margin: int = 4) -> list[EigenSeries]:
    """Eigenvalue series of M_D to q^q_order, allowing structurally repeated q = 0 values.

    Simple values are lifted by Newton iteration.  A double value is lifted as a
    monic quadratic factor of the characteristic polynomial and split by its
    discriminant; which root carries which partition label is arbitrary.
    """
    spec = _spec(spec)
    init, _ = initial_eigenvalues(n, spec, allow_clusters=True)
    parts = partitions(n)
    work = q_order + margin
    coeffs = charpoly_series(n, spec, work)
    out: list[EigenSeries | None] = [None] * len(parts)
    for i, e0 in enumerate(init):
        if out[i] is not None:
            continue
        members = [j for j, x in enumerate(init) if x == e0]
        if len(members) == 1:
            out[i] = EigenSeries(i, parts[i], _newton(coeffs, e0, q_order))
            continue
        if len(members) != 2:
            raise NotImplementedError(f"cluster of size {len(members)} at e = {e0}")
        b, a = hensel_cluster(coeffs, e0, 2)
        roots = _split_quadratic(a, b)
        if roots[0].order < q_order:
            return lift_eigenvalues(n, spec, q_order, margin=2 * margin)
        for j, root in zip(members, roots):
            out[j] = EigenSeries(j, parts[j], root.truncate(q_order))
    return out


def residual_check(n: int, spec, q_order: int, eigen: list[EigenSeries] | None = None) -> CheckReport:
    """P(e_i(q), q) = 0 and e_i' P_x + P_q = 0 to the working order."""
    rep = CheckReport(f"residual n={n}")
    eigen = eigen or lift_eigenvalues(n, spec, q_order)
    coeffs = charpoly_series(n, spec, q_order)
    k = len(coeffs) - 1
    px = [c.scale(k - i) for i, c in enumerate(coeffs[:-1])]
    pq = [c.theta() for c in coeffs]
    for es in eigen:
        e = es.series.truncate(q_order)
        rep.record(_horner(coeffs, e).is_zero(), f"P(e_{es.index}) != 0")
        rep.record((e.theta() * _horner(px, e) + _horner(pq, e)).is_zero(),
                   f"theta e_{es.index} P_x + theta_q P != 0")
    return rep


def vieta_check(n: int, spec, q_order: int, eigen: list[EigenSeries] | None = None) -> CheckReport:
    """Elementary symmetric functions of the eigenvalues against the coefficients,
    plus the trace against (t1+t2) Tr_n."""
    rep = CheckReport(f"vieta n={n}")
    spec = _spec(spec)
    eigen = eigen or lift_eigenvalues(n, spec, q_order)
    coeffs = charpoly_series(n, spec, q_order)
    # e_k by the product prod (1 + e_i y), coefficient of y^k
    elem = [TruncSeries.one(q_order, "q")]
    for es in eigen:
        e = es.series.truncate(q_order)
        nxt = [elem[0]]
        for k in range(1, len(elem)):
            nxt.append(elem[k] + elem[k - 1] * e)
        nxt.append(elem[-1] * e)
        elem = nxt
    for k in range(1, len(coeffs)):
        rep.record(elem[k] == coeffs[k].scale((-1) ** k), f"e_{k}")
    trace = _series(trn(n) * (spec[0] + spec[1]), q_order)
    rep.record(elem[1] == trace, "sum of eigenvalues against (t1+t2) Tr_n")
    return rep


# eigenpairs on the bordered system ------------------------------------------------------

def _md_series(n: int, spec, q_order: int) -> list[list[TruncSeries]]:
    m = build_md(n, spec)
    return [[_series(m.entry(i, j), q_order) for j in range(m.dim)] for i in range(m.dim)]


def _inverse(a: list[list[Fraction]]) -> list[list[Fraction]]:
    k = len(a)
    rows = [list(r) + [Fraction(int(i == j)) for j in range(k)] for i, r in enumerate(a)]
    for c in range(k):
        piv = next((i for i in range(c, k) if rows[i][c]), None)
        if piv is None:
            raise ZeroDivisionError("bordered matrix is singular")
        rows[c], rows[piv] = rows[piv], rows[c]
        inv = 1 / rows[c][c]
        rows[c] = [x * inv for x in rows[c]]
        for i in range(k):
            if i != c and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[c])]
    return [r[k:] for r in rows]


def _kernel_vector(a: list[list[Fraction]]) -> list[Fraction]:
    """A nonzero vector spanning the (one-dimensional) kernel of a."""
    k = len(a)
    rows = [list(r) for r in a]
    pivots = []
    r = 0
    for c in range(k):
        piv = next((i for i in range(r, k) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(k):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(k) if c not in pivots]
    if len(free) != 1:
        raise ArithmeticError(f"eigenspace has dimension {len(free)}, expected 1")
    f = free[0]
    v = [Fraction(0)] * k
    v[f] = Fraction(1)
    for i, c in enumerate(pivots):
        v[c] = -rows[i][f]
    return v


@dataclass
class EigenPair:
    index: int
    label: Partition
    value: TruncSeries
    vector: list[TruncSeries]
    anchor: int = field(default=0)


def eigenpair_lift(n: int, spec, q_order: int) -> list[EigenPair]:
    """Eigenvalue and eigenvector series of M_D (normalized basis), order by order.

    At order k the unknowns (v_k, e_k) solve the bordered system
        (M_0 - e_0) v_k - e_k v_0 = -sum_{j>=1} M_j v_{k-j} + sum_{1<=j<k} e_j v_{k-j},
        v_k[anchor] = 0,
    whose matrix is invertible because e_0 is a simple eigenvalue.
    """
    spec = _spec(spec)
    init, _ = initial_eigenvalues(n, spec)
    ms = _md_series(n, spec, q_order)
    dim = len(ms)
    mk = [[[ms[i][j][k] for j in range(dim)] for i in range(dim)] for k in range(q_order + 1)]
    out = []
    for idx, (lam, e0) in enumerate(zip(partitions(n), init)):
        a0 = [[mk[0][i][j] - (e0 if i == j else 0) for j in range(dim)] for i in range(dim)]
        v0 = _kernel_vector(a0)
        anchor = next(i for i in range(dim) if v0[i])
        bordered = [row + [-v0[i]] for i, row in enumerate(a0)]
        bordered.append([Fraction(int(j == anchor)) for j in range(dim)] + [Fraction(0)])
        binv = _inverse(bordered)
        vs = [v0]
        es = [e0]
        for k in range(1, q_order + 1):
            rhs = [Fraction(0)] * dim
            for j in range(1, k + 1):
                mj, vkj = mk[j], vs[k - j]
                for i in range(dim):
                    row = mj[i]
                    rhs[i] -= sum((row[l] * vkj[l] for l in range(dim) if row[l] and vkj[l]), Fraction(0))
            for j in range(1, k):
                for i in range(dim):
                    rhs[i] += es[j] * vs[k - j][i]
            rhs.append(Fraction(0))
            sol = [sum((binv[i][l] * rhs[l] for l in range(dim + 1) if rhs[l]), Fraction(0))
                   for i in range(dim + 1)]
            vs.append(sol[:dim])
            es.append(sol[dim])
        vec = [TruncSeries([vs[k][i] for k in range(q_order + 1)], q_order, "q") for i in range(dim)]
        out.append(EigenPair(idx, lam, TruncSeries(es, q_order, "q"), vec, anchor))
    return out


def delta_i(n: int, spec, q_order: int, pairs: list[EigenPair] | None = None) -> list[TruncSeries]:
    """Delta_i = <v_i, v_i> / <v_i, 1>^2 for each eigenvector v_i of M_D."""
    spec = _spec(spec)
    pairs = pairs or eigenpair_lift(n, spec, q_order)
    gram = [g.const_value() for g in gram_diagonal(n, spec)]
    unit = len(gram) - 1  # (1^n) is last in the canonical order

    def delta(vec: list[TruncSeries]) -> TruncSeries:
        vv = TruncSeries([], q_order, "q")
        for g, x in zip(gram, vec):
            vv = vv + (x * x).scale(g)
        v1 = vec[unit].scale(gram[unit])
        if v1.is_zero():
            raise ArithmeticError("<v, 1> vanishes to the working order")
        if v1[0] == 0:
            raise ArithmeticError("<v, 1> has no constant term")
        return vv * (v1 * v1).inverse()

    out = []
    for p in pairs:
        d = delta(p.vector)
        if delta([x.scale(2) for x in p.vector]) != d:
            raise ArithmeticError("Delta is not invariant under rescaling the eigenvector")
        out.append(d)
    return out


def orthogonality_check(n: int, spec, q_order: int, pairs: list[EigenPair] | None = None,
                        products: bool = False) -> CheckReport:
    """Distinct eigenvectors are Gram-orthogonal; with ``products`` also v_i * v_j = 0
    in the quantum ring (feasible for small n)."""
    spec = _spec(spec)
    rep = CheckReport(f"orthogonality n={n}")
    pairs = pairs or eigenpair_lift(n, spec, q_order)
    gram = [g.const_value() for g in gram_diagonal(n, spec)]
    for a in pairs:
        for b in pairs:
            if a.index >= b.index:
                continue
            s = TruncSeries([], q_order, "q")
            for g, x, y in zip(gram, a.vector, b.vector):
                s = s + (x * y).scale(g)
            rep.record(s.is_zero(), f"<v_{a.index}, v_{b.index}> != 0")
    if products:
        parts = partitions(n)
        mults = [[[_series(e, q_order) for e in row] for row in mult_operator(mu, spec).entries]
                 for mu in parts]
        for a in pairs:
            # M_{v_a} = sum_mu v_a[mu] M_mu
            for b in pairs:
                if a.index == b.index:
                    continue
                out = [TruncSeries([], q_order, "q") for _ in parts]
                for k, mat in enumerate(mults):
                    for i in range(len(parts)):
                        acc = TruncSeries([], q_order, "q")
                        for j in range(len(parts)):
                            acc = acc + mat[i][j] * b.vector[j]
                        out[i] = out[i] + a.vector[k] * acc
                rep.record(all(x.is_zero() for x in out), f"v_{a.index} * v_{b.index} != 0")
    return rep


# the Wronskian -------------------------------------------------------------------------

@dataclass
class WronskianCertificate:
    n: int
    t1: Fraction
    t2: Fraction
    q_order: int
    first_nonzero_index: int | None
    coefficient: Fraction | None
    verdict: str  # pass | inconclusive
    leading_route_agrees: bool | None = None

    def to_json(self) -> dict:
        return {
            "n": self.n, "t1": str(self.t1), "t2": str(self.t2), "q_order": self.q_order,
            "first_nonzero_index": self.first_nonzero_index,
            "coefficient": None if self.coefficient is None else str(self.coefficient),
            "verdict": self.verdict,
        }


def wronskian_series(fs: Sequence[TruncSeries]) -> tuple[int, TruncSeries] | None:
    """det[(q d/dq)^k f_i] as q^offset * S with S(0) != 0, or None if every
    coefficient vanishes to the available precision.

    Uses W(f) = f_1^N W(theta(f_2/f_1), ..., theta(f_N/f_1)) and
    W(q^v h) = q^(vN) W(h), so no determinant is ever expanded.
    """
    fs = list(fs)
    big_n = len(fs)
    vals = [f.valuation() for f in fs]
    known = [v for v in vals if v is not None]
    if not known:
        return None
    v = min(known)
    hs = [f.shift_down(v) for f in fs]
    offset = v * big_n
    p = vals.index(v)
    sign = 1
    if p:
        hs[0], hs[p] = hs[p], hs[0]
        sign = -1
    pivot = hs[0]
    if big_n == 1:
        return offset, pivot.scale(sign)
    inv = pivot.inverse()
    gs = [(h * inv).theta() for h in hs[1:]]
    order = min(g.order for g in gs)
    gs = [g.truncate(order) for g in gs]
    rest = wronskian_series(gs)
    if rest is None:
        return None
    off2, s = rest
    head = pivot.truncate(s.order) ** big_n
    return offset + off2, (head * s).scale(sign)


def wronskian_direct(fs: Sequence[TruncSeries]) -> TruncSeries:
    """Leibniz expansion of det[(q d/dq)^k f_i]; only for small N."""
    big_n = len(fs)
    rows = []
    for f in fs:
        col = [f]
        for _ in range(1, big_n):
            col.append(col[-1].theta())
        rows.append(col)
    order = min(f.order for f in fs)
    total = TruncSeries([], order, "q")
    for perm in permutations(range(big_n)):
        inv = sum(1 for i in range(big_n) for j in range(i + 1, big_n) if perm[i] > perm[j])
        term = TruncSeries.one(order, "q")
        for i, k in enumerate(perm):
            term = term * rows[i][k]
        total = total + (term if inv % 2 == 0 else -term)
    return total


def wronskian_leading(fs: Sequence[TruncSeries]) -> Fraction:
    """Coefficient of q^(N(N-1)/2) in the Wronskian by Cauchy-Binet:
    Vandermonde(0..N-1) times det[f_i coefficient of q^m]_{m < N}."""
    from .kernel.linalg import bareiss_det

    big_n = len(fs)
    vdm = Fraction(1)
    for i in range(big_n):
        for j in range(i + 1, big_n):
            vdm *= j - i
    mat = [[Fraction(f[m]) for f in fs] for m in range(big_n)]
    den = 1
    for row in mat:
        for x in row:
            den = lcm(den, x.denominator)
    ints = [[int(x * den) for x in row] for row in mat]
    return vdm * Fraction(bareiss_det(ints), den ** big_n)


def resolve_specialization(n: int, spec=None, attempts: int = 64
                           ) -> tuple[tuple[Fraction, Fraction], list[str]]:
    """First point of the re-draw sequence, starting at ``spec``, with no accidental
    collisions among the q = 0 eigenvalues.  Returns the point and a log of
    rejected ones."""
    start = _spec(spec if spec is not None else DEFAULT_SPECIALIZATIONS[0])
    seq = (c for c in specialization_sequence() if c != start)
    log = []
    cand = start
    for _ in range(attempts):
        try:
            initial_eigenvalues(n, cand, allow_clusters=True)
            return cand, log
        except SpecializationCollision as exc:
            log.append(str(exc))
        cand = next(seq)
    raise SpecializationCollision(f"no usable specialization in {attempts} draws for n={n}")


def wronskian_certificate(n: int, spec=None, q_order: int | None = None,
                          redraw: bool = True) -> WronskianCertificate:
    """Certify det(W) != 0 by an exact nonzero coefficient, doubling q_order as needed.

    If the q = 0 eigenvalues collide at ``spec`` and ``redraw`` is set, the next
    point of the deterministic sequence is used; the record names the point used.
    """
    if n < 2:
        raise ValueError("the certificate is defined for n >= 2")
    if redraw:
        spec, _ = resolve_specialization(n, spec)
    else:
        spec = _spec(spec if spec is not None else DEFAULT_SPECIALIZATIONS[0])
    dim = len(partitions(n))
    order = q_order if q_order is not None else 4 * dim
    while True:
        eigen = lift_eigenvalues(n, spec, order)
        res = wronskian_series([e.series for e in eigen])
        if res is not None:
            offset, s = res
            base = dim * (dim - 1) // 2
            expected = wronskian_leading([e.series for e in eigen])
            lead = expected == (s[0] if offset == base else 0)
            return WronskianCertificate(n, spec[0], spec[1], order, offset, s[0], "pass", lead)
        if q_order is not None or order >= Q_ORDER_CAP:
            return WronskianCertificate(n, spec[0], spec[1], order, None, None, "inconclusive")
        order = min(2 * order, Q_ORDER_CAP)

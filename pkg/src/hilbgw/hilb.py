"""The Fock model of the equivariant cohomology of Hilb^n(C^2).

Computations run in the power-sum basis ``p_mu = prod alpha_{-mu_i} |0>``,
where the Heisenberg action is

    alpha_{-r} p_mu = p_{mu + (r)},     alpha_r p_mu = r * m_r(mu) * p_{mu - (r)},

and results are reported in the normalized Nakajima basis
``|mu> = p_mu / z(mu)``.  Quantum multiplication by the divisor class is

    M_D = (t1+t2) sum_k (k/2) c_k alpha_{-k} alpha_k
          + 1/2 sum_{k,l} [t1 t2 alpha_{k+l} alpha_{-k} alpha_{-l} - alpha_{-k-l} alpha_k alpha_l]
          - (t1+t2)/2 c_1 |.|,

with ``c_r = ((-q)^r + 1)/((-q)^r - 1)``.  Only the diagonal depends on q.

Every matrix is stored as a polynomial matrix over one shared denominator.
Specialized runs (t1, t2 fixed) convert to integer polynomials in q for the
fraction-free solves; symbolic runs stay in Q[t1, t2, q].
"""

from __future__ import annotations

from collections import Counter
from fractions import Fraction
from functools import lru_cache
from math import factorial, lcm
from typing import Mapping, Sequence

from .combinatorics import Partition, partitions, zee
from .kernel import GENS, Poly, RatFunc
from .kernel.linalg import bareiss_det, bareiss_solve, matmul, matvec
from .kernel.ratfunc import cyclotomic_coeffs
from .kernel.zpoly import ZPoly

Specialization = tuple[Fraction, Fraction] | None


class DegenerateBasisError(ArithmeticError):
    """The quantum powers of D failed to span the cohomology."""


def _t(spec: Specialization) -> tuple[Poly, Poly]:
    if spec is None:
        return Poly.gen("t1"), Poly.gen("t2")
    return Poly.const(spec[0]), Poly.const(spec[1])


def normalize_spec(spec) -> Specialization:
    if spec is None:
        return None
    a, b = spec
    return (Fraction(a), Fraction(b))


# operator structure ---------------------------------------------------------

def _remove(mu: Sequence[int], r: int) -> Partition:
    out = list(mu)
    out.remove(r)
    return tuple(out)


def _add(mu: Sequence[int], *parts: int) -> Partition:
    return tuple(sorted(list(mu) + list(parts), reverse=True))


@lru_cache(maxsize=None)
def md_structure(n: int):
    """Combinatorial data of M_D in the power-sum basis.

    Returns (parts, diag, off): ``diag[i]`` maps r to the coefficient of
    (t1+t2) c_r in the i-th diagonal entry; ``off[(i, j)] = (a, b)`` means
    entry (i, j) equals a*t1*t2 - b (column j is the image of p_j).
    """
    parts = partitions(n)
    index = {mu: i for i, mu in enumerate(parts)}
    diag = []
    for mu in parts:
        d: dict[int, Fraction] = {}
        for r, m in Counter(mu).items():
            d[r] = d.get(r, Fraction(0)) + Fraction(r * r * m, 2)
            d[1] = d.get(1, Fraction(0)) - Fraction(r * m, 2)
        diag.append({r: c for r, c in sorted(d.items()) if c})
    off: dict[tuple[int, int], list[Fraction]] = {}
    for j, mu in enumerate(parts):
        cnt = Counter(mu)
        # 1/2 t1 t2 alpha_{k+l} alpha_{-k} alpha_{-l}: split a part s = k + l
        for s, m in cnt.items():
            for k in range(1, s):
                l = s - k
                nu = _add(_remove(mu, s), k, l)
                e = off.setdefault((index[nu], j), [Fraction(0), Fraction(0)])
                e[0] += Fraction(s * m, 2)
        # -1/2 alpha_{-k-l} alpha_k alpha_l: join two parts
        for l, ml in cnt.items():
            rest = _remove(mu, l)
            cr = Counter(rest)
            for k, mk in cr.items():
                coef = Fraction(l * ml * k * mk, 2)
                nu = _add(_remove(rest, k), k + l)
                e = off.setdefault((index[nu], j), [Fraction(0), Fraction(0)])
                e[1] += coef
    return parts, diag, {key: tuple(v) for key, v in sorted(off.items())}


def cot_basis_ratfunc(r: int, gens: tuple[str, ...] = GENS) -> RatFunc:
    """c_r(q) = ((-q)^r + 1)/((-q)^r - 1)."""
    x = Poly.from_univariate([0] * r + [(-1) ** r], "q", gens)
    return RatFunc(x + 1, x - 1)


@lru_cache(maxsize=None)
def _common_den(n: int) -> Poly:
    """lcm of (-q)^r - 1 over r <= n, as a product of cyclotomic factors."""
    ds = set()
    for r in range(1, max(n, 1) + 1):
        for d in range(1, r + 1):
            if r % d == 0:
                ds.add(d)
    out = Poly.const(1)
    for d in sorted(ds):
        # Phi_d(-q)
        cs = cyclotomic_coeffs(d)
        out = out * Poly.from_univariate([c * (-1) ** i for i, c in enumerate(cs)], "q")
    return out


@lru_cache(maxsize=None)
def _den_times_cot(n: int, r: int) -> Poly:
    c = cot_basis_ratfunc(r)
    return (_common_den(n) * c.num).divexact(c.den)


class OperatorMatrix:
    """Square matrix over RatFunc stored as (polynomial matrix) / (denominator).

    Rows and columns follow ``partitions(n)``; ``basis`` is "nakajima" for the
    normalized basis |mu> or "power" for p_mu.
    """

    __slots__ = ("n", "num", "den", "basis", "spec")

    def __init__(self, n: int, num: list[list[Poly]], den: Poly, basis: str = "nakajima",
                 spec: Specialization = None):
        self.n = n
        self.num = num
        self.den = den
        self.basis = basis
        self.spec = spec

    @property
    def parts(self) -> list[Partition]:
        return partitions(self.n)

    @property
    def dim(self) -> int:
        return len(self.num)

    def entry(self, i: int, j: int) -> RatFunc:
        return RatFunc(self.num[i][j], self.den)

    @property
    def entries(self) -> list[list[RatFunc]]:
        return [[self.entry(i, j) for j in range(self.dim)] for i in range(self.dim)]

    def trace(self) -> RatFunc:
        s = Poly.const(0)
        for i in range(self.dim):
            s = s + self.num[i][i]
        return RatFunc(s, self.den)

    def __matmul__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        if self.basis != other.basis or self.n != other.n:
            raise ValueError("operator matrices live on different spaces")
        return OperatorMatrix(self.n, matmul(self.num, other.num), self.den * other.den,
                              self.basis, self.spec)

    def equals(self, other: "OperatorMatrix") -> bool:
        if self.dim != other.dim:
            return False
        if self.den == other.den:
            return self.num == other.num
        for i in range(self.dim):
            for j in range(self.dim):
                if self.num[i][j] * other.den != other.num[i][j] * self.den:
                    return False
        return True

    def to_basis(self, basis: str) -> "OperatorMatrix":
        if basis == self.basis:
            return self
        z = [Fraction(zee(mu)) for mu in self.parts]
        # N = Z A Z^-1 takes power-sum coordinates to normalized ones
        if basis == "nakajima" and self.basis == "power":
            f = lambda i, j: z[i] / z[j]
        elif basis == "power" and self.basis == "nakajima":
            f = lambda i, j: z[j] / z[i]
        else:
            raise ValueError(f"unknown basis {basis!r}")
        num = [[self.num[i][j].scale(f(i, j)) for j in range(self.dim)] for i in range(self.dim)]
        return OperatorMatrix(self.n, num, self.den, basis, self.spec)

    def subs(self, values: Mapping[str, object]) -> "OperatorMatrix":
        num = [[e.subs(values) for e in row] for row in self.num]
        return OperatorMatrix(self.n, num, self.den.subs(values), self.basis, self.spec)

    def transpose(self) -> "OperatorMatrix":
        num = [list(col) for col in zip(*self.num)]
        return OperatorMatrix(self.n, num, self.den, self.basis, self.spec)

    def is_identity(self) -> bool:
        for i in range(self.dim):
            for j in range(self.dim):
                target = self.den if i == j else Poly.const(0)
                if self.num[i][j] != target:
                    return False
        return True


def _md_power_numerator(n: int, spec: Specialization) -> tuple[list[list[Poly]], Poly]:
    parts, diag, off = md_structure(n)
    t1, t2 = _t(spec)
    s, p = t1 + t2, t1 * t2
    den = _common_den(n)
    dim = len(parts)
    zero = Poly.const(0)
    num = [[zero] * dim for _ in range(dim)]
    for i, d in enumerate(diag):
        acc = zero
        for r, c in d.items():
            acc = acc + _den_times_cot(n, r).scale(c)
        num[i][i] = s * acc
    for (i, j), (a, b) in off.items():
        num[i][j] = (p.scale(a) - b) * den
    return num, den


def build_md(n: int, spec=None, basis: str = "nakajima") -> OperatorMatrix:
    """Quantum multiplication by D on H*_T(Hilb^n), symbolic or at fixed (t1, t2)."""
    spec = normalize_spec(spec)
    if n == 0:
        return OperatorMatrix(0, [[Poly.const(0)]], Poly.const(1), basis, spec)
    num, den = _md_power_numerator(n, spec)
    m = OperatorMatrix(n, num, den, "power", spec)
    return m.to_basis(basis)


def trn(n: int, gens: tuple[str, ...] = GENS) -> RatFunc:
    """Normalized trace Tr_n straight from the partition sum."""
    if n < 1:
        raise ValueError("trn needs n >= 1")
    coeffs: dict[int, Fraction] = {}
    for mu in partitions(n):
        for part in mu:
            coeffs[part] = coeffs.get(part, Fraction(0)) + Fraction(part * part, 2)
            coeffs[1] = coeffs.get(1, Fraction(0)) - Fraction(part, 2)
    total = RatFunc.const(0, gens)
    for r, c in sorted(coeffs.items()):
        if c:
            total = total + cot_basis_ratfunc(r, gens) * c
    return total


def gram_diagonal(n: int, spec=None) -> list[RatFunc]:
    """<mu|mu> = (-1)^{|mu|-l(mu)} / ((t1 t2)^{l(mu)} z(mu)) in the normalized basis."""
    t1, t2 = _t(normalize_spec(spec))
    p = t1 * t2
    out = []
    for mu in partitions(n):
        sign = (-1) ** (n - len(mu))
        out.append(RatFunc(Poly.const(sign), (p ** len(mu)).scale(zee(mu))))
    return out


def selfadjoint_check(n: int, spec=None) -> bool:
    """M^T G = G M for M = build_md(n) and the diagonal Gram matrix G."""
    m = build_md(n, spec)
    g = gram_diagonal(n, spec)
    for i in range(m.dim):
        for j in range(m.dim):
            lhs = m.entry(j, i) * g[j]
            rhs = g[i] * m.entry(i, j)
            if lhs != rhs:
                return False
    return True


# D-power basis and multiplication operators ------------------------------------

class _Engine:
    """Polynomial matrix N proportional to M_D in the power-sum basis.

    Specialized runs hold N over Z[q] (ZPoly); symbolic runs over Q[t1,t2,q].
    """

    def __init__(self, n: int, spec: Specialization):
        self.n = n
        self.spec = spec
        num, den = _md_power_numerator(n, spec)
        self.den_poly = den
        self.parts = partitions(n)
        self.dim = len(self.parts)
        if spec is None:
            self.scale = Fraction(1)
            self.N = num
            self.zero = Poly.const(0)
            self.one = Poly.const(1)
        else:
            d = 1
            for row in num:
                for e in row:
                    for c in e.terms.values():
                        d = lcm(d, c.denominator)
            self.scale = Fraction(d)
            self.N = [[ZPoly(c * d for c in e.univariate_coeffs("q")) for e in row] for row in num]
            self.zero = ZPoly.const(0)
            self.one = ZPoly.const(1)
        self._powers = [None, self.N]

    def to_poly(self, x) -> Poly:
        if isinstance(x, ZPoly):
            return Poly.from_univariate(x.c, "q")
        return x

    def power(self, k: int):
        while len(self._powers) <= k:
            self._powers.append(matmul(self._powers[-1], self.N))
        if k == 0:
            return [[self.one if i == j else self.zero for j in range(self.dim)]
                    for i in range(self.dim)]
        return self._powers[k]

    def dpower_columns(self) -> list[list]:
        """Columns N^k p_{1^n} for k = 0..dim-1 (p-basis coordinates)."""
        v = [self.zero] * self.dim
        v[-1] = self.one
        cols = [v]
        for _ in range(1, self.dim):
            v = matvec(self.N, v)
            cols.append(v)
        return cols

    def solve(self, mu: Partition):
        """Fraction-free coordinates of p_mu in the columns N^k p_{1^n}."""
        cols = self.dpower_columns()
        b = [[cols[k][i] for k in range(self.dim)] for i in range(self.dim)]
        rhs = [self.zero] * self.dim
        rhs[self.parts.index(mu)] = self.one
        try:
            x, det = bareiss_solve(b, rhs)
        except ZeroDivisionError:
            raise DegenerateBasisError(f"D-power vectors are dependent for n={self.n}") from None
        return x, det

    def mult_numerator(self, mu: Partition):
        """(P, delta, factor) with M_mu = factor * P / delta in the p-basis."""
        x, det = self.solve(mu)
        acc = [[self.zero] * self.dim for _ in range(self.dim)]
        for k, a in enumerate(x):
            if a.is_zero():
                continue
            pk = self.power(k)
            acc = [[acc[i][j] + a * pk[i][j] for j in range(self.dim)] for i in range(self.dim)]
        factor = Fraction(factorial(self.n), zee(mu))
        return acc, det, factor

    def trace_of(self, mu: Partition) -> RatFunc:
        x, det = self.solve(mu)
        acc = self.zero
        for k, a in enumerate(x):
            if a.is_zero():
                continue
            pk = self.power(k)
            tr = self.zero
            for i in range(self.dim):
                tr = tr + pk[i][i]
            acc = acc + a * tr
        factor = Fraction(factorial(self.n), zee(mu))
        num, den = self.to_poly(acc).scale(factor), self.to_poly(det)
        if self.spec is None:
            return _clear_t_denominator(num, den, self.den_poly, self.dim)
        return RatFunc(num, den)


def _clear_t_denominator(num: Poly, den: Poly, cyc: Poly, limit: int) -> RatFunc:
    """Rewrite num/den over a power of the cyclotomic denominator when possible.

    Traces of quantum multiplication only have poles at roots of unity in q,
    so the t-dependent factors of a Bareiss determinant must cancel.
    """
    power = Poly.const(1)
    for _ in range(limit + 1):
        qt, r = (num * power).divmod_lex(den)
        if r.is_zero():
            return RatFunc(qt, power)
        power = power * cyc
    return RatFunc(num, den)


@lru_cache(maxsize=64)
def _engine(n: int, spec: Specialization) -> _Engine:
    return _Engine(n, spec)


def _default_spec(n: int, spec, symbolic: bool | None):
    spec = normalize_spec(spec)
    if spec is None and symbolic is False:
        from .spectrum import DEFAULT_SPECIALIZATIONS
        return DEFAULT_SPECIALIZATIONS[0]
    if spec is None and symbolic is None and n >= 6:
        from .spectrum import DEFAULT_SPECIALIZATIONS
        return DEFAULT_SPECIALIZATIONS[0]
    return spec


def dpower_basis(n: int, spec=None) -> list[dict[Partition, RatFunc]]:
    """The vectors D^k = M_D^k |1^n>, k < |Part(n)|, in the normalized basis.

    Raises DegenerateBasisError when their coordinate determinant vanishes.
    """
    if n < 1:
        raise ValueError("dpower_basis needs n >= 1")
    spec = normalize_spec(spec)
    m = build_md(n, spec)
    dim = m.dim
    v = [RatFunc.const(0)] * dim
    v[-1] = RatFunc.const(1)
    out = []
    mat = m.entries
    for k in range(dim):
        out.append({mu: v[i] for i, mu in enumerate(m.parts) if not v[i].is_zero()})
        v = [sum((mat[i][j] * v[j] for j in range(dim) if not v[j].is_zero()), RatFunc.const(0))
             for i in range(dim)]
    eng = _engine(n, spec)
    cols = eng.dpower_columns()
    det = bareiss_det([[cols[k][i] for k in range(dim)] for i in range(dim)])
    if det.is_zero():
        raise DegenerateBasisError(f"D-power vectors are dependent for n={n}")
    return out


def mult_operator(mu: Partition, spec=None, symbolic: bool | None = None,
                  basis: str = "nakajima") -> OperatorMatrix:
    """M_{|mu>} as a polynomial in M_D, found by solving in the D-power basis."""
    mu = tuple(mu)
    n = sum(mu)
    if n < 1:
        raise ValueError("mult_operator needs a nonempty partition")
    spec = _default_spec(n, spec, symbolic)
    eng = _engine(n, spec)
    p, det, factor = eng.mult_numerator(mu)
    num = [[eng.to_poly(e).scale(factor) for e in row] for row in p]
    m = OperatorMatrix(n, num, eng.to_poly(det), "power", spec)
    return m.to_basis(basis)


def mult_operator_numerator(mu: Partition, spec=None):
    """Raw (P, delta) over the engine ring; M_mu is proportional to P/delta."""
    mu = tuple(mu)
    eng = _engine(sum(mu), normalize_spec(spec))
    p, det, _ = eng.mult_numerator(mu)
    return p, det


def trmu(mu: Partition, spec=None, symbolic: bool | None = None) -> RatFunc:
    """Tr_m^mu = trace of quantum multiplication by |mu>."""
    mu = tuple(mu)
    n = sum(mu)
    if n < 1:
        raise ValueError("trmu needs a nonempty partition")
    spec = _default_spec(n, spec, symbolic)
    return _trmu_cached(mu, spec)


@lru_cache(maxsize=None)
def _trmu_cached(mu: Partition, spec: Specialization) -> RatFunc:
    return _engine(sum(mu), spec).trace_of(mu)


def apply_md(n: int, vec: Mapping[Partition, RatFunc], spec=None) -> dict[Partition, RatFunc]:
    """M_D applied to a vector given in the normalized basis."""
    m = build_md(n, spec)
    parts = m.parts
    out = {}
    for i, mu in enumerate(parts):
        acc = RatFunc.const(0)
        for j, nu in enumerate(parts):
            if nu in vec:
                acc = acc + m.entry(i, j) * vec[nu]
        if not acc.is_zero():
            out[mu] = acc
    return out


def trace_identity_check(n_max: int = 7, symbolic_max: int = 5,
                         specs: Sequence = ((1, 5), (2, 7))):
    """trace(M_D) = (t1+t2) Tr_n: symbolic up to ``symbolic_max``, then at ``specs``."""
    from .report import CheckReport

    rep = CheckReport("trace")
    for n in range(1, n_max + 1):
        runs = [None] if n <= symbolic_max else [normalize_spec(s) for s in specs]
        for spec in runs:
            t1, t2 = _t(spec)
            rhs = trn(n) * RatFunc(t1 + t2)
            if spec is not None:
                rhs = rhs.subs({"t1": spec[0], "t2": spec[1]})
            tag = "symbolic" if spec is None else f"t=({spec[0]},{spec[1]})"
            rep.record(build_md(n, spec).trace() == rhs, f"n={n} {tag}")
    return rep


def commutativity_check(n_max: int = 4, spec=None, symbolic: bool = True):
    """M_mu M_nu = M_nu M_mu for all partitions mu, nu of n (and M_D among them)."""
    from .report import CheckReport

    rep = CheckReport("commutativity")
    for n in range(2, n_max + 1):
        ops = [build_md(n, spec)] + [mult_operator(mu, spec, symbolic) for mu in partitions(n)]
        for i in range(len(ops)):
            for j in range(i + 1, len(ops)):
                rep.record((ops[i] @ ops[j]).equals(ops[j] @ ops[i]), f"n={n} pair ({i},{j})")
    return rep

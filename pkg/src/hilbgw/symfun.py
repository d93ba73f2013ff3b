"""Symmetric polynomials in roots and their partial derivatives.

Roots f_1..f_n of P(x) = x^n + s_1 x^(n-1) + ... + s_n depend on variables
z_1..z_m.  Any S_n-invariant polynomial in the f's and their derivatives is
rewritten as a polynomial in the s's and their derivatives divided by a
power of the discriminant Delta = prod_i P_x(f_i).

Text grammar (whitespace ignored)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*        ('/' only by a rational constant)
    unary  := ('-' | '+') unary | ('sum_i' | 'prod_i') term | power
    power  := atom (('^' | '**') INT)?
    atom   := NUMBER | symbol | '(' expr ')'
    symbol := ('d[' INT (',' INT)* ']')? ('f' IDX | 's' IDX | 'Y')
    IDX    := INT | '_' LETTER                  (a summation index)

``d[1,1,2]f3`` is the third derivative d^3 f_3 / dz_1^2 dz_2; the bracket lists
differentiation variables, repeats allowed.  ``sum_j`` (any letter) sums the
product that follows it over j = 1..n, so ``sum_i f_i*f_i + 1`` is p_2 + 1.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from typing import Callable, Iterable, Mapping, NamedTuple, Sequence

from .kernel import Poly

_KIND_ORDER = {"f": 0, "s": 1, "Y": 2}


class SymfunParseError(ValueError):
    pass


class DiffSymbol(NamedTuple):
    kind: str  # "f" root, "s" elementary symmetric, "Y" auxiliary
    index: int
    deriv: tuple[int, ...] = ()  # sorted differentiation variables, 1-based

    def sort_key(self):
        return (_KIND_ORDER[self.kind], self.index, len(self.deriv), self.deriv)

    def d(self, j: int) -> "DiffSymbol":
        return DiffSymbol(self.kind, self.index, tuple(sorted(self.deriv + (j,))))

    def __str__(self) -> str:
        head = f"d[{','.join(map(str, self.deriv))}]" if self.deriv else ""
        return head + ("Y" if self.kind == "Y" else f"{self.kind}{self.index}")


def f(i: int, *deriv: int) -> DiffSymbol:
    return DiffSymbol("f", i, tuple(sorted(deriv)))


def s(k: int, *deriv: int) -> DiffSymbol:
    return DiffSymbol("s", k, tuple(sorted(deriv)))


def Y(*deriv: int) -> DiffSymbol:
    return DiffSymbol("Y", 0, tuple(sorted(deriv)))


# monomials are packed integers: exponent of the symbol with id k sits in bits
# [16k, 16k + 16); a product of monomials is then a sum of integers
_SLOT = 16
_MASK = (1 << _SLOT) - 1
_SYMS: list[DiffSymbol] = []
_IDS: dict[DiffSymbol, int] = {}


def _sym_id(sym: DiffSymbol) -> int:
    k = _IDS.get(sym)
    if k is None:
        k = _IDS[sym] = len(_SYMS)
        _SYMS.append(sym)
    return k


def _encode(pairs: Iterable[tuple[DiffSymbol, int]]) -> int:
    m = 0
    for sym, e in pairs:
        if e >= _MASK:
            raise OverflowError("exponent too large for a packed monomial")
        m += e << (_SLOT * _sym_id(sym))
    return m


@lru_cache(maxsize=1 << 16)
def _decode(m: int) -> tuple[tuple[DiffSymbol, int], ...]:
    """(symbol, exponent) pairs of a packed monomial, in interning order."""
    out = []
    k = 0
    while m:
        e = m & _MASK
        if e:
            out.append((_SYMS[k], e))
        m >>= _SLOT
        k += 1
    return tuple(out)


def _exponent(m: int, sym: DiffSymbol) -> int:
    k = _IDS.get(sym)
    return 0 if k is None else (m >> (_SLOT * k)) & _MASK


def _mono_key(m: int):
    return tuple(sorted((sym.sort_key(), e) for sym, e in _decode(m)))


class DiffPoly:
    """Polynomial in DiffSymbols with rational coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping | None = None):
        # keys: packed monomials, or iterables of (symbol, exponent) pairs
        self.terms: dict[int, Fraction | int] = {}
        for m, c in (terms or {}).items():
            c = _norm(c)
            if c:
                key = m if isinstance(m, int) else _encode(m)
                self.terms[key] = self.terms.get(key, 0) + c
        self.terms = {m: c for m, c in self.terms.items() if c}

    @classmethod
    def const(cls, c) -> "DiffPoly":
        c = _norm(c)
        return _raw({0: c} if c else {})

    @classmethod
    def symbol(cls, sym: DiffSymbol) -> "DiffPoly":
        return _raw({1 << (_SLOT * _sym_id(sym)): 1})

    def _coerce(self, other) -> "DiffPoly":
        if isinstance(other, DiffPoly):
            return other
        if isinstance(other, DiffSymbol):
            return DiffPoly.symbol(other)
        return DiffPoly.const(other)

    def monomials(self):
        """(pairs, coefficient) for every term."""
        for m, c in self.terms.items():
            yield _decode(m), c

    def constant(self):
        return self.terms.get(0, 0)

    def __add__(self, other) -> "DiffPoly":
        out = dict(self.terms)
        _accumulate(out, self._coerce(other).terms)
        return _raw(out)

    __radd__ = __add__

    def __neg__(self) -> "DiffPoly":
        return _raw({m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "DiffPoly":
        out = dict(self.terms)
        _accumulate(out, self._coerce(other).terms, -1)
        return _raw(out)

    def __rsub__(self, other) -> "DiffPoly":
        return self._coerce(other) - self

    def scale(self, c) -> "DiffPoly":
        c = _norm(c)
        if not c:
            return DiffPoly()
        return _raw({m: v * c for m, v in self.terms.items()})

    def __mul__(self, other) -> "DiffPoly":
        if not isinstance(other, (DiffPoly, DiffSymbol)):
            return self.scale(other)
        other = self._coerce(other)
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        out: dict[int, Fraction | int] = {}
        get = out.get
        for mb, cb in b.items():
            for ma, ca in a.items():
                m = ma + mb
                out[m] = get(m, 0) + ca * cb
        return _raw({m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "DiffPoly":
        if k < 0:
            raise ValueError("negative power of a DiffPoly")
        out, base = DiffPoly.const(1), self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, DiffPoly):
            other = self._coerce(other)
        return self.terms == other.terms

    __hash__ = None

    def is_zero(self) -> bool:
        return not self.terms

    def symbols(self) -> set[DiffSymbol]:
        return {sym for m in self.terms for sym, _ in _decode(m)}

    def kinds(self) -> set[str]:
        return {sym.kind for sym in self.symbols()}

    def d(self, j: int) -> "DiffPoly":
        """Partial derivative in z_j (Leibniz rule on every symbol)."""
        out: dict[int, Fraction | int] = {}
        for m, c in self.terms.items():
            for sym, e in _decode(m):
                k = _SLOT * _sym_id(sym)
                new = m - (1 << k) + (1 << (_SLOT * _sym_id(sym.d(j))))
                _accumulate(out, {new: c * e})
        return _raw(out)

    def substitute(self, mapping: Callable[[DiffSymbol], "DiffPoly | None"]) -> "DiffPoly":
        """Replace each symbol x by mapping(x) (kept when mapping returns None)."""
        cache: dict[tuple[DiffSymbol, int], DiffPoly] = {}
        out: dict[int, Fraction | int] = {}
        for m, c in self.terms.items():
            term = DiffPoly.const(c)
            for sym, e in _decode(m):
                key = (sym, e)
                if key not in cache:
                    img = mapping(sym)
                    cache[key] = (DiffPoly.symbol(sym) if img is None else img) ** e
                term = term * cache[key]
            _accumulate(out, term.terms)
        return _raw(out)

    def permute_roots(self, perm: Sequence[int]) -> "DiffPoly":
        """Apply the root relabelling f_i -> f_{perm[i-1]}."""
        out = {}
        for m, c in self.terms.items():
            out[_encode(((DiffSymbol("f", perm[sym.index - 1], sym.deriv) if sym.kind == "f" else sym), e)
                        for sym, e in _decode(m))] = c
        return _raw(out)

    def evaluate(self, values: Callable[[DiffSymbol], Fraction]) -> Fraction:
        total = Fraction(0)
        cache: dict[DiffSymbol, Fraction] = {}
        for m, c in self.terms.items():
            t = Fraction(c)
            for sym, e in _decode(m):
                if sym not in cache:
                    cache[sym] = Fraction(values(sym))
                t *= cache[sym] ** e
            total += t
        return total

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=_mono_key, reverse=True):
            c = Fraction(self.terms[m])
            pairs = sorted(_decode(m), key=lambda x: x[0].sort_key())
            body = "*".join(str(sym) if e == 1 else f"{sym}^{e}" for sym, e in pairs)
            mag = abs(c)
            if not body:
                text = str(mag)
            elif mag == 1:
                text = body
            elif mag.denominator == 1:
                text = f"{mag}*{body}"
            else:
                text = f"({mag})*{body}"
            parts.append(("-" if c < 0 else "+", text))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, text in parts[1:]:
            out += f" {sign} {text}"
        return out

    __repr__ = __str__


def _norm(c):
    # integers stay ints: most arithmetic here is over Z and int ops are far cheaper
    if isinstance(c, int):
        return c
    c = Fraction(c)
    return c.numerator if c.denominator == 1 else c


def _accumulate(out: dict, terms: Mapping, factor=1) -> None:
    for m, c in terms.items():
        v = out.get(m, 0) + c * factor
        if v:
            out[m] = v
        else:
            out.pop(m, None)


def _raw(terms: dict) -> DiffPoly:
    p = object.__new__(DiffPoly)
    p.terms = terms
    return p


def _root_count(p: DiffPoly) -> int:
    return max((sym.index for sym in p.symbols() if sym.kind == "f"), default=0)


# symmetrization ------------------------------------------------------------------------

def symmetrize(m: DiffPoly, n: int) -> DiffPoly:
    """Sum of sigma(m) over all relabellings sigma of the n roots."""
    if _root_count(m) > n:
        raise ValueError(f"root index exceeds n={n}")
    out = DiffPoly()
    for perm in permutations(range(1, n + 1)):
        out = out + m.permute_roots(perm)
    return out


def is_symmetric(p: DiffPoly, n: int) -> bool:
    if _root_count(p) > n:
        return False
    gens = [tuple(range(2, n + 1)) + (1,)] + ([(2, 1) + tuple(range(3, n + 1))] if n > 1 else [])
    return all(p.permute_roots(g) == p for g in gens)


# the universal polynomials Phi_b and Omega_b ---------------------------------------------

def _s_poly(k: int, deriv: tuple[int, ...] = ()) -> DiffPoly:
    return DiffPoly.const(1) if k == 0 and not deriv else (
        DiffPoly() if k == 0 else DiffPoly.symbol(DiffSymbol("s", k, deriv)))


def char_poly_at(x: DiffPoly, n: int) -> DiffPoly:
    """P(x) = sum_k s_k x^(n-k) with s_0 = 1."""
    return sum((_s_poly(k) * x ** (n - k) for k in range(n + 1)), DiffPoly())


def px_at(x: DiffPoly, n: int) -> DiffPoly:
    """P_x(x) = sum_k (n-k) s_k x^(n-k-1)."""
    return sum((_s_poly(k) * x ** (n - k - 1) * (n - k) for k in range(n)), DiffPoly())


def _as_tuple(b) -> tuple[int, ...]:
    b = tuple(sorted(b))
    if not b:
        raise ValueError("Phi_b needs a nonzero multi-index")
    if any(j < 1 for j in b):
        raise ValueError("differentiation variables are 1-based")
    return b


@lru_cache(maxsize=None)
def phi(b: tuple[int, ...], n: int) -> DiffPoly:
    """Phi_b(Ds, DY_{<b}) with d^b Y * P_x(Y) = Phi_b whenever P(Y) = 0.

    ``b`` lists differentiation variables (sorted; (1, 1, 2) is d^3/dz_1^2 dz_2).
    """
    b = _as_tuple(b)
    yy = DiffPoly.symbol(Y())
    j = b[-1]
    if len(b) == 1:
        return -sum((_s_poly(k, (j,)) * yy ** (n - k) for k in range(1, n + 1)), DiffPoly())
    lower = b[:-1]
    # d_j of (d^lower Y) P_x(Y) = Phi_lower
    return phi(lower, n).d(j) - DiffPoly.symbol(Y(*lower)) * px_at(yy, n).d(j)


def _is_root(sym: DiffSymbol) -> bool:
    return sym.kind in ("f", "Y") and not sym.deriv


@lru_cache(maxsize=None)
def _power_table(n: int, e: int) -> tuple[DiffPoly, ...]:
    """Coefficients T_i (polynomials in s) with r^e = sum_{i<n} T_i r^i when P(r) = 0."""
    if e < n:
        return tuple(DiffPoly.const(int(i == e)) for i in range(n))
    prev = _power_table(n, e - 1)
    new = [DiffPoly()] + list(prev[:-1])
    for k in range(1, n + 1):
        new[n - k] = new[n - k] - prev[-1] * DiffPoly.symbol(s(k))
    return tuple(new)


def reduce_mod_p(p: DiffPoly, n: int) -> DiffPoly:
    """Lower every underived root (f_i or Y) below degree n using P(root) = 0."""
    out: dict[int, Fraction | int] = {}
    images: dict[tuple[DiffSymbol, int], DiffPoly] = {}
    roots = [(sym, _SLOT * _sym_id(sym)) for sym in [Y()] + [f(i) for i in range(1, n + 1)]]
    for m, c in p.terms.items():
        heavy = [(sym, (m >> k) & _MASK) for sym, k in roots if ((m >> k) & _MASK) >= n]
        if not heavy:
            _accumulate(out, {m: c})
            continue
        rest = m - sum(e << (_SLOT * _IDS[sym]) for sym, e in heavy)
        acc = _raw({rest: c})
        for sym, e in heavy:
            if (sym, e) not in images:
                table = _power_table(n, e)
                images[(sym, e)] = sum((t * DiffPoly.symbol(sym) ** i for i, t in enumerate(table)
                                        if not t.is_zero()), DiffPoly())
            acc = acc * images[(sym, e)]
        _accumulate(out, acc.terms)
    return _raw(out)


def _exact_quotient(num: DiffPoly, den: DiffPoly) -> DiffPoly | None:
    """num / den when den divides num, else None.

    Division runs directly on packed monomials: integer order on them is a lex
    order, so the largest key is always the leading term.
    """
    import heapq

    if den.is_zero():
        raise ZeroDivisionError("division by the zero DiffPoly")
    lead = max(den.terms)
    lc = den.terms[lead]
    slots = [(_SLOT * _IDS[sym], e) for sym, e in _decode(lead)]
    tail = [(m, c) for m, c in den.terms.items() if m != lead]
    rem = dict(num.terms)
    heap = [-m for m in rem]
    heapq.heapify(heap)
    quot: dict[int, Fraction | int] = {}
    while heap:
        m = -heapq.heappop(heap)
        c = rem.pop(m, None)
        if c is None:
            continue
        if any(((m >> k) & _MASK) < e for k, e in slots):
            return None
        shift = m - lead
        qc = _norm(Fraction(c) / lc) if c % lc else c // lc
        quot[shift] = qc
        for md, cd in tail:
            t = shift + md
            v = rem.get(t, 0) - qc * cd
            if v:
                if t not in rem:
                    heapq.heappush(heap, -t)
                rem[t] = v
            else:
                rem.pop(t, None)
    return _raw(quot)


@lru_cache(maxsize=None)
def px_cofactor(n: int) -> DiffPoly:
    """A(s, Y) with A(f_i) = prod_{j != i} P_x(f_j), so P_x(Y) A = Delta modulo P(Y).

    The product over the other roots is symmetric in them; it is eliminated
    through the coefficients of P(x)/(x - Y).
    """
    if n == 1:
        return DiffPoly.const(1)
    prod = DiffPoly.const(1)
    for i in range(1, n):
        prod = prod * px_at(DiffPoly.symbol(f(i)), n)
    yy = DiffPoly.symbol(Y())
    # P(x)/(x - Y) = sum_k c_k x^(n-1-k), c_0 = 1, c_k = s_k + Y c_(k-1)
    c = [DiffPoly.const(1)]
    for k in range(1, n):
        c.append(DiffPoly.symbol(s(k)) + yy * c[-1])
    elem = [c[k].scale((-1) ** k) for k in range(n)]
    out = reduce_mod_p(_eliminate(reduce_mod_p(prod, n), n - 1, elem), n)
    check = reduce_mod_p(out * px_at(yy, n), n) - discriminant(n)
    if not check.is_zero():
        raise ArithmeticError("cofactor identity P_x(Y) A(Y) = Delta failed")
    return out


@lru_cache(maxsize=None)
def omega(b: tuple[int, ...], n: int) -> tuple[DiffPoly, int]:
    """(Omega_b(Ds, Y), N_b) with d^b Y * Delta^N_b = Omega_b whenever P(Y) = 0.

    Omega_b has Y-degree below n.  From Phi_b: every lower derivative d^a Y is
    replaced by Omega_a / Delta^N_a, the smallest Delta power clearing them is
    kept, and 1/P_x(Y) = A(Y)/Delta adds one more.  N_b is tracked exactly.
    """
    b = _as_tuple(b)
    raw = phi(b, n)
    grouped: dict[tuple, DiffPoly] = {}
    for m, c in raw.terms.items():
        dy = tuple((sym, e) for sym, e in _decode(m) if sym.kind == "Y" and sym.deriv)
        rest = m - _encode(dy)
        grouped.setdefault(dy, DiffPoly())
        grouped[dy] = grouped[dy] + _raw({rest: c})
    need = {dy: sum(omega(sym.deriv, n)[1] * e for sym, e in dy) for dy in grouped}
    top = max(need.values(), default=0)
    delta = discriminant(n)
    total: dict = {}
    for dy, coeff in grouped.items():
        term = coeff * delta ** (top - need[dy])
        for sym, e in dy:
            for _ in range(e):
                term = reduce_mod_p(term * omega(sym.deriv, n)[0], n)
        _accumulate(total, term.terms)
    num, power = reduce_mod_p(_raw(total) * px_cofactor(n), n), top + 1
    # the tracked power is kept minimal by cancelling Delta where it divides
    while power:
        quo = _exact_quotient(num, delta)
        if quo is None:
            break
        num, power = quo, power - 1
    return num, power


# elimination of symmetric polynomials in the roots --------------------------------------------

def _split_roots(p: DiffPoly, n: int) -> dict[tuple[int, ...], DiffPoly]:
    """Group by exponent vectors of the underived roots; coefficients are root-free."""
    out: dict[tuple[int, ...], dict] = {}
    for m, c in p.terms.items():
        exps = [0] * n
        rest = []
        for sym, e in _decode(m):
            if sym.kind == "f":
                if sym.deriv:
                    raise ValueError("derived roots must be removed before elimination")
                exps[sym.index - 1] += e
            else:
                rest.append((sym, e))
        out.setdefault(tuple(exps), {})[tuple(rest)] = c
    return {k: DiffPoly(v) for k, v in out.items()}


@lru_cache(maxsize=None)
def _elementary_product(exps: tuple[int, ...], n: int) -> dict[tuple[int, ...], int]:
    """prod_k e_k(f)^exps[k-1] expanded in root exponent vectors."""
    acc = {(0,) * n: 1}
    for k, power in enumerate(exps, start=1):
        ek = {}
        for subset in _subsets(n, k):
            ek[tuple(int(i in subset) for i in range(n))] = 1
        for _ in range(power):
            nxt: dict[tuple[int, ...], int] = {}
            for a, ca in acc.items():
                for b, cb in ek.items():
                    key = tuple(x + y for x, y in zip(a, b))
                    nxt[key] = nxt.get(key, 0) + ca * cb
            acc = nxt
    return acc


def _subsets(n: int, k: int):
    from itertools import combinations

    return [set(c) for c in combinations(range(n), k)]


def eliminate_roots(p: DiffPoly, n: int) -> DiffPoly:
    """Express a root-symmetric polynomial through s_1..s_n (s_k = (-1)^k e_k)."""
    elem = [DiffPoly.const(1)] + [DiffPoly.symbol(s(k)).scale((-1) ** k) for k in range(1, n + 1)]
    return _eliminate(reduce_mod_p(p, n), n, elem)


def _eliminate(p: DiffPoly, n: int, elem: Sequence[DiffPoly]) -> DiffPoly:
    """Triangular algorithm: repeatedly remove the lex-leading root monomial f^alpha
    with prod e_k^(alpha_k - alpha_(k+1)); ``elem[k]`` is the value of e_k(f_1..f_n)."""
    work = _split_roots(p, n)
    out = DiffPoly()
    while work:
        alpha = max(work)
        coeff = work[alpha]
        if any(alpha[i] < alpha[i + 1] for i in range(n - 1)):
            raise ValueError("input is not symmetric in the roots")
        exps = tuple(alpha[k] - (alpha[k + 1] if k + 1 < n else 0) for k in range(n))
        e_mono = DiffPoly.const(1)
        for k, e in enumerate(exps, start=1):
            if e:
                e_mono = e_mono * elem[k] ** e
        out = out + coeff * e_mono
        for beta, c in _elementary_product(exps, n).items():
            v = work.get(beta, DiffPoly()) - coeff.scale(c)
            if v.is_zero():
                work.pop(beta, None)
            else:
                work[beta] = v
    return out


@lru_cache(maxsize=None)
def discriminant(n: int) -> DiffPoly:
    """Delta = prod_i P_x(f_i) as a polynomial in s_1..s_n."""
    prod = DiffPoly.const(1)
    for i in range(1, n + 1):
        prod = prod * px_at(DiffPoly.symbol(f(i)), n)
    return eliminate_roots(prod, n)


# rewriting ------------------------------------------------------------------------------

@dataclass
class LocalizedExpr:
    """numerator / Delta^power with a numerator in s-symbols only."""

    numerator: DiffPoly
    power: int
    n: int

    def __post_init__(self):
        if self.numerator.kinds() - {"s"}:
            raise ValueError("numerator must involve elementary symmetric symbols only")

    def evaluate(self, values: Callable[[DiffSymbol], Fraction]) -> Fraction:
        num = self.numerator.evaluate(values)
        if not self.power:
            return num
        den = discriminant(self.n).evaluate(values)
        if not den:
            raise ZeroDivisionError("discriminant vanishes at this point")
        return num / den ** self.power

    def __eq__(self, other) -> bool:
        if not isinstance(other, LocalizedExpr) or other.n != self.n:
            return NotImplemented
        delta = discriminant(self.n)
        k = max(self.power, other.power)
        return (self.numerator * delta ** (k - self.power)
                == other.numerator * delta ** (k - other.power))

    __hash__ = None

    def __str__(self) -> str:
        if not self.power:
            return str(self.numerator)
        tail = "Delta" if self.power == 1 else f"Delta^{self.power}"
        return f"({self.numerator}) / {tail}"


def rewrite(expr: DiffPoly, n: int, simplify: bool = True) -> LocalizedExpr:
    """Rewrite a root-symmetric DiffPoly as (polynomial in Ds) / Delta^k.

    One representative per S_n-orbit of monomials is processed.  Its per-root
    factors h_k(Y) (products of Y and Omega_b(Y) / Delta^N_b) turn the orbit sum
    into traces through the set-partition Moebius expansion
    sum over injective maps = sum_pi prod_B (-1)^(|B|-1) (|B|-1)! Tr(prod_{k in B} h_k),
    and Tr(Y^j) is the power sum p_j written in s by Newton's identities.
    """
    if "Y" in expr.kinds():
        raise ValueError("Y is an auxiliary symbol and may not appear in the input")
    if not is_symmetric(expr, n):
        raise ValueError("expression is not symmetric under relabelling the roots")
    orbits: dict[tuple, Fraction | int] = {}
    for m, c in expr.terms.items():
        orbits.setdefault(_orbit_key(m), c)
    pieces = []
    for key, c in orbits.items():
        weight = Fraction(c)
        for _, k in _multiplicities(key):
            weight /= _factorial(k)
        for blocks, mu in _set_partitions(len(key)):
            num, need = DiffPoly.const(1), 0
            for block in blocks:
                tnum, tneed = _block_trace(tuple(sorted(key[k] for k in block)), n)
                num, need = num * tnum, need + tneed
            pieces.append((num.scale(weight * mu), need))
    top = max((need for _, need in pieces), default=0)
    delta = discriminant(n)
    acc: dict = {}
    for num, need in pieces:
        _accumulate(acc, (num * delta ** (top - need)).terms)
    out = LocalizedExpr(_raw(acc), top, n)
    return reduce_power(out) if simplify else out


def _orbit_key(m: int) -> tuple:
    """Sorted per-root factors ((deriv, exponent), ...) of a monomial in the f's."""
    per_root: dict[int, list] = {}
    for sym, e in _decode(m):
        if sym.kind != "f":
            raise ValueError("only root symbols may appear in a rewrite input")
        per_root.setdefault(sym.index, []).append((sym.deriv, e))
    return tuple(sorted(tuple(sorted(v)) for v in per_root.values()))


def _multiplicities(key: tuple):
    out: dict = {}
    for fac in key:
        out[fac] = out.get(fac, 0) + 1
    return out.items()


def _factorial(k: int) -> int:
    out = 1
    for i in range(2, k + 1):
        out *= i
    return out


def _set_partitions(k: int):
    """(blocks, Moebius weight) for every set partition of range(k)."""
    def rec(i, blocks):
        if i == k:
            mu = 1
            for b in blocks:
                mu *= (-1) ** (len(b) - 1) * _factorial(len(b) - 1)
            yield [tuple(b) for b in blocks], mu
            return
        for b in blocks:
            b.append(i)
            yield from rec(i + 1, blocks)
            b.pop()
        blocks.append([i])
        yield from rec(i + 1, blocks)
        blocks.pop()

    yield from rec(0, [])


@lru_cache(maxsize=None)
def _root_factor(fac: tuple, n: int) -> tuple[DiffPoly, int]:
    """h(Y) * Delta^N for one root's factor ((deriv, exponent), ...), reduced mod P."""
    out, need = DiffPoly.const(1), 0
    for deriv, e in fac:
        if deriv:
            om, nb = omega(deriv, n)
            for _ in range(e):
                out = reduce_mod_p(out * om, n)
            need += nb * e
        else:
            out = reduce_mod_p(out * DiffPoly.symbol(Y()) ** e, n)
    return out, need


@lru_cache(maxsize=None)
def _block_trace(block: tuple, n: int) -> tuple[DiffPoly, int]:
    """Tr(prod of the block's root factors) as (polynomial in Ds, Delta power)."""
    prod, need = DiffPoly.const(1), 0
    for fac in block:
        h, k = _root_factor(fac, n)
        prod, need = reduce_mod_p(prod * h, n), need + k
    return trace_mod_p(prod, n), need


@lru_cache(maxsize=None)
def power_sums(n: int) -> tuple[DiffPoly, ...]:
    """p_0..p_(n-1) of the roots in terms of s (Newton's identities)."""
    p = [DiffPoly.const(n)]
    for k in range(1, n):
        acc = DiffPoly.symbol(s(k)).scale(-k)
        for i in range(1, k):
            acc = acc - DiffPoly.symbol(s(i)) * p[k - i]
        p.append(acc)
    return tuple(p)


def trace_mod_p(g: DiffPoly, n: int) -> DiffPoly:
    """sum_i g(f_i) for g of Y-degree below n (coefficients free of the roots)."""
    p = power_sums(n)
    y = Y()
    by_degree: dict[int, dict] = {}
    for m, c in g.terms.items():
        j = _exponent(m, y)
        if j >= n:
            raise ValueError("reduce modulo P before taking traces")
        rest = m - (j << (_SLOT * _IDS[y])) if j else m
        by_degree.setdefault(j, {})[rest] = c
    out = DiffPoly()
    for j, terms in by_degree.items():
        out = out + _raw(terms) * p[j]
    return out


def reduce_power(expr: LocalizedExpr) -> LocalizedExpr:
    """Cancel factors of Delta from the numerator."""
    if expr.numerator.is_zero():
        return LocalizedExpr(expr.numerator, 0, expr.n)
    delta = discriminant(expr.n)
    num, k = expr.numerator, expr.power
    while k:
        quo = _exact_quotient(num, delta)
        if quo is None:
            break
        num, k = quo, k - 1
    return LocalizedExpr(num, k, expr.n)


# parsing ------------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<sym>(?:d\[\d+(?:,\d+)*\])?(?:[fs](?:\d+|_[a-z])|Y))"
                    r"|(?P<agg>(?:sum|prod)_[a-z])|(?P<op>\*\*|[-+*/^()]))")


def _tokenize(text: str) -> list[tuple[str, str]]:
    pos, out = 0, []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise SymfunParseError(f"unexpected input at position {pos}: {text[pos:pos + 10]!r}")
        kind = m.lastgroup
        out.append((kind, m.group(kind)))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return out


class _Parser:
    def __init__(self, text: str, n: int):
        self.toks = _tokenize(text)
        self.pos = 0
        self.n = n
        self.bound: dict[str, int] = {}

    def peek(self):
        return self.toks[self.pos] if self.pos < len(self.toks) else (None, None)

    def take(self):
        tok = self.peek()
        if tok[0] is None:
            raise SymfunParseError("unexpected end of input")
        self.pos += 1
        return tok

    def parse(self) -> DiffPoly:
        out = self.expr()
        if self.pos != len(self.toks):
            raise SymfunParseError(f"trailing input: {self.toks[self.pos][1]!r}")
        return out

    def expr(self) -> DiffPoly:
        acc = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            rhs = self.term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term(self) -> DiffPoly:
        acc = self.unary()
        while self.peek()[1] in ("*", "/"):
            op = self.take()[1]
            if op == "*":
                acc = acc * self.unary()
            else:
                rhs = self.unary()
                if rhs.symbols() or rhs.is_zero():
                    raise SymfunParseError("division is only by a nonzero rational constant")
                acc = acc.scale(1 / rhs.constant())
        return acc

    def unary(self) -> DiffPoly:
        kind, val = self.peek()
        if val in ("-", "+"):
            self.take()
            inner = self.unary()
            return -inner if val == "-" else inner
        if kind == "agg":
            self.take()
            op, var = val.split("_")
            if var in self.bound:
                raise SymfunParseError(f"index {var} is already bound")
            start = self.pos
            acc = DiffPoly() if op == "sum" else DiffPoly.const(1)
            for i in range(1, self.n + 1):
                self.pos = start
                self.bound[var] = i
                piece = self.term()
                acc = acc + piece if op == "sum" else acc * piece
            del self.bound[var]
            return acc
        return self.power()

    def power(self) -> DiffPoly:
        base = self.atom()
        if self.peek()[1] in ("^", "**"):
            self.take()
            kind, val = self.take()
            if kind != "num" or "/" in val:
                raise SymfunParseError("exponents must be nonnegative integers")
            base = base ** int(val)
        return base

    def atom(self) -> DiffPoly:
        kind, val = self.take()
        if kind == "num":
            return DiffPoly.const(Fraction(val))
        if kind == "sym":
            return DiffPoly.symbol(self.symbol(val))
        if val == "(":
            inner = self.expr()
            if self.take()[1] != ")":
                raise SymfunParseError("missing ')'")
            return inner
        raise SymfunParseError(f"unexpected token {val!r}")

    def symbol(self, text: str) -> DiffSymbol:
        deriv: tuple[int, ...] = ()
        if text.startswith("d["):
            close = text.index("]")
            deriv = tuple(sorted(int(x) for x in text[2:close].split(",")))
            if any(j < 1 for j in deriv):
                raise SymfunParseError("differentiation variables are 1-based")
            text = text[close + 1:]
        if text == "Y":
            return DiffSymbol("Y", 0, deriv)
        head, idx = text[0], text[1:]
        if idx.startswith("_"):
            if idx[1:] not in self.bound:
                raise SymfunParseError(f"unbound index {idx}")
            k = self.bound[idx[1:]]
        else:
            k = int(idx)
        if not 1 <= k <= self.n:
            raise SymfunParseError(f"index {k} outside 1..{self.n}")
        return DiffSymbol(head, k, deriv)


def parse_diffpoly(text: str, n: int) -> DiffPoly:
    """Parse the text grammar in the module docstring for n roots."""
    return _Parser(text, n).parse()


# evaluation oracle ---------------------------------------------------------------------

_ZGENS_CACHE: dict[int, tuple[str, ...]] = {}


def zgens(m: int) -> tuple[str, ...]:
    if m not in _ZGENS_CACHE:
        _ZGENS_CACHE[m] = tuple(f"z{j}" for j in range(1, m + 1))
    return _ZGENS_CACHE[m]


def _deriv_poly(p: Poly, deriv: tuple[int, ...]) -> Poly:
    for j in deriv:
        p = p.diff(f"z{j}")
    return p


def family_values(family: Sequence[Poly], point: Sequence) -> Callable[[DiffSymbol], Fraction]:
    """Symbol values for explicit roots f_i(z) at z = point; s_k from the roots."""
    n = len(family)
    gens = family[0].gens
    at = {g: Fraction(v) for g, v in zip(gens, point)}
    # P(x) = prod (x - f_i): s_k = (-1)^k e_k(f)
    elem = [Poly.const(1, gens)] + [Poly.const(0, gens)] * n
    for fi in family:
        for k in range(n, 0, -1):
            elem[k] = elem[k] + elem[k - 1] * fi
    s_polys = [elem[k].scale((-1) ** k) for k in range(n + 1)]
    cache: dict[DiffSymbol, Fraction] = {}

    def value(sym: DiffSymbol) -> Fraction:
        if sym not in cache:
            if sym.kind == "f":
                base = family[sym.index - 1]
            elif sym.kind == "s":
                base = s_polys[sym.index]
            else:
                raise ValueError("Y has no value on a family")
            cache[sym] = _deriv_poly(base, sym.deriv).evaluate(at)
        return cache[sym]

    return value


def evaluation_oracle(expr: DiffPoly, family: Sequence[Poly], point: Sequence,
                      rewritten: LocalizedExpr | None = None) -> tuple[Fraction, Fraction]:
    """(direct value, value of the rewrite) of a symmetric expression on a family."""
    n = len(family)
    values = family_values(family, point)
    if discriminant(n).evaluate(values) == 0:
        raise ZeroDivisionError("discriminant vanishes at this point; draw another")
    rewritten = rewritten or rewrite(expr, n)
    return expr.evaluate(values), rewritten.evaluate(values)


def random_family(rng, n: int, m: int, degree: int = 2, height: int = 5) -> list[Poly]:
    """n random polynomials in z_1..z_m with small integer coefficients."""
    gens = zgens(m)
    out = []
    for _ in range(n):
        terms = {}
        for e in _exponents(m, degree):
            c = rng.randint(-height, height)
            if c:
                terms[e] = c
        out.append(Poly(terms, gens))
    return out


def _exponents(m: int, degree: int) -> Iterable[tuple[int, ...]]:
    if m == 0:
        yield ()
        return
    for k in range(degree + 1):
        for rest in _exponents(m - 1, degree - k):
            yield (k,) + rest


def random_symmetric(rng, n: int, m: int, max_order: int = 3, factors: int = 2) -> DiffPoly:
    """Symmetrization of a random monomial in roots and their derivatives.

    The derivative orders of the factors add up to at most ``max_order``.
    """
    mono = DiffPoly.const(rng.randint(1, 3))
    budget = rng.randint(0, max_order)
    count = rng.randint(1, factors)
    for k in range(count):
        order = budget if k == count - 1 else rng.randint(0, budget)
        budget -= order
        deriv = tuple(sorted(rng.randint(1, m) for _ in range(order)))
        mono = mono * DiffPoly.symbol(DiffSymbol("f", rng.randint(1, n), deriv))
    return symmetrize(mono, n)


def oracle_run(count: int, seed: int, n_max: int = 4, m_max: int = 2, max_order: int = 3):
    """Randomized comparisons of rewrite against direct evaluation.

    Yields (expr, n, m, direct, rewritten) per trial.
    """
    import random

    rng = random.Random(seed)
    for _ in range(count):
        n = rng.randint(2, n_max)
        m = rng.randint(1, m_max)
        expr = random_symmetric(rng, n, m, max_order)
        rw = rewrite(expr, n)
        while True:
            family = random_family(rng, n, m)
            point = [rng.randint(-4, 4) for _ in range(m)]
            try:
                direct, via = evaluation_oracle(expr, family, point, rw)
            except ZeroDivisionError:
                continue
            break
        yield expr, n, m, direct, via

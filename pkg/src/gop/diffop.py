"""The non-commutative operator algebra Q(z)[d/dz] = Q(z)[theta].

Operators are immutable coefficient vectors over Q(z) in one of two bases:
powers of D = d/dz or powers of theta = z*d/dz.  The module also houses the
first-order-system side (square matrices over Q(z), the derived-matrix
sequence G_s) and truncated power series with explicit order bookkeeping.
"""

from __future__ import annotations

from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .errors import (
    DivisionByZeroOperator,
    InsufficientTruncation,
    NotOrdinaryPoint,
    PoleAtOrigin,
)
from .exact_arith import (
    Poly,
    RatFn,
    as_fraction,
    as_ratfn,
    falling_factorial_poly,
    poly_gcd,
    poly_lcm,
)


class Basis(Enum):
    D = "D"
    THETA = "theta"


class _Infinity:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"


INFINITY = _Infinity()


def is_infinity(point) -> bool:
    return point is INFINITY or point == "inf"


@lru_cache(maxsize=None)
def _stirling2_row(m: int) -> tuple[int, ...]:
    """S(m, k) for k = 0..m: theta^m = sum_k S(m,k) z^k D^k."""
    if m == 0:
        return (1,)
    prev = _stirling2_row(m - 1)
    row = [0] * (m + 1)
    for k, v in enumerate(prev):
        row[k] += k * v
        row[k + 1] += v
    return tuple(row)


class DiffOp:
    """Linear differential operator: coeffs[k] multiplies the k-th power of
    the derivation symbol.  Leading coefficient nonzero; the zero operator
    has an empty coefficient tuple and order -1."""

    __slots__ = ("basis", "coeffs")

    def __init__(self, basis: Basis, coeffs: Sequence = ()):
        cs = [as_ratfn(c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, *a):
        raise AttributeError("DiffOp is immutable")

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, k: int) -> RatFn:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else RatFn.ZERO

    def leading(self) -> RatFn:
        if self.is_zero():
            raise ValueError("zero operator")
        return self.coeffs[-1]

    def __eq__(self, other):
        return (
            isinstance(other, DiffOp)
            and self.basis == other.basis
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.basis, self.coeffs))

    def __repr__(self):
        from .cli import operator_text  # cheap import, avoids duplication

        return f"DiffOp[{self.basis.value}]({operator_text(self)})"

    def scaled(self, r) -> "DiffOp":
        """Left multiplication by a rational function."""
        r = as_ratfn(r)
        return DiffOp(self.basis, [r * c for c in self.coeffs])

    def monic(self) -> "DiffOp":
        if self.is_zero():
            return self
        lead = self.leading()
        return DiffOp(self.basis, [c / lead for c in self.coeffs])


def _derivation(basis: Basis, c: RatFn) -> RatFn:
    d = c.derivative()
    return d if basis is Basis.D else RatFn.Z * d


def _check_same_basis(a: DiffOp, b: DiffOp) -> Basis:
    if a.order <= 0:
        return b.basis
    if b.order <= 0:
        return a.basis
    if a.basis is not b.basis:
        raise ValueError("operator product across bases; convert explicitly")
    return a.basis


def op_add(a: DiffOp, b: DiffOp) -> DiffOp:
    basis = _check_same_basis(a, b)
    n = max(len(a.coeffs), len(b.coeffs))
    return DiffOp(basis, [a.coeff(k) + b.coeff(k) for k in range(n)])


def op_sub(a: DiffOp, b: DiffOp) -> DiffOp:
    return op_add(a, DiffOp(b.basis, [-c for c in b.coeffs]))


def _symbol_shift(basis: Basis, m: DiffOp) -> DiffOp:
    """Left compose with the derivation symbol: X o M."""
    out = [RatFn.ZERO] * (len(m.coeffs) + 1)
    for t, c in enumerate(m.coeffs):
        out[t + 1] += c
        out[t] += _derivation(basis, c)
    return DiffOp(basis, out)


def op_mul(a: DiffOp, b: DiffOp) -> DiffOp:
    """Non-commutative product; X*c = c*X + X(c)."""
    basis = _check_same_basis(a, b)
    if a.is_zero() or b.is_zero():
        return DiffOp(basis)
    acc = DiffOp(basis)
    cur = DiffOp(basis, b.coeffs)
    for i, c in enumerate(a.coeffs):
        if i:
            cur = _symbol_shift(basis, cur)
        if not c.is_zero():
            acc = op_add(acc, cur.scaled(c))
    return acc


def op_pow(a: DiffOp, n: int) -> DiffOp:
    out = DiffOp(a.basis, [RatFn.ONE])
    for _ in range(n):
        out = op_mul(out, a)
    return out


def op_div_right(a: DiffOp, b: DiffOp) -> tuple[DiffOp, DiffOp]:
    """Right Euclidean division: a = q*b + r with ord(r) < ord(b)."""
    if b.is_zero():
        raise DivisionByZeroOperator("right division by the zero operator")
    basis = _check_same_basis(a, b)
    q = DiffOp(basis)
    r = a if a.basis is basis else DiffOp(basis, a.coeffs)
    b = b if b.basis is basis else DiffOp(basis, b.coeffs)
    while not r.is_zero() and r.order >= b.order:
        k = r.order - b.order
        c = r.leading() / b.leading()
        term = DiffOp(basis, [RatFn.ZERO] * k + [c])
        q = op_add(q, term)
        r = op_sub(r, op_mul(term, b))
    return q, r


def change_basis(l: DiffOp, target: Basis) -> DiffOp:
    """Exact rewrite in the other basis.  Conversion to theta additionally
    normalizes the output monic (a left Q(z)-unit, which preserves solutions
    and exponents)."""
    if l.basis is target or l.is_zero():
        return l
    n = l.order
    if target is Basis.D:
        # theta^m = sum_k S(m,k) z^k D^k
        out = [RatFn.ZERO] * (n + 1)
        for m, c in enumerate(l.coeffs):
            if c.is_zero():
                continue
            row = _stirling2_row(m)
            for k, s in enumerate(row):
                if s:
                    out[k] += c * RatFn(Poly.x(k, s))
        return DiffOp(Basis.D, out)
    # D^j = z^(-j) * x(x-1)...(x-j+1) evaluated at theta
    out = [RatFn.ZERO] * (n + 1)
    for j, c in enumerate(l.coeffs):
        if c.is_zero():
            continue
        ff = falling_factorial_poly(j)
        zj = RatFn(Poly.ONE, Poly.x(j))
        for k in range(ff.degree + 1):
            if ff[k]:
                out[k] += c * zj * ff[k]
    return DiffOp(Basis.THETA, out).monic()


def translate_to_point(l: DiffOp, point) -> DiffOp:
    """Change of variable u = z - a (finite a) or u = 1/z (infinity).

    Finite translation substitutes into the D-basis coefficients exactly;
    at infinity theta maps to -theta_u exactly and the result is returned
    monic in theta."""
    if l.is_zero():
        return l
    if is_infinity(point):
        lt = change_basis(l, Basis.THETA)
        out = []
        for k, c in enumerate(lt.coeffs):
            ck = c.invert_argument()
            out.append(ck if k % 2 == 0 else -ck)
        return DiffOp(Basis.THETA, out).monic()
    a = as_fraction(point)
    if a == 0:
        return l
    ld = change_basis(l, Basis.D)
    return DiffOp(Basis.D, [c.shift_argument(a) for c in ld.coeffs])


def monic_theta_coefficients(l: DiffOp) -> list[RatFn]:
    """[A_1, ..., A_n] for the monic theta form theta^n + sum A_j theta^(n-j)."""
    lt = change_basis(l, Basis.THETA).monic()
    n = lt.order
    return [lt.coeff(n - j) for j in range(1, n + 1)]


# ---------------------------------------------------------------------------
# matrices over Q(z)


class RatMat:
    """Square matrix over Q(z)."""

    __slots__ = ("entries",)

    def __init__(self, entries: Sequence[Sequence]):
        rows = tuple(tuple(as_ratfn(e) for e in row) for row in entries)
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise ValueError("matrix must be square and nonempty")
        object.__setattr__(self, "entries", rows)

    def __setattr__(self, *a):
        raise AttributeError("RatMat is immutable")

    @property
    def n(self) -> int:
        return len(self.entries)

    @staticmethod
    def identity(n: int) -> "RatMat":
        return RatMat([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @staticmethod
    def zero(n: int) -> "RatMat":
        return RatMat([[0] * n for _ in range(n)])

    def __eq__(self, other):
        return isinstance(other, RatMat) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __add__(self, other: "RatMat"):
        return RatMat(
            [
                [self.entries[i][j] + other.entries[i][j] for j in range(self.n)]
                for i in range(self.n)
            ]
        )

    def __mul__(self, other: "RatMat"):
        n = self.n
        return RatMat(
            [
                [
                    sum(
                        (self.entries[i][k] * other.entries[k][j] for k in range(n)),
                        RatFn.ZERO,
                    )
                    for j in range(n)
                ]
                for i in range(n)
            ]
        )

    def scaled(self, r) -> "RatMat":
        r = as_ratfn(r)
        return RatMat([[r * e for e in row] for row in self.entries])

    def derivative(self) -> "RatMat":
        return RatMat([[e.derivative() for e in row] for row in self.entries])

    def is_zero(self) -> bool:
        return all(e.is_zero() for row in self.entries for e in row)

    def mat_vec(self, vec: Sequence[RatFn]) -> list[RatFn]:
        return [
            sum((self.entries[i][k] * vec[k] for k in range(self.n)), RatFn.ZERO)
            for i in range(self.n)
        ]

    def power(self, k: int) -> "RatMat":
        out = RatMat.identity(self.n)
        for _ in range(k):
            out = out * self
        return out

    def __repr__(self):
        return f"RatMat({[[repr(e) for e in row] for row in self.entries]})"


def cleared_polynomial_coeffs(l: DiffOp) -> list[Poly]:
    """Primitive polynomial coefficient vector of the D-basis form: clear the
    common denominator, then divide out the common polynomial factor."""
    ld = change_basis(l, Basis.D)
    den = Poly.ONE
    for c in ld.coeffs:
        den = poly_lcm(den, c.den)
    polys = [(as_ratfn(den) * c).as_poly() for c in ld.coeffs]
    g = Poly()
    for p in polys:
        g = poly_gcd(g, p) if not g.is_zero() else p
    if g.degree >= 1:
        polys = [p.exact_div(g) for p in polys]
    return polys


def companion(l: DiffOp) -> RatMat:
    """Companion matrix of the monic D-basis form: superdiagonal ones, last
    row (-a_n, ..., -a_1)."""
    ld = change_basis(l, Basis.D).monic()
    n = ld.order
    if n < 1:
        raise ValueError("companion matrix needs order >= 1")
    rows = [[RatFn.ZERO] * n for _ in range(n)]
    for i in range(n - 1):
        rows[i][i + 1] = RatFn.ONE
    for j in range(n):
        rows[n - 1][j] = -ld.coeff(j)
    return RatMat(rows)


# -- the derived-matrix sequence G_{s+1} = G_s G + G_s'


def _certified_factors(t: Poly) -> list[tuple[Poly, int, bool]]:
    """Monic factorization of t into (factor, multiplicity, certified
    irreducible) pieces.  Degree <= 3 factors without rational roots are
    certified; higher-degree residuals are kept whole, uncertified."""
    out = []
    for g, mult in t.squarefree_decomposition():
        rest = g
        for root, m in g.rational_roots():
            lin = Poly([-root, 1])
            out.append((lin, mult * m, True))
            for _ in range(m):
                rest = rest.exact_div(lin)
        if rest.degree >= 1:
            out.append((rest.monic(), mult, rest.degree <= 3))
    return out


def _reduced_ratio(num: Poly, factors, k: int) -> RatFn:
    """num / prod(f^(mult*k)) reduced, dividing out certified factors."""
    if num.is_zero():
        return RatFn.ZERO
    exps = []
    trusted = True
    for f, mult, certified in factors:
        e = mult * k
        while e > 0:
            q, r = num.divmod(f)
            if not r.is_zero():
                break
            num, e = q, e - 1
        if e > 0 and not certified:
            trusted = False
        exps.append((f, e))
    den = Poly.ONE
    for f, e in exps:
        if e:
            den = den * f**e
    if trusted:
        return RatFn._reduced(num, den)
    return RatFn(num, den)


def common_denominator_poly(g: RatMat) -> Poly:
    """Monic lcm of the entry denominators."""
    t = Poly.ONE
    for row in g.entries:
        for e in row:
            t = poly_lcm(t, e.den)
    return t


def gs_sequence(g: RatMat, s_max: int) -> list[RatMat]:
    """[G_1, ..., G_s_max] with G_1 = G and G_{s+1} = G_s G + G_s'.

    Internally iterates the denominator-cleared form H_s = T^s G_s, which
    stays polynomial, and reduces each entry to lowest terms on output."""
    if s_max < 1:
        raise ValueError("s_max must be >= 1")
    t = common_denominator_poly(g)
    factors = _certified_factors(t)
    n = g.n
    tg = [[(as_ratfn(t) * g.entries[i][j]).as_poly() for j in range(n)] for i in range(n)]
    dt = t.derivative()
    out = [g]
    h = [row[:] for row in tg]
    for s in range(1, s_max):
        nh = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = Poly()
                for k in range(n):
                    if not h[i][k].is_zero() and not tg[k][j].is_zero():
                        acc = acc + h[i][k] * tg[k][j]
                acc = acc + t * h[i][j].derivative() - (s * dt) * h[i][j]
                row.append(acc)
            nh.append(row)
        h = nh
        out.append(RatMat([[_reduced_ratio(h[i][j], factors, s + 1) for j in range(n)] for i in range(n)]))
    return out


# ---------------------------------------------------------------------------
# truncated power series


class TruncatedSeries:
    """Power series over Q known modulo z^trunc_order."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence):
        object.__setattr__(self, "coeffs", tuple(as_fraction(c) for c in coeffs))

    def __setattr__(self, *a):
        raise AttributeError("TruncatedSeries is immutable")

    @property
    def trunc_order(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def __eq__(self, other):
        return isinstance(other, TruncatedSeries) and self.coeffs == other.coeffs

    def valuation(self):
        """Index of the first nonzero known coefficient, or None when the
        series vanishes to the whole known order."""
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return None

    def truncate(self, order: int) -> "TruncatedSeries":
        if order > self.trunc_order:
            raise InsufficientTruncation(f"known only to order {self.trunc_order}")
        return TruncatedSeries(self.coeffs[:order])

    def derivative(self) -> "TruncatedSeries":
        return TruncatedSeries([i * c for i, c in enumerate(self.coeffs)][1:])

    def theta(self) -> "TruncatedSeries":
        return TruncatedSeries([i * c for i, c in enumerate(self.coeffs)])

    def __add__(self, other: "TruncatedSeries"):
        m = min(self.trunc_order, other.trunc_order)
        return TruncatedSeries([self.coeffs[i] + other.coeffs[i] for i in range(m)])

    def __sub__(self, other: "TruncatedSeries"):
        m = min(self.trunc_order, other.trunc_order)
        return TruncatedSeries([self.coeffs[i] - other.coeffs[i] for i in range(m)])

    def scaled(self, c) -> "TruncatedSeries":
        c = as_fraction(c)
        return TruncatedSeries([c * a for a in self.coeffs])

    def mul_poly(self, p: Poly) -> "TruncatedSeries":
        out = [Fraction(0)] * self.trunc_order
        for i, c in enumerate(p.coeffs):
            if c:
                for j in range(self.trunc_order - i):
                    out[i + j] += c * self.coeffs[j]
        return TruncatedSeries(out)

    def __repr__(self):
        shown = ", ".join(str(c) for c in self.coeffs[:6])
        tail = ", ..." if self.trunc_order > 6 else ""
        return f"TruncatedSeries([{shown}{tail}] mod z^{self.trunc_order})"


def apply_operator(l: DiffOp, f: TruncatedSeries) -> TruncatedSeries:
    """L(f), truncated to the provable order.

    Derivatives in the D basis cost one order of certainty each; coefficient
    poles at the origin cost their pole order.  If the result provably has a
    nonzero coefficient at a negative power of z, PoleAtOrigin is raised."""
    n = l.order
    big_n = f.trunc_order
    if l.is_zero():
        return TruncatedSeries(f.coeffs)
    if big_n <= n:
        raise InsufficientTruncation("series order must exceed the operator order")
    # operand series for each power of the symbol
    operands = [f]
    for j in range(1, n + 1):
        prev = operands[-1]
        operands.append(prev.derivative() if l.basis is Basis.D else prev.theta())
    vals, laurents, certainties = {}, {}, {}
    for j, c in enumerate(l.coeffs):
        if c.is_zero():
            continue
        known = operands[j].trunc_order
        v, _ = c.laurent_at_zero(1)
        certainty = known + v
        vals[j], certainties[j] = v, certainty
    if not vals:
        return TruncatedSeries(f.coeffs)
    m = min(certainties.values())
    if m <= 0:
        raise InsufficientTruncation("operator poles exhaust the known precision")
    min_v = min(0, min(vals.values()))
    acc = {e: Fraction(0) for e in range(min_v, m)}
    for j, v in vals.items():
        series = operands[j]
        _, lau = l.coeff(j).laurent_at_zero(m - v)
        for i, lc in enumerate(lau):
            if not lc:
                continue
            for k, sc in enumerate(series.coeffs):
                e = v + i + k
                if e >= m:
                    break
                if sc:
                    acc[e] += lc * sc
    for e in range(min_v, 0):
        if acc[e]:
            raise PoleAtOrigin(f"nonzero coefficient at z^{e}")
    return TruncatedSeries([acc[e] for e in range(0, m)])


def apply_to_power(l: DiffOp, s: int, depth: int = 8) -> tuple[int, list[Fraction]]:
    """Leading data of L(z^s) for the monic theta form of L.

    Returns (offset, [phi_0(s), ..., phi_{depth-1}(s)]) where
    L(z^s) = z^offset * (phi_0(s) + phi_1(s) z + ...) and the offset is the
    s-independent Laurent base m + s, so trailing zeros are meaningful."""
    coeffs = monic_theta_coefficients(l)
    n = len(coeffs)
    m = 0
    for a in coeffs:
        if not a.is_zero():
            m = min(m, a.order_at_zero())
    q = RatFn.const(Fraction(s) ** n)
    for j, a in enumerate(coeffs, start=1):
        q = q + a * Fraction(s) ** (n - j)
    if q.is_zero():
        return m + s, [Fraction(0)] * depth
    v, lau = q.laurent_at_zero(depth)
    pad = v - m
    out = [Fraction(0)] * pad + lau
    return m + s, out[:depth]


def ordinary_series_basis(l: DiffOp, order: int) -> list[TruncatedSeries]:
    """n power-series solutions seeded z^i + O(z^n) at the ordinary point 0,
    grown by the coefficient recurrence of L."""
    ld = change_basis(l, Basis.D)
    n = ld.order
    if n < 1:
        raise ValueError("order must be >= 1")
    polys = cleared_polynomial_coeffs(ld)
    if polys[n].evaluate(0) == 0:
        raise NotOrdinaryPoint("leading coefficient vanishes at 0")
    # z^n L = sum_j B_j z^(n-j) [theta]_j, collected by powers of z
    theta_polys = [Poly() for _ in range(n + 1)]
    for j, b in enumerate(polys):
        if b.is_zero():
            continue
        ff = falling_factorial_poly(j)
        zb = b * Poly.x(n - j)
        for k in range(ff.degree + 1):
            if ff[k]:
                theta_polys[k] = theta_polys[k] + zb * ff[k]
    max_t = max((tp.degree for tp in theta_polys if not tp.is_zero()), default=0)
    q_polys = [Poly([tp[t] for tp in theta_polys]) for t in range(max_t + 1)]
    solutions = []
    for seed in range(n):
        a = [Fraction(1) if k == seed else Fraction(0) for k in range(n)]
        for big_k in range(n, order):
            rhs = Fraction(0)
            for t in range(1, min(big_k, max_t) + 1):
                rhs -= q_polys[t].evaluate(big_k - t) * a[big_k - t]
            q0 = q_polys[0].evaluate(big_k)
            a.append(rhs / q0)
        solutions.append(TruncatedSeries(a[:order]))
    return solutions

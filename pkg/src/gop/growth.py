"""Denominator growth and p-adic size/radius estimates for systems y' = Gy.

The whole module works off the denominator-cleared sequence H_s = T^s G_s,
which satisfies the polynomial recurrence

    H_{s+1} = H_s (TG) + T H_s' - s T' H_s,

stays integer once T is normalized integer-primitive, and shares Gauss
valuations with G_s (v(G_s) = v(H_s) because T has unit content at every
prime).  Logarithmic quantities are carried as exact {prime: exponent}
combinations for as long as possible; floats appear only in reports.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .diffop import RatMat, common_denominator_poly
from .exact_arith import (
    GAUSS_INF,
    Poly,
    accolade,
    as_ratfn,
    is_infinite,
    kummer_vp_factorial,
    primes_upto,
    vp_int,
)
from .modp import ClearedSequenceMod


def minimal_T(g: RatMat) -> Poly:
    """Smallest common denominator of G, normalized so that both T and T*G
    have integer coefficients: primitive integer form, positive leading."""
    t0 = common_denominator_poly(g)
    dens = [c.denominator for c in t0.coeffs]
    for row in g.entries:
        for e in row:
            prod = as_ratfn(t0) * e
            dens.extend(c.denominator for c in prod.as_poly().coeffs)
    d = math.lcm(*dens) if dens else 1
    # t0 is monic, so d is exactly the minimal integer scale; the result has
    # integer coefficients and positive leading coefficient d
    return t0 * d


@dataclass
class _IntSystem:
    """Integer cleared form of a system plus the growing H_s list."""

    n: int
    t: list[int]
    dt: list[int]
    tg: list[list[list[int]]]
    hs: list  # hs[s-1] = H_s as int coefficient lists

    def h(self, s: int):
        while len(self.hs) < s:
            self._advance()
        return self.hs[s - 1]

    def _advance(self):
        s = len(self.hs)
        h = self.hs[-1]
        n = self.n
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = [0]
                for k in range(n):
                    acc = _ipoly_add(acc, _ipoly_mul(h[i][k], self.tg[k][j]))
                acc = _ipoly_add(acc, _ipoly_mul(self.t, _ipoly_deriv(h[i][j])))
                acc = _ipoly_add(acc, _ipoly_scale(_ipoly_mul(self.dt, h[i][j]), -s))
                row.append(acc)
            out.append(row)
        self.hs.append(out)


def _ipoly_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _ipoly_add(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] += c
    return _ipoly_trim(out)


def _ipoly_mul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _ipoly_trim(out)


def _ipoly_scale(a, c):
    return _ipoly_trim([c * x for x in a])


def _ipoly_deriv(a):
    return _ipoly_trim([i * c for i, c in enumerate(a)][1:])


_SYSTEMS: dict[RatMat, _IntSystem] = {}


def cleared_system(g: RatMat) -> _IntSystem:
    """Cached integer cleared form of G with lazy H_s extension."""
    sys = _SYSTEMS.get(g)
    if sys is None:
        t = minimal_T(g)
        t_ints = [int(c) for c in t.coeffs]
        tg = []
        for row in g.entries:
            tg_row = []
            for e in row:
                prod = (as_ratfn(t) * e).as_poly()
                tg_row.append([int(c) for c in prod.coeffs])
            tg.append(tg_row)
        h1 = [[list(c) for c in row] for row in tg]
        sys = _IntSystem(
            n=g.n, t=t_ints, dt=_ipoly_deriv(list(t_ints)), tg=tg, hs=[h1]
        )
        _SYSTEMS[g] = sys
    return sys


def _min_vp(h, p: int):
    """Minimum p-adic valuation over all coefficients of an integer matrix of
    polynomials; GAUSS_INF when the matrix vanishes."""
    best = None
    for row in h:
        for poly in row:
            for c in poly:
                if c:
                    v = vp_int(c, p)
                    if best is None or v < best:
                        best = v
                        if best == 0:
                            return 0
    return GAUSS_INF if best is None else best


# ---------------------------------------------------------------------------
# exact logarithmic combinations


class ExactLog:
    """Finite sum of rational multiples of log p, kept exact."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        for p, e in (terms or {}).items():
            e = Fraction(e)
            if e:
                clean[p] = e
        object.__setattr__(self, "terms", dict(sorted(clean.items())))

    def __setattr__(self, *a):
        raise AttributeError("ExactLog is immutable")

    @staticmethod
    def single(p: int, e) -> "ExactLog":
        return ExactLog({p: Fraction(e)})

    @staticmethod
    def zero() -> "ExactLog":
        return ExactLog()

    def __add__(self, other: "ExactLog"):
        out = dict(self.terms)
        for p, e in other.terms.items():
            out[p] = out.get(p, Fraction(0)) + e
        return ExactLog(out)

    def __sub__(self, other: "ExactLog"):
        out = dict(self.terms)
        for p, e in other.terms.items():
            out[p] = out.get(p, Fraction(0)) - e
        return ExactLog(out)

    def scale(self, c) -> "ExactLog":
        c = Fraction(c)
        return ExactLog({p: e * c for p, e in self.terms.items()})

    def __eq__(self, other):
        return isinstance(other, ExactLog) and self.terms == other.terms

    def is_zero(self) -> bool:
        return not self.terms

    def to_float(self) -> float:
        return sum(float(e) * math.log(p) for p, e in self.terms.items())

    def __repr__(self):
        if not self.terms:
            return "ExactLog(0)"
        body = " + ".join(f"{e}*log({p})" for p, e in self.terms.items())
        return f"ExactLog({body} = {self.to_float():.6f})"


def exact_log_of_integer(n: int, prime_bound: int) -> ExactLog:
    """log n as an ExactLog; all prime factors must be <= prime_bound."""
    if n <= 0:
        raise ValueError("positive integers only")
    terms = {}
    for p in primes_upto(prime_bound):
        v = vp_int(n, p) if n % p == 0 else 0
        if v:
            terms[p] = Fraction(v)
            n //= p**v
    if n != 1:
        raise ValueError(f"prime factor above the bound remains: {n}")
    return ExactLog(terms)


# ---------------------------------------------------------------------------
# Galochkin trace


@dataclass(frozen=True)
class GalochkinTrace:
    T: Poly
    s_values: tuple[int, ...]
    q: tuple[int, ...]
    log_q_over_s: tuple[float, ...]


def galochkin_trace(g: RatMat, s_max: int) -> GalochkinTrace:
    """q_s = smallest positive integer clearing every coefficient of
    T^m G_m / m! for m <= s; exact integers, incremental lcm."""
    if s_max < 1:
        raise ValueError("s_max must be >= 1")
    sys = cleared_system(g)
    t = minimal_T(g)
    q = 1
    qs, logs = [], []
    fact = 1
    for m in range(1, s_max + 1):
        fact *= m
        for row in sys.h(m):
            for poly in row:
                for c in poly:
                    if c:
                        q = math.lcm(q, fact // math.gcd(fact, abs(c)))
        qs.append(q)
        logs.append(math.log(q) / m if q > 1 else 0.0)
    return GalochkinTrace(
        T=t, s_values=tuple(range(1, s_max + 1)), q=tuple(qs), log_q_over_s=tuple(logs)
    )


# ---------------------------------------------------------------------------
# size, radius, Dwork-Robba, Bombieri


def h_s_p(g: RatMat, s: int, p: int) -> ExactLog:
    """sup over m <= s of log+ |G_m/m!| at p, exact: the exponent is
    max(0, max_m (v_p(m!) - min v_p(H_m)))."""
    sys = cleared_system(g)
    e = 0
    for m in range(1, s + 1):
        mv = _min_vp(sys.h(m), p)
        if is_infinite(mv):
            continue
        e = max(e, kummer_vp_factorial(m, p) - mv)
    return ExactLog.single(p, e) if e else ExactLog.zero()


def size_estimate(g: RatMat, s: int, prime_bound: int) -> ExactLog:
    """Finite truncation of the size: (1/s) * sum over p <= bound of h(s, p).

    Primes above max(s, bad primes of G) contribute nothing and drop out on
    their own since G_m/m! is p-integral there.
    """
    if s < 1:
        raise ValueError("s must be >= 1")
    acc = ExactLog.zero()
    for p in primes_upto(prime_bound):
        acc = acc + h_s_p(g, s, p).scale(Fraction(1, s))
    return acc


def radius_estimate(
    g: RatMat, p: int, s_max: int, s_min: int | None = None
) -> ExactLog:
    """Truncated Hadamard estimate of the inverse generic radius at p:
    log+ (1/R_hat) with R_hat = min over the window of |G_s/s!|^(-1/s).

    The default window is [n, s_max].  The window floor matters: early terms
    can sit far above the eventual liminf, so report-level consumers pass a
    tail window (see bombieri_report).
    """
    sys = cleared_system(g)
    lo = sys.n if s_min is None else max(1, s_min)
    if s_max < lo:
        raise ValueError("window is empty")
    best = Fraction(0)
    for s in range(lo, s_max + 1):
        mv = _min_vp(sys.h(s), p)
        if is_infinite(mv):
            continue
        cand = Fraction(kummer_vp_factorial(s, p) - mv, s)
        if cand > best:
            best = cand
    return ExactLog.single(p, best) if best else ExactLog.zero()


def dwork_robba_check(g: RatMat, p: int, s_max: int) -> list[bool]:
    """Exact valuation form of the derivative bounds for systems:
    v(G_s/s!) >= accolade(s, n-1, p) + min over 0 <= i <= n-1 of v(G_i),
    for s = 1..s_max (G_0 = identity).  Returns one verdict per s.

    Meaningful for n >= 2 systems whose fundamental solutions are analytic
    on the generic unit disk; the n = 1 bound degenerates (v(1/s!) < 0).
    """
    sys = cleared_system(g)
    n = sys.n
    base = 0
    for i in range(1, n):
        mv = _min_vp(sys.h(i), p)
        if not is_infinite(mv):
            base = min(base, mv)
    out = []
    for s in range(1, s_max + 1):
        mv = _min_vp(sys.h(s), p)
        if is_infinite(mv):
            out.append(True)
            continue
        lhs = mv - kummer_vp_factorial(s, p)
        rhs = accolade(s, n - 1, p) + base
        out.append(lhs >= rhs)
    return out


@dataclass(frozen=True)
class SizeRadiusReport:
    n: int
    s_max: int
    prime_bound: int
    h_table: dict
    sigma_hat: ExactLog
    rho_hat: ExactLog
    slack: float
    lower_ok: bool
    upper_ok: bool
    sandwich_ok: bool


def bombieri_report(
    g: RatMat, s: int, prime_bound: int, slack: float = 0.3
) -> SizeRadiusReport:
    """Truncated two-sided comparison of size and inverse-radius sums:
    checks rho_hat <= sigma_hat + slack and sigma_hat <= rho_hat + (n-1) + slack.

    Both quantities truncate limsups, so this is a declared heuristic.  The
    radius side evaluates the Hadamard quotient at the horizon s (window
    [s, s]): early-s terms overshoot the liminf badly for nilpotent systems,
    while the horizon quotient tracks it.
    """
    sys = cleared_system(g)
    n = sys.n
    sigma = size_estimate(g, s, prime_bound)
    rho = ExactLog.zero()
    h_table = {}
    for p in primes_upto(prime_bound):
        rho = rho + radius_estimate(g, p, s, s_min=s)
        hv = h_s_p(g, s, p)
        h_table[p] = hv.terms.get(p, Fraction(0))
    sig_f, rho_f = sigma.to_float(), rho.to_float()
    lower_ok = rho_f <= sig_f + slack
    upper_ok = sig_f <= rho_f + (n - 1) + slack
    return SizeRadiusReport(
        n=n,
        s_max=s,
        prime_bound=prime_bound,
        h_table=h_table,
        sigma_hat=sigma,
        rho_hat=rho,
        slack=slack,
        lower_ok=lower_ok,
        upper_ok=upper_ok,
        sandwich_ok=lower_ok and upper_ok,
    )


def nilpotence_valuation_bound(g: RatMat, p: int, s_upto: int = 3) -> bool:
    """For a system nilpotent mod p, certify v(G_{pns}) >= s for s <= s_upto
    (the sigma read off v(G_{pn}) >= 1).  Runs the cleared recurrence modulo
    p^s_upto so every coefficient stays a machine integer."""
    sys = cleared_system(g)
    n = sys.n
    modulus = p**s_upto
    seq = ClearedSequenceMod(sys.t, sys.tg, modulus)
    for s in range(1, s_upto + 1):
        cur = seq.goto(p * n * s)
        want = p**s
        for row in cur:
            for poly in row:
                for c in poly:
                    if int(c) % want:
                        return False
    return True

"""Type-II Pade approximants, derived approximant towers, and the stacked
determinant test.

Order convention: pade_type2 imposes vanishing of the coefficients of
z^(N+1) .. z^(N+M) of Q*f_i (n*M homogeneous equations in the N+1 unknown
coefficients of Q), so the residual order is at least N+M+1 and in
particular meets the N+M contract of the downstream identities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .diffop import RatMat, TruncatedSeries, gs_sequence
from .errors import InsufficientTruncation, NoSolution
from .exact_arith import Poly, RatFn, as_ratfn
from .growth import minimal_T


def _kernel_basis(rows: list[list[Fraction]], width: int) -> list[list[Fraction]]:
    """Reduced-echelon kernel basis of a rational matrix."""
    mat = [row[:] for row in rows]
    pivots: list[int] = []
    r = 0
    for c in range(width):
        piv = next((i for i in range(r, len(mat)) if mat[i][c]), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = 1 / mat[r][c]
        mat[r] = [x * inv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c]:
                factor = mat[i][c]
                mat[i] = [a - factor * b for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    free = [c for c in range(width) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * width
        vec[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            vec[pc] = -mat[i][fc]
        basis.append(vec)
    return basis


def _normalize_kernel_vector(vec: Sequence[Fraction]) -> list[Fraction]:
    den = math.lcm(*(c.denominator for c in vec))
    ints = [c * den for c in vec]
    g = math.gcd(*(int(c) for c in ints))
    ints = [c / g for c in ints]
    first = next(c for c in ints if c)
    if first < 0:
        ints = [-c for c in ints]
    return ints


def pade_type2(
    f: Sequence[TruncatedSeries], big_n: int, big_m: int
) -> tuple[Poly, list[Poly]]:
    """Common-denominator approximants: nonzero integer Q with deg <= N such
    that Q*f_i - P_i = O(z^(N+M+1)) with P_i the degree-N truncation of Q*f_i.

    The kernel vector is the lexicographically smallest reduced-echelon basis
    vector, denominator-cleared and content-reduced.  NoSolution when the
    system only has Q = 0; InsufficientTruncation when the series are not
    known past z^(N+M)."""
    n = len(f)
    if n == 0 or big_n < 0 or big_m < 0:
        raise ValueError("need at least one component and nonnegative parameters")
    need = big_n + big_m + 1
    if any(s.trunc_order < need for s in f):
        raise InsufficientTruncation(f"series must be known mod z^{need}")
    rows = []
    for comp in f:
        for c in range(big_n + 1, big_n + big_m + 1):
            rows.append([comp[c - k] for k in range(big_n + 1)])
    basis = _kernel_basis(rows, big_n + 1)
    if not basis:
        raise NoSolution(f"{len(rows)} equations in {big_n + 1} unknowns, trivial kernel")
    vec = _normalize_kernel_vector(min(basis))
    q = Poly(vec)
    ps = [Poly(comp.mul_poly(q).coeffs[: big_n + 1]) for comp in f]
    return q, ps


def siegel_bound_report(
    f: Sequence[TruncatedSeries], big_n: int, big_m: int
) -> dict:
    """Height data of the integer order-condition system together with the
    pigeonhole bound (n_unknowns * A)^(m/(n_unknowns - m)); reported only,
    the computed kernel vector is not required to satisfy it."""
    n = len(f)
    need = big_n + big_m + 1
    coeffs = [c for comp in f for c in comp.coeffs[:need]]
    d = math.lcm(*(c.denominator for c in coeffs)) if coeffs else 1
    height = 0
    for comp in f:
        for c in range(big_n + 1, big_n + big_m + 1):
            for k in range(big_n + 1):
                height = max(height, abs(int(comp[c - k] * d)))
    m_eq = n * big_m
    unknowns = big_n + 1
    if unknowns > m_eq:
        bound = float(unknowns * height) ** (m_eq / (unknowns - m_eq)) if height else 0.0
    else:
        bound = float("inf")
    return {
        "equations": m_eq,
        "unknowns": unknowns,
        "height": height,
        "denominator_scale": d,
        "bound": bound,
    }


def residual_order(
    q: Poly,
    ps: Sequence[Poly],
    f: Sequence[TruncatedSeries],
    required: Optional[int] = None,
) -> int:
    """min over i of ord(Q f_i - P_i), capped at the truncation horizon.

    A component that vanishes identically up to the horizon contributes the
    horizon itself.  With ``required`` set, the horizon must reach it."""
    horizon = min(comp.trunc_order for comp in f)
    if required is not None and horizon < required:
        raise InsufficientTruncation(f"horizon {horizon} below required {required}")
    best = horizon
    for comp, p in zip(f, ps):
        res = comp.mul_poly(q) - TruncatedSeries(
            [p[k] for k in range(horizon)]
        )
        v = res.valuation()
        best = min(best, horizon if v is None else v)
    return best


# ---------------------------------------------------------------------------
# derived towers and the stacked determinant


def derived_tower(
    ps: Sequence[Poly], g: RatMat, t: Poly, h_max: int
) -> list[list[Poly]]:
    """[P_0, ..., P_h_max] with P_m = (T^m/m!) (D - G)^m P, all polynomial.

    Iterates the cleared vector W_m = T^m (D-G)^m P through
    W_{m+1} = T W_m' - m T' W_m - (TG) W_m and divides by m!."""
    n = g.n
    if len(ps) != n:
        raise ValueError("vector length must match the system dimension")
    tg = [[(as_ratfn(t) * g.entries[i][j]).as_poly() for j in range(n)] for i in range(n)]
    dt = t.derivative()
    w = [Poly(p.coeffs) for p in ps]
    tower = [list(w)]
    fact = 1
    for m in range(h_max):
        nw = []
        for i in range(n):
            acc = t * w[i].derivative() - (m * dt) * w[i]
            for k in range(n):
                acc = acc - tg[i][k] * w[k]
            nw.append(acc)
        w = nw
        fact *= m + 1
        tower.append([poly * Fraction(1, fact) for poly in w])
    return tower


def poly_det(mat: list[list[Poly]]) -> Poly:
    """Cofactor determinant; matrices here stay tiny."""
    n = len(mat)
    if n == 1:
        return mat[0][0]
    acc = Poly()
    for j in range(n):
        if mat[0][j].is_zero():
            continue
        minor = [[mat[i][k] for k in range(n) if k != j] for i in range(1, n)]
        term = mat[0][j] * poly_det(minor)
        acc = acc + term if j % 2 == 0 else acc - term
    return acc


def shidlovskii_matrix(tower: Sequence[Sequence[Poly]]) -> tuple[list[list[Poly]], Poly]:
    """R_(0) with j-th column P_{j-1}, and its exact determinant."""
    n = len(tower[0])
    if len(tower) < n:
        raise ValueError("tower must contain at least n vectors")
    r0 = [[tower[j][i] for j in range(n)] for i in range(n)]
    return r0, poly_det(r0)


def verify_similileibniz(g: RatMat, ps: Sequence[Poly], s_max: int) -> bool:
    """Exact check in Q(z)^n of the rearranged Leibniz identity
    (G_s/s!) P = sum_j ((-1)^j / ((s-j)! j!)) D^(s-j) (D-G)^j P for s <= s_max."""
    n = g.n
    pvec = [as_ratfn(p) for p in ps]
    gs = gs_sequence(g, s_max)
    # iterated derivatives of (D-G)^j P, filled on demand
    v: list[list[list[RatFn]]] = [[pvec]]
    for j in range(s_max):
        last = v[-1][0]
        nxt = [last[i].derivative() for i in range(n)]
        gv = g.mat_vec(last)
        v.append([[nxt[i] - gv[i] for i in range(n)]])
    for j in range(s_max + 1):
        while len(v[j]) <= s_max - j:
            prev = v[j][-1]
            v[j].append([c.derivative() for c in prev])
    for s in range(1, s_max + 1):
        lhs = gs[s - 1].mat_vec(pvec)
        fact_s = math.factorial(s)
        lhs = [c * Fraction(1, fact_s) for c in lhs]
        rhs = [RatFn.ZERO] * n
        for j in range(s + 1):
            scale = Fraction((-1) ** j, math.factorial(s - j) * math.factorial(j))
            term = v[j][s - j]
            rhs = [rhs[i] + term[i] * scale for i in range(n)]
        if any(lhs[i] != rhs[i] for i in range(n)):
            return False
    return True


@dataclass(frozen=True)
class PadeSystem:
    big_n: int
    big_m: int
    q: Poly
    p: tuple[Poly, ...]
    f: tuple[TruncatedSeries, ...]
    t: Poly
    tower: tuple[tuple[Poly, ...], ...]
    r0: tuple[tuple[Poly, ...], ...]
    delta: Poly
    residual: int
    siegel: dict


def build_pade_system(
    f: Sequence[TruncatedSeries],
    g: RatMat,
    big_n: int,
    big_m: int,
    h_max: Optional[int] = None,
) -> PadeSystem:
    """Full bench run: solve, verify the residual order, derive the tower,
    stack the matrix and take its determinant."""
    n = g.n
    if h_max is None:
        h_max = n - 1
    q, ps = pade_type2(f, big_n, big_m)
    t = minimal_T(g)
    tower = derived_tower(ps, g, t, max(h_max, n - 1))
    r0, delta = shidlovskii_matrix(tower)
    res = residual_order(q, ps, f, required=big_n + big_m + 1)
    return PadeSystem(
        big_n=big_n,
        big_m=big_m,
        q=q,
        p=tuple(ps),
        f=tuple(f),
        t=t,
        tower=tuple(tuple(vec) for vec in tower),
        r0=tuple(tuple(row) for row in r0),
        delta=delta,
        residual=res,
        siegel=siegel_bound_report(f, big_n, big_m),
    )

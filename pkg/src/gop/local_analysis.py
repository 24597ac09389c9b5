"""Singularity classification and local exponent data.

A point is regular singular exactly when every coefficient of the monic
theta-basis form of the translated operator is pole-free at the origin; the
indicial polynomial is then read off by evaluating those coefficients at 0.
Algebraic (non-rational) singular locations are handled as classes cut out
by a squarefree polynomial: the indicial data is computed with coefficients
in Q[x]/(f) and flattened through a resultant, so only exact Q-arithmetic is
ever needed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .diffop import (
    Basis,
    DiffOp,
    INFINITY,
    change_basis,
    cleared_polynomial_coeffs,
    is_infinity,
    monic_theta_coefficients,
    translate_to_point,
)
from .errors import IrregularPoint
from .exact_arith import (
    Poly,
    RatFn,
    as_fraction,
    falling_factorial_poly,
    poly_gcd,
    resultant,
)


@dataclass(frozen=True)
class SingularPoint:
    """Location plus regularity verdict and the D-basis pole profile.

    ``location`` is a Fraction, INFINITY, or a squarefree Poly describing a
    class of conjugate algebraic points.  ``pole_profile`` lists pairs
    (j, pole order of B_j/B_0) in the ordering B_0 D^n + ... + B_n; at
    infinity the entry is the pole order at u = 0 under u = 1/z, so
    regularity reads pole order <= j (finite) or <= -j (infinity).
    """

    location: object
    regular: bool
    pole_profile: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class IndicialData:
    point: SingularPoint
    phi: Optional[Poly]
    rational_exponents: tuple[Fraction, ...]
    nonrational_factors: tuple[Poly, ...]
    apparent_candidate: bool = False


@dataclass(frozen=True)
class OperatorProfile:
    operator: DiffOp
    points: tuple[IndicialData, ...]
    fuchsian: bool
    all_exponents_rational: bool
    katz_consistent: bool


# ---------------------------------------------------------------------------
# rational points and infinity


def _translated_theta_coeffs(l: DiffOp, point) -> list[RatFn]:
    """Monic theta-basis coefficients [A_1..A_n] of the translated operator."""
    return monic_theta_coefficients(translate_to_point(l, point))


def _d_basis_profile(l: DiffOp, point) -> tuple[tuple[int, int], ...]:
    ld = change_basis(l, Basis.D)
    n = ld.order
    lead = ld.coeff(n)
    profile = []
    for j in range(1, n + 1):
        bj = ld.coeff(n - j)
        if bj.is_zero():
            continue
        ratio = bj / lead
        if is_infinity(point):
            order = -ratio.order_at_infinity()
        else:
            order = -ratio.order_at(as_fraction(point))
        profile.append((j, order))
    return tuple(profile)


def fuchs_test(l: DiffOp, point) -> tuple[bool, tuple[tuple[int, int], ...]]:
    """(regular, pole profile of the B_j/B_0 ratios)."""
    coeffs = _translated_theta_coeffs(l, point)
    regular = all(c.is_zero() or c.order_at_zero() >= 0 for c in coeffs)
    return regular, _d_basis_profile(l, point)


def indicial_polynomial(l: DiffOp, point) -> Poly:
    """Degree-n indicial polynomial at a rational point or infinity."""
    coeffs = _translated_theta_coeffs(l, point)
    n = len(coeffs)
    if any(not c.is_zero() and c.order_at_zero() < 0 for c in coeffs):
        raise IrregularPoint(f"point {point!r} is an irregular singularity")
    phi = Poly.x(n)
    for j, a in enumerate(coeffs, start=1):
        if not a.is_zero():
            phi = phi + Poly.x(n - j, a.evaluate(0))
    return phi


def split_rational_roots(phi: Poly) -> tuple[list[Fraction], list[Poly]]:
    """Rational roots with multiplicity, plus leftover monic squarefree
    factors without rational roots (degree <= 3 pieces are genuinely
    irreducible over Q; higher degrees are reported unsplit), repeated per
    multiplicity."""
    rationals: list[Fraction] = []
    leftovers: list[Poly] = []
    if phi.degree < 1:
        return rationals, leftovers
    p = phi.primitive()
    for root, mult in p.rational_roots():
        rationals.extend([root] * mult)
        p = p.exact_div(Poly([-root, 1]) ** mult)
    if p.degree >= 1:
        for g, mult in p.monic().squarefree_decomposition():
            leftovers.extend([g] * mult)
    return sorted(rationals), leftovers


def exponents(l: DiffOp, point) -> tuple[list[Fraction], list[Poly]]:
    """Rational exponents (with multiplicity) and leftover irreducible factors
    of the indicial polynomial at the point."""
    return split_rational_roots(indicial_polynomial(l, point))


# ---------------------------------------------------------------------------
# algebraic classes


def _class_multiplicities(polys: list[Poly], f: Poly) -> list[int]:
    return [p.factor_multiplicity(f) if not p.is_zero() else -1 for p in polys]


def _split_class(polys: list[Poly], f: Poly) -> list[Poly]:
    """Refine f until every coefficient has uniform order along the roots of
    each piece: whenever the cofactor B_j / f^k still shares a factor with f
    the class splits along that gcd.  Degrees strictly drop, so this stops."""
    ks = _class_multiplicities(polys, f)
    for p, k in zip(polys, ks):
        if k < 0:
            continue
        cof = p
        for _ in range(k):
            cof = cof.exact_div(f)
        g = poly_gcd(f, cof)
        if 1 <= g.degree < f.degree:
            return _split_class(polys, g) + _split_class(polys, f.exact_div(g).monic())
    return [f]


def analyze_algebraic_class(l: DiffOp, f: Poly) -> list[IndicialData]:
    """Local data at the conjugate roots of the squarefree polynomial f.

    With e = ord(B_n) along the class and mu = n - e, the unnormalized
    indicial polynomial at a root x of f is

        Phi(x, y) = sum over j with ord(B_j) = j - mu of
                    C_j(x) f'(x)^(j - mu) y(y-1)...(y-j+1)

    where C_j = B_j / f^(ord B_j).  Res_x(f, Phi) collapses the class to a
    single Q-polynomial in y whose root set is the union of the exponent
    sets over the conjugate points.
    """
    polys = cleared_polynomial_coeffs(l)
    n = len(polys) - 1
    out = []
    for piece in _split_class(polys, f.monic()):
        ks = _class_multiplicities(polys, piece)
        e = ks[n]
        regular = all(k < 0 or e - k <= n - j for j, k in enumerate(ks))
        profile = tuple(
            (n - j, e - k) for j, k in enumerate(ks) if k >= 0 and j < n
        )
        point = SingularPoint(location=piece, regular=regular, pole_profile=profile)
        if not regular:
            out.append(IndicialData(point, None, (), ()))
            continue
        mu = n - e
        fp = piece.derivative()
        phi_y = [Poly() for _ in range(n + 1)]
        for j, k in enumerate(ks):
            if k < 0 or k != j - mu:
                continue
            cof = polys[j]
            for _ in range(k):
                cof = cof.exact_div(piece)
            coeff_x = (cof * fp**k) % piece
            ff = falling_factorial_poly(j)
            for d in range(ff.degree + 1):
                if ff[d]:
                    phi_y[d] = phi_y[d] + coeff_x * ff[d]
        r_deg = piece.degree * n
        ys = [Fraction(k) for k in range(r_deg + 1)]
        values = []
        for y0 in ys:
            py = Poly()
            for d, cx in enumerate(phi_y):
                py = py + cx * (y0**d)
            values.append(resultant(piece, py) if not py.is_zero() else Fraction(0))
        r_poly = _interpolate(ys, values)
        rationals, leftovers = split_rational_roots(r_poly)
        out.append(
            IndicialData(point, r_poly.primitive(), tuple(rationals), tuple(leftovers))
        )
    return out


def _interpolate(xs: Sequence[Fraction], ys: Sequence[Fraction]) -> Poly:
    """Lagrange interpolation through (xs[i], ys[i])."""
    acc = Poly()
    for i, (xi, yi) in enumerate(zip(xs, ys)):
        if yi == 0:
            continue
        num = Poly.const(yi)
        den = Fraction(1)
        for j, xj in enumerate(xs):
            if j != i:
                num = num * Poly([-xj, 1])
                den *= xi - xj
        acc = acc + num * (1 / den)
    return acc


# ---------------------------------------------------------------------------
# whole-operator classification


def _apparent_singularity_candidate(l: DiffOp, point, rationals, phi) -> bool:
    """Heuristic flag: all exponents distinct nonnegative integers and a full
    power-series basis exists to the tested order.  Non-conclusive."""
    n = change_basis(l, Basis.D).order
    if len(rationals) != n or phi is None:
        return False
    if any(r.denominator != 1 or r < 0 for r in rationals) or len(set(rationals)) != n:
        return False
    lt = translate_to_point(l, point)
    exps = sorted(int(r) for r in rationals)
    order = exps[-1] + n + 8
    try:
        basis = regular_series_solutions(lt, exps, order)
    except IrregularPoint:
        return False
    return basis is not None


def regular_series_solutions(l: DiffOp, exps: list[int], order: int):
    """Power-series solutions seeded z^e for each e in exps (which must be
    the integer exponents at 0, sorted), or None when a resonance obstruction
    forces a logarithm.  Each solution is a dict exponent -> coefficient."""
    polys = cleared_polynomial_coeffs(l)
    n = len(polys) - 1
    theta_polys = [Poly() for _ in range(n + 1)]
    for j, b in enumerate(polys):
        if b.is_zero():
            continue
        ff = falling_factorial_poly(j)
        zb = b * Poly.x(n - j)
        for k in range(ff.degree + 1):
            if ff[k]:
                theta_polys[k] = theta_polys[k] + zb * ff[k]
    base = min(tp.valuation_at_zero() for tp in theta_polys if not tp.is_zero())
    max_deg = max(tp.degree for tp in theta_polys if not tp.is_zero())
    max_t = max_deg - base
    q_polys = [Poly([tp[base + t] for tp in theta_polys]) for t in range(max_t + 1)]
    if q_polys[0].is_zero():
        raise IrregularPoint("no indicial part at this point")
    solutions = []
    for e in exps:
        a = {e: Fraction(1)}
        for big_k in range(e + 1, order):
            rhs = Fraction(0)
            for t in range(1, max_t + 1):
                prev = a.get(big_k - t, Fraction(0))
                if prev:
                    rhs -= q_polys[t].evaluate(big_k - t) * prev
            q0 = q_polys[0].evaluate(big_k)
            if q0 == 0:
                if rhs != 0:
                    return None
                a[big_k] = Fraction(0)
            else:
                a[big_k] = rhs / q0
        solutions.append(a)
    return solutions


def classify_operator(l: DiffOp) -> OperatorProfile:
    """Full singularity profile: candidate singular locations are the roots
    of the leading coefficient of the cleared D-basis form (rational ones
    individually, the rest grouped into squarefree classes) plus infinity."""
    polys = cleared_polynomial_coeffs(l)
    n = len(polys) - 1
    if n < 1:
        raise ValueError("classification needs order >= 1")
    lead_poly = polys[n]
    points: list[IndicialData] = []
    rational_roots = lead_poly.rational_roots()
    for a, _mult in rational_roots:
        points.append(_indicial_data_at(l, a))
    rest = lead_poly.primitive()
    for root, mult in rational_roots:
        rest = rest.exact_div(Poly([-root, 1]) ** mult)
    if rest.degree >= 1:
        for piece, _m in rest.monic().squarefree_decomposition():
            points.extend(analyze_algebraic_class(l, piece))
    points.append(_indicial_data_at(l, INFINITY))
    fuchsian = all(pt.point.regular for pt in points)
    all_rational = fuchsian and all(
        pt.phi is not None and not pt.nonrational_factors for pt in points
    )
    return OperatorProfile(
        operator=l,
        points=tuple(points),
        fuchsian=fuchsian,
        all_exponents_rational=all_rational,
        katz_consistent=fuchsian and all_rational,
    )


def _indicial_data_at(l: DiffOp, point) -> IndicialData:
    regular, profile = fuchs_test(l, point)
    loc = INFINITY if is_infinity(point) else as_fraction(point)
    sp = SingularPoint(location=loc, regular=regular, pole_profile=profile)
    if not regular:
        return IndicialData(sp, None, (), ())
    phi = indicial_polynomial(l, point)
    rationals, leftovers = split_rational_roots(phi)
    apparent = False
    if not is_infinity(point) and not leftovers:
        apparent = _apparent_singularity_candidate(l, point, rationals, phi)
    return IndicialData(sp, phi, tuple(rationals), tuple(leftovers), apparent)

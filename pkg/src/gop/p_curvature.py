"""p-curvature matrices, nilpotence tests, and the global prime scan.

The p-curvature of y' = Gy at a good prime is G_p, the p-th derived matrix
of the reduced system, computed entirely in characteristic p through the
cleared polynomial recurrence.  Nilpotence has two independent routes: the
matrix power test (G_p)^n = 0 and right division of D^(pn) by the reduced
operator; the scan records both when an operator is available.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

from .diffop import Basis, DiffOp, RatMat, change_basis, companion, monic_theta_coefficients
from .errors import BadPrime, IrregularPoint
from .exact_arith import gauss_valuation
from .growth import cleared_system
from .modp import (
    ClearedSequenceMod,
    FpMat_entries_check,
    FpPoly,
    FpRatFn,
    polymat_mul_mod,
    reduce_ratfn_mod_p,
)


@dataclass(frozen=True)
class FpMat:
    """Square matrix over F_p(z)."""

    prime: int
    entries: tuple[tuple[FpRatFn, ...], ...]

    @property
    def n(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def is_zero(self) -> bool:
        return all(e.is_zero() for row in self.entries for e in row)

    def __mul__(self, other: "FpMat") -> "FpMat":
        n = self.n
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = FpRatFn.const(self.prime, 0)
                for k in range(n):
                    a, b = self.entries[i][k], other.entries[k][j]
                    if not a.is_zero() and not b.is_zero():
                        acc = acc + a * b
                row.append(acc)
            rows.append(tuple(row))
        return FpMat(self.prime, tuple(rows))


def reduce_system(g: RatMat, p: int) -> FpMat:
    """Entrywise reduction mod p; BadPrime when any entry has negative Gauss
    valuation."""
    rows = []
    for row in g.entries:
        rows.append(tuple(reduce_ratfn_mod_p(e, p) for e in row))
    return FpMat(p, tuple(rows))


def _check_reducible(g: RatMat, p: int):
    for row in g.entries:
        for e in row:
            if not e.is_zero() and gauss_valuation(e, p) < 0:
                raise BadPrime(p, "entry with negative Gauss valuation")


def p_curvature(g: RatMat, p: int) -> FpMat:
    """G_p of the reduced system, iterated in characteristic p.

    Uses the cleared representation H_s = T^s G_s mod p (T has unit content,
    so it stays nonzero mod p) and divides by T^p at the end."""
    _check_reducible(g, p)
    sys = cleared_system(g)
    seq = ClearedSequenceMod(sys.t, sys.tg, p)
    hbar = seq.goto(p)
    tbar = FpPoly(p, sys.t)
    tpow = tbar**p
    rows = []
    for row in hbar:
        rows.append(
            tuple(FpRatFn(FpPoly(p, [int(c) for c in poly]), tpow) for poly in row)
        )
    return FpMat(p, tuple(rows))


def is_nilpotent(m: FpMat) -> tuple[bool, Optional[int]]:
    """(True, least k with M^k = 0) or (False, None); k <= n suffices."""
    if m.is_zero():
        return True, 1
    power = m
    for k in range(2, m.n + 1):
        power = power * m
        if power.is_zero():
            return True, k
    return False, None


def operator_nilpotence_by_division(l: DiffOp, p: int) -> bool:
    """True iff D^(p*ord L) is right-divisible by the reduction of L mod p.

    Maintains the reduction vector of D^k modulo L_p, stepping k -> k+1 by
    one symbolic derivative plus the top-degree elimination."""
    ld = change_basis(l, Basis.D).monic()
    n = ld.order
    if n < 1:
        raise ValueError("order must be >= 1")
    for c in ld.coeffs:
        if not c.is_zero() and gauss_valuation(c, p) < 0:
            raise BadPrime(p, "operator coefficient with negative Gauss valuation")
    a = [reduce_ratfn_mod_p(ld.coeff(i), p) for i in range(n)]
    r = [FpRatFn.const(p, 1 if i == 0 else 0) for i in range(n)]
    one = FpRatFn.const(p, 1)
    for _ in range(p * n):
        top = r[n - 1]
        new = [r[i - 1] if i else FpRatFn.const(p, 0) for i in range(n)]
        new = [new[i] + r[i].derivative() for i in range(n)]
        if not top.is_zero():
            for i in range(n):
                if not a[i].is_zero():
                    new[i] = new[i] - top * a[i]
        r = new
    return all(c.is_zero() for c in r)


def katz_honda_check(l: DiffOp, p: int) -> bool:
    """True iff the mod-p indicial polynomial at 0 splits over F_p.

    Necessary for nilpotence when 0 is regular singular for the reduction;
    raises IrregularPoint when the reduced theta coefficients have a pole."""
    coeffs = monic_theta_coefficients(l)
    n = len(coeffs)
    reduced = [reduce_ratfn_mod_p(c, p) for c in coeffs]
    if any(c.has_pole_at_zero() for c in reduced):
        raise IrregularPoint("0 is not regular singular for the reduction")
    phi = [0] * (n + 1)
    phi[n] = 1
    for j, c in enumerate(reduced, start=1):
        phi[n - j] = 0 if c.is_zero() else c.evaluate(0)
    poly = FpPoly(p, phi)
    for a in range(p):
        lin = FpPoly(p, [-a, 1])
        while not poly.is_zero() and poly.evaluate(a) == 0:
            poly = poly // lin
    return poly.degree == 0


def derived_sequence_mod(g: RatMat, p: int, s_max: int) -> list[FpMat]:
    """[(G mod p)_1, ..., (G mod p)_s_max] computed natively mod p."""
    _check_reducible(g, p)
    sys = cleared_system(g)
    seq = ClearedSequenceMod(sys.t, sys.tg, p)
    tbar = FpPoly(p, sys.t)
    out = []
    for s in range(1, s_max + 1):
        hbar = seq.goto(s)
        tpow = tbar**s
        rows = tuple(
            tuple(FpRatFn(FpPoly(p, [int(c) for c in poly]), tpow) for poly in row)
            for row in hbar
        )
        out.append(FpMat(p, rows))
    return out


def relation_gp_power_holds(g: RatMat, p: int, k_max: int) -> bool:
    """G_{pk} mod p == (G_p mod p)^k for k <= k_max, compared through the
    cleared polynomial forms (H_{pk} == H_p^k since both carry T^(pk))."""
    _check_reducible(g, p)
    sys = cleared_system(g)
    seq = ClearedSequenceMod(sys.t, sys.tg, p)
    hp = [[c.copy() for c in row] for row in seq.goto(p)]
    power = hp
    for k in range(2, k_max + 1):
        power = polymat_mul_mod(power, hp, p)
        hpk = seq.goto(p * k)
        if not FpMat_entries_check(power, hpk):
            return False
    return True


# ---------------------------------------------------------------------------
# scans


@dataclass(frozen=True)
class PCurvatureReport:
    prime: int
    status: str  # "Nilpotent" | "NonNilpotent" | "BadPrime"
    nilpotence_index: Optional[int]
    method_agreement: bool
    detail: str = ""


@dataclass(frozen=True)
class GlobalScan:
    subject: str
    primes: tuple[int, ...]
    reports: tuple[PCurvatureReport, ...]
    verdict: str  # "AllGoodNilpotent" | "FoundNonNilpotent" | "Mixed" | "NoGoodPrime"


def _thread_count() -> int:
    try:
        return max(1, int(os.environ.get("GOP_THREADS", "1")))
    except ValueError:
        return 1


def prime_report(g: RatMat, p: int, operator: Optional[DiffOp] = None) -> PCurvatureReport:
    try:
        gp = p_curvature(g, p)
    except BadPrime as exc:
        return PCurvatureReport(p, "BadPrime", None, True, str(exc))
    nil, index = is_nilpotent(gp)
    agreement = True
    if operator is not None:
        try:
            agreement = operator_nilpotence_by_division(operator, p) == nil
        except BadPrime as exc:
            return PCurvatureReport(p, "BadPrime", None, True, str(exc))
    return PCurvatureReport(
        p, "Nilpotent" if nil else "NonNilpotent", index, agreement
    )


def global_scan(subject, primes: Sequence[int], subject_id: str = "") -> GlobalScan:
    """Per-prime p-curvature reports and an aggregate verdict.

    ``subject`` is a system matrix or an operator; operators additionally run
    the division test and record method agreement.  Bad primes are excluded
    from the verdict, mirroring the finite exceptional set of a scan."""
    if isinstance(subject, DiffOp):
        operator, g = subject, companion(subject)
    else:
        operator, g = None, subject
    primes = tuple(sorted(primes))
    workers = _thread_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(lambda p: prime_report(g, p, operator), primes))
    else:
        reports = [prime_report(g, p, operator) for p in primes]
    good = [r for r in reports if r.status != "BadPrime"]
    if not good:
        verdict = "NoGoodPrime"
    elif all(r.status == "Nilpotent" for r in good):
        verdict = "AllGoodNilpotent"
    elif all(r.status == "NonNilpotent" for r in good):
        verdict = "FoundNonNilpotent"
    else:
        verdict = "Mixed"
    return GlobalScan(subject_id, primes, tuple(reports), verdict)

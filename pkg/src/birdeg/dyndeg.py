"""Dynamical degrees: estimates, identity checks, the root a, and profiles.

Symbolic entries use the two constants of the map ψ built from A_SUG:
λ = λ₁(ψ), known only to lie in [291, 669], and a = λ₂(ψ), the real root
near 174.666 of a degree-9 integer polynomial.  λ is never given a numeric
value; everything that depends on it is an interval.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from mpmath import iv

from .errors import NotUnimodular, SingularMatrix
from .monomial import (
    IntMatrix,
    clearing_rows,
    det,
    exterior_power,
    inverse_unimodular,
    monomial_dyndeg_profile,
    spectral_radius,
)
from .profiles import (
    DynDegProfile,
    Monom,
    compare_symbols,
    identity_profile,
    max_merge_profile,
    symbolic_profile,
)
from .projmap import DegreeSequence, RationalMap, iterate_degrees

__all__ = [
    "A_POLY",
    "LAMBDA_RANGE",
    "RootCertificate",
    "IdentityReport",
    "Lambda1Report",
    "root_a",
    "cited_intervals",
    "cited_psi_profile",
    "tower_profile",
    "max_merge_profile",
    "identity_profile",
    "check_duality",
    "check_product",
    "check_conjugacy",
    "lambda1_report",
    "monomial_degree_sequence",
    "random_unimodular",
    "lambda_exceeds_a",
    "separation_from_powers_of_a",
]

# a^9 - 173a^8 - 291a^7 - 2a^6 + 332a^5 + 334a^4 + 238a^3 + 0a^2 + 75a + 75
A_POLY = (1, -173, -291, -2, 332, 334, 238, 0, 75, 75)
A_BRACKET = (174, 175)
PRINTED_A = 174.6660
LAMBDA_RANGE = (291, 669)


# the root a ---------------------------------------------------------------------


@dataclass(frozen=True)
class RootCertificate:
    coefficients: tuple
    lo: Fraction
    hi: Fraction
    steps: int

    @property
    def value(self) -> float:
        return float((self.lo + self.hi) / 2)

    @property
    def width(self) -> float:
        return float(self.hi - self.lo)

    def sign_change(self) -> bool:
        return _horner(self.coefficients, self.lo) * _horner(self.coefficients, self.hi) < 0

    def to_dict(self):
        return {
            "coefficients": list(self.coefficients),
            "bracket": [str(self.lo), str(self.hi)],
            "value": self.value,
            "width": self.width,
            "steps": self.steps,
            "sign_change": self.sign_change(),
        }


def _horner(coeffs, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in coeffs:
        acc = acc * x + c
    return acc


def root_a(width: float = 1e-6, coefficients=A_POLY, bracket=A_BRACKET) -> RootCertificate:
    """Bisect the sign change of the degree-9 polynomial with exact rationals."""
    lo, hi = Fraction(bracket[0]), Fraction(bracket[1])
    flo, fhi = _horner(coefficients, lo), _horner(coefficients, hi)
    if flo == 0:
        return RootCertificate(tuple(coefficients), lo, lo, 0)
    if fhi == 0:
        return RootCertificate(tuple(coefficients), hi, hi, 0)
    if (flo > 0) == (fhi > 0):
        raise ValueError(f"no sign change on [{lo}, {hi}]: check the coefficients")
    target = Fraction(width)
    steps = 0
    while hi - lo > target:
        mid = (lo + hi) / 2
        fm = _horner(coefficients, mid)
        steps += 1
        if fm == 0:
            return RootCertificate(tuple(coefficients), mid, mid, steps)
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi, fhi = mid, fm
        if (flo > 0) == (fhi > 0):
            raise AssertionError("bisection lost its sign change")
    return RootCertificate(tuple(coefficients), lo, hi, steps)


@lru_cache(maxsize=1)
def cited_intervals():
    """(λ, a) as mpmath intervals: [291, 669] and the certified bracket of a."""
    cert = root_a()
    lam = iv.mpf([LAMBDA_RANGE[0], LAMBDA_RANGE[1]])
    lo = iv.mpf(cert.lo.numerator) / cert.lo.denominator
    hi = iv.mpf(cert.hi.numerator) / cert.hi.denominator
    return lam, iv.mpf([lo.a, hi.b])


def lambda_exceeds_a() -> bool:
    """Interval disjointness λ > a used when ordering products."""
    lam, a = cited_intervals()
    return bool(lam.a > a.b)


def separation_from_powers_of_a(profile: DynDegProfile):
    """For every entry involving λ, the k with a^k < entry < a^(k+1).

    Returns a list of (p, symbol, k); raises ValueError when an entry's
    interval meets some power of a.
    """
    lam, a = cited_intervals()
    out = []
    for p, e in enumerate(profile.entries):
        if e.symbol is None or e.symbol.lam == 0:
            continue
        x = e.interval
        k = 0
        while (a ** (k + 1)).b < x.a:
            k += 1
        below, above = a ** k, a ** (k + 1)
        if not (below.b < x.a and x.b < above.a):
            raise ValueError(f"entry {p} ({e.symbol}) meets a power of a")
        out.append((p, str(e.symbol), k))
    return out


# profiles -----------------------------------------------------------------------


def cited_psi_profile() -> DynDegProfile:
    lam, a = cited_intervals()
    return symbolic_profile([Monom(), Monom(1, 0), Monom(0, 1), Monom()], lam, a, "psi", "cited")


def tower_profile(d: int) -> DynDegProfile:
    """(1, λ, aλ, λ², ..., λ², aλ, λ, 1) on P^d, d >= 6."""
    if d < 6:
        raise ValueError("the tower profile starts at d = 6")
    lam, a = cited_intervals()
    one, L, aL, L2 = Monom(), Monom(1, 0), Monom(1, 1), Monom(2, 0)
    monoms = [one, L, aL] + [L2] * (d - 5) + [aL, L, one]
    prof = symbolic_profile(monoms, lam, a, f"tower(P{d})", "cited")
    prof.notes["lambda"] = list(LAMBDA_RANGE)
    prof.notes["a"] = [float(a.a), float(a.b)]
    return prof


# identity checks ----------------------------------------------------------------


@dataclass
class IdentityReport:
    name: str
    inputs: dict
    rows: list = field(default_factory=list)  # (index, lhs, rhs, relative difference, passed)
    tolerance: float = 1e-6

    @property
    def passed(self) -> bool:
        return all(r[4] for r in self.rows)

    def add(self, index, lhs: float, rhs: float):
        rel = abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1e-300)
        self.rows.append((index, lhs, rhs, rel, rel <= self.tolerance))

    def to_dict(self):
        return {
            "check": self.name,
            "inputs": self.inputs,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "provenance": "exact-monomial oracle",
            "rows": [
                {"index": i, "lhs": a, "rhs": b, "relative_difference": r, "passed": ok}
                for i, a, b, r, ok in self.rows
            ],
        }


def _m(M) -> IntMatrix:
    return M if isinstance(M, IntMatrix) else IntMatrix(M)


def check_duality(M, tol: float = 1e-6) -> IdentityReport:
    """λ_p(M) against λ_{n-p}(M⁻¹) for all p."""
    M = _m(M)
    if det(M) not in (1, -1):
        raise NotUnimodular("duality check needs |det M| = 1")
    prof = monomial_dyndeg_profile(M)
    inv = monomial_dyndeg_profile(inverse_unimodular(M))
    rep = IdentityReport("duality", {"M": M.tolist()}, tolerance=tol)
    n = M.n
    for p in range(n + 1):
        rep.add(p, prof[p].value, inv[n - p].value)
    return rep


def check_product(M1, M2, tol: float = 1e-6) -> IdentityReport:
    """ρ(Λ^l(M1 ⊕ M2)) against max_{p+q=l} ρ(Λ^p M1) ρ(Λ^q M2)."""
    M1, M2 = _m(M1), _m(M2)
    if det(M1) == 0 or det(M2) == 0:
        raise SingularMatrix("product check needs invertible matrices")
    p1, p2 = monomial_dyndeg_profile(M1), monomial_dyndeg_profile(M2)
    merged = max_merge_profile(p1, p2)
    S = M1.direct_sum(M2)
    rep = IdentityReport("product", {"M1": M1.tolist(), "M2": M2.tolist()}, tolerance=tol)
    for l in range(S.n + 1):
        lhs = 1.0 if l == 0 else spectral_radius(exterior_power(S, l)).value
        rep.add(l, lhs, merged[l].value)
    return rep


def check_conjugacy(M, C, tol: float = 1e-6) -> IdentityReport:
    """ρ(Λ^p(C M C⁻¹)) against ρ(Λ^p M)."""
    M, C = _m(M), _m(C)
    if det(C) not in (1, -1):
        raise NotUnimodular("conjugating matrix must be unimodular")
    if det(M) == 0:
        raise SingularMatrix("conjugacy check needs det M != 0")
    N = C @ M @ inverse_unimodular(C)
    a, b = monomial_dyndeg_profile(N), monomial_dyndeg_profile(M)
    rep = IdentityReport("conjugacy", {"M": M.tolist(), "C": C.tolist()}, tolerance=tol)
    for p in range(M.n + 1):
        rep.add(p, a[p].value, b[p].value)
    return rep


def random_unimodular(n: int, rng: random.Random, steps: int | None = None, max_entry: int = 9) -> IntMatrix:
    """Product of random elementary operations, a permutation and signs."""
    while True:
        rows = [[int(i == j) for j in range(n)] for i in range(n)]
        for _ in range(steps or 3 * n if n > 1 else 0):
            i, j = rng.sample(range(n), 2)
            c = rng.choice((-2, -1, 1, 2))
            rows[i] = [x + c * y for x, y in zip(rows[i], rows[j])]
        rng.shuffle(rows)
        for r in rows:
            if rng.random() < 0.5:
                r[:] = [-x for x in r]
        if max(abs(x) for r in rows for x in r) <= max_entry:
            return IntMatrix(rows)


def random_unimodular_box(n: int, rng: random.Random, bound: int = 5) -> IntMatrix:
    """Uniform over matrices with entries in [-bound, bound] and det ±1."""
    while True:
        M = IntMatrix([[rng.randint(-bound, bound) for _ in range(n)] for _ in range(n)])
        if det(M) in (1, -1):
            return M


# degree growth ------------------------------------------------------------------


@dataclass
class Lambda1Report:
    sequence: DegreeSequence
    cited_interval: tuple | None = None
    commentary: list = field(default_factory=list)

    @property
    def in_interval(self) -> bool | None:
        if self.cited_interval is None or not self.sequence.entries:
            return None
        d = self.sequence.degrees[0]
        return self.cited_interval[0] <= d <= self.cited_interval[1]

    def to_dict(self):
        out = self.sequence.to_dict()
        out["cited_interval"] = list(self.cited_interval) if self.cited_interval else None
        out["degree_in_cited_interval"] = self.in_interval
        out["commentary"] = self.commentary
        return out


def lambda1_report(f: RationalMap, max_n: int = 1, cited_interval=None,
                   max_terms: int | None = None, max_degree: int | None = None) -> Lambda1Report:
    """Degree sequence of f plus consistency notes.

    With ``cited_interval=(lo, hi)`` the first degree must lie in it, since
    λ₁ <= deg(f) and deg(f) is bounded by the construction.
    """
    from .errors import GuardExceeded

    try:
        seq = iterate_degrees(f, max_n, max_terms, max_degree)
        notes = []
    except GuardExceeded as exc:
        seq = exc.partial or DegreeSequence()
        notes = [f"stopped early: {exc}"]
    rep = Lambda1Report(seq, tuple(cited_interval) if cited_interval else None, notes)
    if seq.entries:
        rep.commentary.append(f"upper bound min deg(f^n)^(1/n) = {seq.upper_bound:.9g}")
        if rep.in_interval is not None:
            rep.commentary.append(
                f"deg(f) = {seq.degrees[0]} {'lies in' if rep.in_interval else 'is outside'} "
                f"[{cited_interval[0]}, {cited_interval[1]}]"
            )
    return rep


def monomial_degree_sequence(M, max_degree: int = 10**6, max_n: int = 2000) -> DegreeSequence:
    """deg(h_{M^n}) from the clearing formula, while the degree stays <= max_degree."""
    M = _m(M)
    if det(M) == 0:
        raise SingularMatrix("degree sequence needs det M != 0")
    seq = DegreeSequence()
    P = M
    for n in range(1, max_n + 1):
        D = clearing_rows(P)[1]
        if D > max_degree:
            seq.truncated = f"deg at n={n} exceeds {max_degree}"
            break
        seq.append(n, ((D,),), D)
        P = P @ M
    return seq


def symbol_order(profile: DynDegProfile):
    """Pairwise order of adjacent symbolic entries (for reports)."""
    lam, a = cited_intervals()
    out = []
    for x, y in zip(profile.entries, profile.entries[1:]):
        out.append(compare_symbols(x.symbol, y.symbol, lam, a))
    return out

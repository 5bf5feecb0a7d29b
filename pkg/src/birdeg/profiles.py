"""Dynamical-degree profiles: per-p entries with provenance.

Entries come in three kinds:

``exact-monomial``
    a numeric value with a certified relative error (spectral radius of an
    exterior power of an integer matrix);
``degree-estimate``
    an upper bound read off a degree sequence;
``cited-symbol``
    a monomial λ^i a^j in the two constants attached to the map ψ,
    together with an enclosing interval (λ in [291, 669], a a certified root).

Merging profiles of a product map takes, for every total index l, the
maximum over p + q = l of the entrywise products.  For symbols the maximum
is decided by comparing intervals after cancelling common factors, and an
undecidable comparison is an error rather than a guess.
"""

from __future__ import annotations

from dataclasses import dataclass, field


EXACT = "exact-monomial"
ESTIMATE = "degree-estimate"
CITED = "cited-symbol"

_SUP = str.maketrans("0123456789", "⁰¹²³⁴⁵⁶⁷⁸⁹")


@dataclass(frozen=True, order=True)
class Monom:
    """λ^lam · a^a as a formal monomial."""

    lam: int = 0
    a: int = 0

    def __mul__(self, other: "Monom") -> "Monom":
        return Monom(self.lam + other.lam, self.a + other.a)

    def __str__(self):
        if not self.lam and not self.a:
            return "1"

        def part(sym, e):
            if not e:
                return ""
            return sym if e == 1 else sym + str(e).translate(_SUP)

        return part("a", self.a) + part("λ", self.lam)

    def interval(self, lam_iv, a_iv):
        return lam_iv ** self.lam * a_iv ** self.a

    @classmethod
    def parse(cls, text: str) -> "Monom":
        """Inverse of ``str``; accepts e.g. ``1``, ``λ``, ``aλ``, ``λ²``."""
        if text == "1":
            return cls()
        back = str.maketrans("⁰¹²³⁴⁵⁶⁷⁸⁹", "0123456789")
        lam = a = 0
        i = 0
        while i < len(text):
            sym = text[i]
            i += 1
            j = i
            while j < len(text) and text[j] in "⁰¹²³⁴⁵⁶⁷⁸⁹":
                j += 1
            e = int(text[i:j].translate(back)) if j > i else 1
            i = j
            if sym == "λ":
                lam += e
            elif sym == "a":
                a += e
            else:
                raise ValueError(f"unknown symbol {sym!r} in {text!r}")
        return cls(lam, a)


@dataclass(frozen=True)
class ProfileEntry:
    kind: str
    value: float | None = None
    error: float = 0.0
    symbol: Monom | None = None
    interval: object = None  # mpmath iv.mpf for cited symbols
    provenance: str = ""

    @property
    def bounds(self) -> tuple[float, float]:
        if self.interval is not None:
            return float(self.interval.a), float(self.interval.b)
        lo = self.value * (1 - self.error)
        hi = self.value * (1 + self.error)
        return lo, hi

    def is_exact_one(self) -> bool:
        return self.kind == EXACT and self.value == 1 and self.error == 0

    def label(self) -> str:
        if self.symbol is not None:
            return str(self.symbol)
        return f"{self.value:.9g}"

    def to_dict(self):
        out = {"kind": self.kind, "provenance": self.provenance}
        if self.symbol is not None:
            out["symbol"] = str(self.symbol)
        if self.value is not None:
            out["value"] = self.value
            out["relative_error"] = self.error
        if self.interval is not None:
            out["interval"] = list(self.bounds)
        return out


@dataclass
class DynDegProfile:
    entries: tuple
    label: str = ""
    notes: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, p):
        return self.entries[p]

    @property
    def dim(self) -> int:
        return len(self.entries) - 1

    def symbols(self) -> tuple:
        return tuple(e.symbol for e in self.entries)

    def values(self) -> tuple:
        return tuple(e.value for e in self.entries)

    def reversed(self) -> "DynDegProfile":
        return DynDegProfile(tuple(reversed(self.entries)), self.label + " reversed")

    def to_dict(self):
        return {"label": self.label, "entries": [e.to_dict() for e in self.entries], "notes": self.notes}


def exact_entry(value: float, error: float, provenance: str = "spectral radius of exterior power") -> ProfileEntry:
    return ProfileEntry(EXACT, value=float(value), error=float(error), provenance=provenance)


def symbol_entry(m: Monom, lam_iv, a_iv, provenance: str = "cited") -> ProfileEntry:
    return ProfileEntry(CITED, symbol=m, interval=m.interval(lam_iv, a_iv), provenance=provenance)


def identity_profile(n: int) -> DynDegProfile:
    """All ones: the profile of the identity on an n-dimensional space."""
    return DynDegProfile(tuple(exact_entry(1, 0, "identity") for _ in range(n + 1)), f"id(P{n})")


def symbolic_profile(monoms, lam_iv, a_iv, label="", provenance="cited") -> DynDegProfile:
    return DynDegProfile(tuple(symbol_entry(m, lam_iv, a_iv, provenance) for m in monoms), label)


class UndecidedComparison(ValueError):
    pass


def compare_symbols(m1: Monom, m2: Monom, lam_iv, a_iv) -> int:
    """Sign of m1 - m2 for positive λ, a, decided by interval disjointness."""
    if m1 == m2:
        return 0
    lo_lam, lo_a = min(m1.lam, m2.lam), min(m1.a, m2.a)
    r1 = Monom(m1.lam - lo_lam, m1.a - lo_a).interval(lam_iv, a_iv)
    r2 = Monom(m2.lam - lo_lam, m2.a - lo_a).interval(lam_iv, a_iv)
    if r1.a > r2.b:
        return 1
    if r2.a > r1.b:
        return -1
    raise UndecidedComparison(f"cannot order {m1} and {m2} with the given intervals")


def _symbolic(e: ProfileEntry, lam_iv, a_iv) -> ProfileEntry:
    if e.symbol is not None:
        return e
    if e.is_exact_one():
        return symbol_entry(Monom(), lam_iv, a_iv, e.provenance)
    raise ValueError("cannot mix numeric and symbolic entries other than exact ones")


def max_merge_profile(p1: DynDegProfile, p2: DynDegProfile | None = None,
                      lam_iv=None, a_iv=None) -> DynDegProfile:
    """Profile of a product map: entry l = max over p+q=l of p1[p]*p2[q].

    ``p2=None`` means the identity on P^1, which gives the list
    max(λ_{l-1}, λ_l).
    """
    if p2 is None:
        p2 = identity_profile(1)
    symbolic = any(e.symbol is not None for e in p1.entries + p2.entries)
    n = p1.dim + p2.dim
    out = []
    if not symbolic:
        for l in range(n + 1):
            best = None
            for p in range(max(0, l - p2.dim), min(l, p1.dim) + 1):
                x, y = p1[p], p2[l - p]
                val = x.value * y.value
                err = (1 + x.error) * (1 + y.error) - 1
                if best is None or val > best[0]:
                    best = (val, err)
            out.append(exact_entry(best[0], best[1], "product rule"))
        return DynDegProfile(tuple(out), f"{p1.label} x {p2.label}")
    if lam_iv is None or a_iv is None:
        lam_iv, a_iv = _intervals_of(p1, p2)
    s1 = [_symbolic(e, lam_iv, a_iv) for e in p1.entries]
    s2 = [_symbolic(e, lam_iv, a_iv) for e in p2.entries]
    for l in range(n + 1):
        cands = sorted({s1[p].symbol * s2[l - p].symbol
                        for p in range(max(0, l - p2.dim), min(l, p1.dim) + 1)})
        best = cands[0]
        for m in cands[1:]:
            if compare_symbols(m, best, lam_iv, a_iv) > 0:
                best = m
        # the winner must beat every candidate, not just the running maximum
        for m in cands:
            if m != best and compare_symbols(best, m, lam_iv, a_iv) <= 0:
                raise UndecidedComparison(f"no strict maximum among {[str(c) for c in cands]}")
        out.append(symbol_entry(best, lam_iv, a_iv, "product rule on cited symbols"))
    return DynDegProfile(tuple(out), f"{p1.label} x {p2.label}")


def _intervals_of(*profiles):
    from .dyndeg import cited_intervals

    return cited_intervals()

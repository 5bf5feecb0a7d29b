"""Builders for the explicit birational maps.

* ``bdjk_map(A)``: f = L_{B⁻¹}∘h_{-I}∘L_B∘h_A on P^d with inverse
  h_{A⁻¹}∘L_{B⁻¹}∘h_{-I}∘L_B.
* ``slice_map(n0, n1)``: [x0y0 : ... : x_{n0}y0 : x_{n0}y1 : ... : x_{n0}y_{n1}]
  from P^{n0} x P^{n1} to P^{n0+n1}; Φ is ``slice_map(3, 3)`` and the
  inductive step h is ``slice_map(n0, 1)``.
* ``conjugate`` and ``tower`` combine them: Ψ = Φ∘(ψ x ψ⁻¹)∘Φ⁻¹ and
  g' = h∘(g x id)∘h⁻¹.

Every builder returns a ``NamedConstruction`` whose inverse has been
certified; a failing certificate raises ``CertificateFailure``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .errors import CertificateFailure, GuardExceeded, NotUnimodular, SingularMatrix
from .monomial import (
    IntMatrix,
    adjugate,
    det,
    inverse_unimodular,
    linear_map,
    monomial_degree,
    spectral_radius,
    to_projective,
)
from .polyring import BlockShape, Polynomial
from .projmap import (
    InverseCertificate,
    RationalMap,
    certify_inverse,
    compose_all,
    map_to_dict,
    normalize,
    product,
)

A_BDJK = IntMatrix([[-3, -14, -12], [4, 11, 6], [-2, -4, -1]])
A_SUG = IntMatrix([[56, -19, -17], [-16, 6, 5], [207, -71, -63]])


@dataclass
class NamedConstruction:
    name: str
    map: RationalMap
    inverse: RationalMap
    certificate: InverseCertificate
    notes: dict = field(default_factory=dict)
    profile: object = None

    @property
    def source(self) -> BlockShape:
        return self.map.source

    @property
    def target(self) -> BlockShape:
        return self.map.target

    def degree(self):
        """Degree of the map, or None if it is too large to expand."""
        return self.map.degree if self.map.try_expand() else None

    def to_dict(self) -> dict:
        doc = {
            "name": self.name,
            "notes": self.notes,
            "map": map_to_dict(self.map),
            "inverse": map_to_dict(self.inverse),
            "certificate": self.certificate.to_dict(),
        }
        if self.profile is not None:
            doc["profile"] = self.profile.to_dict()
        return doc


def _certified(name, f, g, notes, profile=None) -> NamedConstruction:
    cert = certify_inverse(f, g)
    if not cert.passed:
        raise CertificateFailure(f"{name}: inverse certificate failed ({cert.cause})")
    f.label = f.label or name
    g.label = g.label or name + "^-1"
    return NamedConstruction(name, f, g, cert, notes, profile)


def _expand_quietly(m: RationalMap) -> RationalMap:
    m.try_expand()
    return m


# the matrix B -------------------------------------------------------------------


def matrix_B(d: int) -> IntMatrix:
    """(d+1)x(d+1) sign pattern: +1 on the diagonal, alternating away from it.

    Above the diagonal the entry is (-1)^(j-i); below it, (-1)^(i-j-1), so the
    first subdiagonal is +1 as in the displayed 4x4 case.
    """
    if d < 1:
        raise ValueError("d must be at least 1")
    n = d + 1
    return IntMatrix([[(-1) ** (j - i) if j >= i else (-1) ** (i - j - 1) for j in range(n)] for i in range(n)])


def cremona(d: int) -> RationalMap:
    """The standard involution h_{-I} on P^d."""
    return to_projective(-IntMatrix.identity(d))


def bdjk_map(A, d: int | None = None, name: str = "f") -> NamedConstruction:
    """f = L_{B⁻¹}∘h_{-I}∘L_B∘h_A and its closed-form inverse."""
    A = A if isinstance(A, IntMatrix) else IntMatrix(A)
    if d is not None and d != A.n:
        raise ValueError(f"A is {A.n}x{A.n}, expected d = {d}")
    d = A.n
    if det(A) not in (1, -1):
        raise NotUnimodular(f"det(A) = {det(A)}")
    B = matrix_B(d)
    dB = det(B)
    if dB == 0:
        raise SingularMatrix(f"B is singular for d = {d}")
    L_B = linear_map(B)
    L_Binv = linear_map(adjugate(B))
    h_inv = cremona(d)
    h_A = to_projective(A)
    h_Ainv = to_projective(inverse_unimodular(A))
    f = _expand_quietly(compose_all(L_Binv, h_inv, L_B, h_A, expand=False))
    g = _expand_quietly(compose_all(h_Ainv, L_Binv, h_inv, L_B, expand=False))
    notes = {
        "formula": "L_{B^-1} o h_{-I} o L_B o h_A",
        "inverse_formula": "h_{A^-1} o L_{B^-1} o h_{-I} o L_B",
        "A": A.tolist(),
        "det_B": dB,
        "deg_h_A": monomial_degree(A),
        "deg_h_A_inverse": monomial_degree(inverse_unimodular(A)),
        "degree_bound": d * monomial_degree(A),
    }
    out = _certified(name, f, g, notes)
    out.notes["degree"] = out.degree()
    return out


# slices of Segre-type products ---------------------------------------------------


def slice_map(n0: int, n1: int, name: str | None = None) -> NamedConstruction:
    """[x_i y_0 (i <= n0), x_{n0} y_j (1 <= j <= n1)] and its inverse."""
    if n0 < 1 or n1 < 1:
        raise ValueError("dimensions must be at least 1")
    src = BlockShape((n0, n1))
    gens = Polynomial.gens(src)
    xs, ys = gens[: n0 + 1], gens[n0 + 1:]
    comps = [x * ys[0] for x in xs] + [xs[n0] * y for y in ys[1:]]
    f = normalize([comps], src, BlockShape((n0 + n1,)))
    tgt = BlockShape((n0 + n1,))
    z = Polynomial.gens(tgt)
    g = normalize([z[: n0 + 1], z[n0:]], tgt, src)
    name = name or f"slice({n0},{n1})"
    return _certified(name, f, g, {"formula": "[x_i y_0 : x_n0 y_j]", "source": [n0, n1], "target": n0 + n1})


def segre_slice_phi() -> NamedConstruction:
    """Φ: P³ x P³ ⇢ P⁶."""
    return slice_map(3, 3, "Phi")


def step_map_h(n0: int) -> NamedConstruction:
    """h: P^{n0} x P¹ ⇢ P^{n0+1}."""
    return slice_map(n0, 1, f"h_{n0}")


# conjugation, products, towers ---------------------------------------------------


def conjugate(g: RationalMap, phi: NamedConstruction, expand: bool = True) -> RationalMap:
    """φ∘g∘φ⁻¹."""
    out = compose_all(phi.map, g, phi.inverse, expand=False)
    if expand:
        out.try_expand()
    return out


def conjugate_construction(g: NamedConstruction, phi: NamedConstruction, name: str | None = None,
                           expand: bool = True) -> NamedConstruction:
    f = conjugate(g.map, phi, expand)
    finv = conjugate(g.inverse, phi, expand)
    notes = {"formula": f"{phi.name} o {g.name} o {phi.name}^-1"}
    return _certified(name or f"{phi.name}.{g.name}", f, finv, notes)


def big_psi(psi: NamedConstruction, expand: bool = True) -> NamedConstruction:
    """Ψ = Φ∘(ψ x ψ⁻¹)∘Φ⁻¹ on P⁶, inverse Φ∘(ψ⁻¹ x ψ)∘Φ⁻¹."""
    if psi.source != BlockShape((3,)):
        raise ValueError("Ψ needs a self-map of P³")
    pp = product(psi.map, psi.inverse)
    pp_inv = product(psi.inverse, psi.map)
    prime = _certified(f"{psi.name}'", pp, pp_inv, {"formula": f"{psi.name} x {psi.name}^-1"})
    out = conjugate_construction(prime, segre_slice_phi(), f"Psi[{psi.name}]", expand)
    out.notes["factor"] = psi.name
    if psi.profile is not None:
        from .profiles import max_merge_profile

        # the inverse has the reversed profile
        out.profile = max_merge_profile(psi.profile, psi.profile.reversed())
    return out


def tower_step(g: NamedConstruction, expand: bool = True) -> NamedConstruction:
    """g' = h∘(g x id_{P¹})∘h⁻¹ on one dimension more."""
    (n0,) = g.source.dims
    h = step_map_h(n0)
    one = RationalMap.identity(BlockShape((1,)))
    gi = product(g.map, one)
    gi_inv = product(g.inverse, one)
    f = conjugate(gi, h, expand)
    finv = conjugate(gi_inv, h, expand)
    notes = {"formula": f"h o ({g.name} x id) o h^-1", "dimension": n0 + 1}
    return _certified(f"{g.name}'", f, finv, notes)


def tower(base: NamedConstruction, d: int, expand: bool = True) -> NamedConstruction:
    """Iterate the step from the base dimension up to P^d."""
    if len(base.source) != 1 or base.source != base.target:
        raise ValueError("tower needs a self-map of a single projective space")
    (d0,) = base.source.dims
    if d < d0:
        raise ValueError(f"target dimension {d} below base dimension {d0}")
    cur = base
    for n in range(d0, d):
        try:
            cur = tower_step(cur, expand)
        except (GuardExceeded, CertificateFailure) as exc:
            raise type(exc)(f"tower step to P^{n + 1}: {exc}") from exc
    if cur is base:
        return base
    cur.name = f"tower({base.name}, {d})"
    cur.notes.update({"base": base.name, "base_dimension": d0, "dimension": d})
    if base.profile is not None:
        from .profiles import max_merge_profile

        prof = base.profile
        for _ in range(d - d0):
            prof = max_merge_profile(prof)
        cur.profile = prof
    return cur


# variants -----------------------------------------------------------------------


def toy_matrix(seed: int, max_degree: int = 3) -> IntMatrix:
    """Small unimodular 3x3 matrix with 1 < ρ < 3, chosen by seeded rejection sampling.

    Both h_A and h_{A⁻¹} are kept at degree <= max_degree so that Ψ and the
    tower stay small.
    """
    rng = random.Random(seed)
    for _ in range(200_000):
        A = IntMatrix([[rng.randint(-2, 2) for _ in range(3)] for _ in range(3)])
        if det(A) not in (1, -1):
            continue
        if monomial_degree(A) > max_degree or monomial_degree(inverse_unimodular(A)) > max_degree:
            continue
        rho = spectral_radius(A).value
        if 1.0001 < rho < 3:
            return A
    raise RuntimeError(f"no toy matrix found for seed {seed}")


def parse_variant(variant: str) -> tuple[str, IntMatrix]:
    if variant == "sug24":
        return "psi", A_SUG
    if variant == "bdjk":
        return "phi", A_BDJK
    if variant.startswith("toy:"):
        try:
            seed = int(variant[4:])
        except ValueError as exc:
            raise ValueError(f"bad toy seed in {variant!r}") from exc
        return f"psi_toy{seed}", toy_matrix(seed)
    raise ValueError(f"unknown variant {variant!r} (use sug24, bdjk or toy:<seed>)")


def psi_variant(variant: str) -> NamedConstruction:
    name, A = parse_variant(variant)
    out = bdjk_map(A, name=name)
    out.notes["variant"] = variant
    if variant == "sug24":
        from .dyndeg import cited_psi_profile

        out.profile = cited_psi_profile()
    return out

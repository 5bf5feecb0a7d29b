"""Rational maps between products of projective spaces.

A ``RationalMap`` stores, for each target block, the list of its
components as polynomials on the source shape, in reduced canonical form:
no common factor, integer content 1, first nonzero component with positive
leading coefficient.  Because that form is unique, two maps are equal as
rational maps exactly when their reduced groups coincide.

Every map also remembers how it was built as a *chain* of atomic maps,
outermost first.  Composition first cancels atoms that meet at the junction
as mutually inverse (``a∘b == id``), and only then expands the rest,
reducing after each atomic step.  This keeps certificates such as
ψ∘ψ⁻¹ = id cheap even when ψ⁻¹ itself is too large to write out, in which
case the map stays *lazy* (``is_expanded`` is False) until someone asks for
its components.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field

from . import _sparse as sp
from .errors import CollapseError, DegreeMismatch, GuardExceeded, ShapeMismatch
from .gcd import reduce_group
from .polyring import (
    BlockShape,
    Polynomial,
    current_limits,
    dense_term_bound,
    substitute_terms,
)

_PRIME = 2_147_483_647
# junction checks are skipped when the trial composition would be larger
JUNCTION_TERM_LIMIT = 100_000


def _as_shape(s) -> BlockShape:
    return s if isinstance(s, BlockShape) else BlockShape.of(s)


class RationalMap:
    """A rational map ``source ⇢ target`` in reduced form.

    Build one with ``normalize`` (from raw components), ``RationalMap.identity``
    or by composing existing maps.  ``groups`` is a tuple (one entry per target
    block) of tuples of ``Polynomial``.
    """

    __slots__ = ("source", "target", "_groups", "_chain", "_hint", "label", "__weakref__")

    def __init__(self, source, target, groups=None, chain=None, label: str | None = None):
        self.source = _as_shape(source)
        self.target = _as_shape(target)
        self._groups = groups
        self._chain = chain
        self._hint = None
        self.label = label

    # construction -----------------------------------------------------------

    @classmethod
    def identity(cls, shape) -> "RationalMap":
        shape = _as_shape(shape)
        gens = Polynomial.gens(shape)
        groups = tuple(tuple(gens[s]) for s in shape.block_slices())
        return cls(shape, shape, groups, chain=(), label="id")

    @property
    def is_identity(self) -> bool:
        return self._chain == () or (
            self.source == self.target
            and self._groups is not None
            and self._groups == RationalMap.identity(self.source)._groups
        )

    @property
    def chain(self) -> tuple:
        """Atomic factors, outermost first; () for an identity."""
        if self._chain is None:
            return (self,)
        return self._chain

    @property
    def is_atomic(self) -> bool:
        return self._chain is None

    @property
    def is_expanded(self) -> bool:
        return self._groups is not None

    @property
    def groups(self) -> tuple:
        if self._groups is None:
            self._groups = self._expand()
            self._hint = None
        return self._groups

    def try_expand(self) -> bool:
        """Expand if the guards allow; return whether components are available."""
        try:
            self.groups
        except GuardExceeded:
            return False
        return True

    # queries ----------------------------------------------------------------

    def components(self) -> list[Polynomial]:
        return [p for g in self.groups for p in g]

    @property
    def multidegree(self) -> tuple:
        """Per target block, the source multidegree of its components."""
        out = []
        for g in self.groups:
            out.append(next(p for p in g if p).multidegree)
        return tuple(out)

    @property
    def degree(self) -> int:
        """Algebraic degree; for several blocks, the largest total degree."""
        return max(sum(md) for md in self.multidegree)

    def term_counts(self) -> list[int]:
        return [len(p) for p in self.components()]

    def __call__(self, point, modulus: int | None = None):
        """Evaluate at a point given as one flat coordinate list."""
        return [[p.evaluate(point, modulus) for p in g] for g in self.groups]

    def __eq__(self, other):
        if not isinstance(other, RationalMap):
            return NotImplemented
        return equal(self, other)

    def __hash__(self):
        return hash((self.source, self.target, self.groups))

    def __repr__(self):
        state = f"deg {self.degree}" if self.is_expanded else f"lazy, {len(self.chain)} factors"
        name = f" {self.label}" if self.label else ""
        return f"<RationalMap{name} {self.source} -> {self.target}, {state}>"

    def __str__(self):
        parts = []
        for g in self.groups:
            parts.append("[" + " : ".join(str(p) for p in g) + "]")
        return " x ".join(parts)

    # expansion ----------------------------------------------------------------

    def _expand(self):
        if self._hint is not None:
            outer, inner = self._hint
            cur = inner.groups
        else:
            chain = self.chain
            if not chain:
                return RationalMap.identity(self.source)._groups
            outer, cur = chain[:-1], chain[-1].groups
        for atom in reversed(outer):
            cur = _apply_atom(atom, cur)
        return cur


def _estimate_terms(atom: RationalMap, inner_groups) -> int:
    """Upper bound on the largest component of atom∘inner before reduction."""
    shape = inner_groups[0][0].shape if inner_groups and inner_groups[0] else None
    counts = [len(p) for g in inner_groups for p in g]
    inner_md = []
    for g in inner_groups:
        inner_md.append(next(p for p in g if p).multidegree)
    worst = 0
    for grp in atom.groups:
        for p in grp:
            if not p:
                continue
            md = [0] * len(shape)
            for e, bmd in zip(p.multidegree, inner_md):
                md = [a + e * b for a, b in zip(md, bmd)]
            dense = dense_term_bound(shape, md)
            multi = 0
            for m in p.terms:
                prod = 1
                for e, t in zip(m, counts):
                    if e and t > 1:
                        prod *= math.comb(e + t - 1, t - 1)
                        if prod > dense:
                            break
                multi += prod
                if multi > dense:
                    break
            worst = max(worst, min(dense, multi))
    return worst


def _apply_atom(atom: RationalMap, inner_groups):
    """Reduced groups of atom∘inner, where inner is given by its groups."""
    lim = current_limits()
    shape = next(p for g in inner_groups for p in g if p).shape
    inner_md = [next(p for p in g if p).multidegree for g in inner_groups]
    for grp in atom.groups:
        p = next(q for q in grp if q)
        md = [0] * len(shape)
        for e, bmd in zip(p.multidegree, inner_md):
            md = [a + e * b for a, b in zip(md, bmd)]
        if sum(md) > lim.max_degree:
            raise GuardExceeded(f"composition degree {sum(md)} exceeds ceiling {lim.max_degree}")
    bound = _estimate_terms(atom, inner_groups)
    if bound > lim.max_terms:
        raise GuardExceeded(f"composition may produce {bound} terms, ceiling {lim.max_terms}")
    images = [p.terms for g in inner_groups for p in g]
    nv = shape.nvars
    candidates = [t for t in images if len(t) > 1]
    out = []
    for b, grp in enumerate(atom.groups):
        raw = [substitute_terms(p.terms, images, nv, lim.max_terms) if p else {} for p in grp]
        if not any(raw):
            raise CollapseError(f"target block {b} collapses to zero under composition")
        red, _ = reduce_group(raw, nv, candidates)
        out.append(tuple(Polynomial(shape, t, check=False) for t in red))
    return tuple(out)


# normalization ------------------------------------------------------------------


def normalize(groups, source=None, target=None, label: str | None = None) -> RationalMap:
    """Reduce raw component groups to canonical form.

    ``groups`` is a list of lists of ``Polynomial`` (one list per target
    block).  A single flat list is accepted for maps into one projective
    space.
    """
    groups = list(groups)
    if groups and isinstance(groups[0], Polynomial):
        groups = [groups]
    if not groups or any(len(g) < 2 for g in groups):
        raise ValueError("each group needs at least two components")
    shapes = {p.shape for g in groups for p in g}
    if len(shapes) != 1:
        raise ShapeMismatch("components live on different shapes")
    shape = shapes.pop()
    if source is not None and _as_shape(source) != shape:
        raise ShapeMismatch(f"components live on {shape}, not {source}")
    tdims = tuple(len(g) - 1 for g in groups)
    if target is not None and _as_shape(target).dims != tdims:
        raise ShapeMismatch(f"group sizes {tdims} do not match target {target}")
    out = []
    for b, g in enumerate(groups):
        live = [p for p in g if p]
        if not live:
            raise CollapseError(f"all components of target block {b} are zero")
        degs = {p.multidegree for p in live}
        if len(degs) != 1:
            raise DegreeMismatch(f"components of target block {b} have different multidegrees {sorted(degs)}")
        red, _ = reduce_group([p.terms for p in g], shape.nvars)
        out.append(tuple(Polynomial(shape, t, check=False) for t in red))
    return RationalMap(shape, BlockShape(tdims), tuple(out), label=label)


# equality -----------------------------------------------------------------------


def equal(f: RationalMap, g: RationalMap) -> bool:
    """Whether f and g agree as rational maps.

    Reduced forms are canonical, so this compares groups; chains made of the
    very same atoms are accepted without expansion.
    """
    if f.source != g.source or f.target != g.target:
        return False
    if f is g:
        return True
    if not (f.is_expanded and g.is_expanded):
        if _same_atoms(f.chain, g.chain):
            return True
    return f.groups == g.groups


def equal_by_cross_products(f: RationalMap, g: RationalMap) -> bool:
    """Definition-level check: f_i g_j - f_j g_i = 0 in every block."""
    if f.source != g.source or f.target != g.target:
        return False
    for fg, gg in zip(f.groups, g.groups):
        for i in range(len(fg)):
            for j in range(i + 1, len(fg)):
                a = sp.mul_terms(fg[i].terms, gg[j].terms)
                b = sp.mul_terms(fg[j].terms, gg[i].terms)
                if sp.sub_terms(a, b):
                    return False
        if all(not p for p in fg) != all(not p for p in gg):
            return False
    return True


def _same_atoms(c1, c2) -> bool:
    if len(c1) != len(c2):
        return False
    for a, b in zip(c1, c2):
        if a is b:
            continue
        if a.source != b.source or a.target != b.target or a.groups != b.groups:
            return False
    return True


# composition --------------------------------------------------------------------


def _eval_groups_mod(groups, point):
    return [[sp.evaluate_terms(p.terms, point, _PRIME) for p in g] for g in groups]


def _proportional(groups_vals, point, shape: BlockShape) -> bool | None:
    """True/False if the evaluated groups match ``point`` projectively; None if undecided."""
    for vals, s in zip(groups_vals, shape.block_slices()):
        ref = point[s]
        if not any(vals):
            return None
        for i in range(len(vals)):
            for j in range(i + 1, len(vals)):
                if (vals[i] * ref[j] - vals[j] * ref[i]) % _PRIME:
                    return False
    return True


def _cancels(a: RationalMap, b: RationalMap) -> bool:
    """Whether a∘b is the identity, decided exactly (False when too costly)."""
    if a.source != b.target or a.target != b.source:
        return False
    if not (a.is_expanded and b.is_expanded):
        return False
    rng = random.Random(0xC0FFEE)
    point = [rng.randrange(1, _PRIME) for _ in range(b.source.nvars)]
    mid = [v for g in _eval_groups_mod(b.groups, point) for v in g]
    if not any(mid):
        return False
    if _proportional(_eval_groups_mod(a.groups, mid), point, b.source) is not True:
        return False
    if _estimate_terms(a, b.groups) > JUNCTION_TERM_LIMIT:
        return False
    try:
        groups = _apply_atom(a, b.groups)
    except (GuardExceeded, CollapseError):
        return False
    return groups == RationalMap.identity(b.source)._groups


def compose(f: RationalMap, g: RationalMap, expand: bool = True) -> RationalMap:
    """The reduced map f∘g (apply g first).

    With ``expand=False`` the result may stay lazy; its components are
    computed on first access.
    """
    if f.source != g.target:
        raise ShapeMismatch(f"cannot compose: source {f.source} != target {g.target}")
    left, right = list(f.chain), list(g.chain)
    while left and right and _cancels(left[-1], right[0]):
        left.pop()
        right.pop(0)
    chain = tuple(left + right)
    if not chain:
        return RationalMap.identity(g.source)
    if len(chain) == 1:
        return chain[0]
    out = RationalMap(g.source, f.target, None, chain)
    if len(right) == len(g.chain) and right and (g.is_expanded or g._hint is not None):
        out._hint = (tuple(left), g)
    if expand:
        out.groups
    return out


def compose_all(*maps: RationalMap, expand: bool = True) -> RationalMap:
    """maps[0]∘maps[1]∘...; the last map is applied first."""
    out = maps[-1]
    for m in reversed(maps[:-1]):
        out = compose(m, out, expand=expand)
    return out


def from_chain(chain, expand: bool = True, label: str | None = None) -> RationalMap:
    """Compose atoms given outermost first."""
    out = compose_all(*chain, expand=expand)
    if label and not out.is_atomic and out is not chain[0]:
        out.label = label
    return out


# products -----------------------------------------------------------------------


def _lift(p: Polynomial, shape: BlockShape, offset: int) -> Polynomial:
    before = (0,) * offset
    after = (0,) * (shape.nvars - offset - p.shape.nvars)
    mdeg = None
    if p:
        nb = len(p.multidegree)
        blocks_before = sum(1 for o in shape.offsets if o < offset)
        mdeg = (0,) * blocks_before + p.multidegree + (0,) * (len(shape) - blocks_before - nb)
    return Polynomial._raw(shape, {before + m + after: c for m, c in p.terms.items()}, mdeg)


def _product_groups(f1: RationalMap, f2: RationalMap, source: BlockShape):
    off = f1.source.nvars
    g1 = tuple(tuple(_lift(p, source, 0) for p in g) for g in f1.groups)
    g2 = tuple(tuple(_lift(p, source, off) for p in g) for g in f2.groups)
    return g1 + g2


def product(f1: RationalMap, f2: RationalMap, expand: bool = False) -> RationalMap:
    """f1 x f2 on the concatenated shapes (f1 in the first blocks)."""
    source = f1.source.concat(f2.source)
    target = f1.target.concat(f2.target)
    if f1.is_identity and f2.is_identity:
        return RationalMap.identity(source)
    c1, c2 = list(f1.chain), list(f2.chain)
    if len(c1) <= 1 and len(c2) <= 1:
        a = c1[0] if c1 else f1
        b = c2[0] if c2 else f2
        return RationalMap(source, target, _product_groups(a, b, source))
    # zip the chains, padding the shorter one with identities on the inside
    n = max(len(c1), len(c2))
    c1 += [RationalMap.identity(f1.source)] * (n - len(c1))
    c2 += [RationalMap.identity(f2.source)] * (n - len(c2))
    atoms = tuple(x for x in (product(a, b) for a, b in zip(c1, c2)) if x._chain != ())
    out = RationalMap(source, target, None, atoms)
    if f1.is_expanded and f2.is_expanded:
        out._groups = _product_groups(f1, f2, source)
    elif expand:
        out.groups
    return out


# certificates -------------------------------------------------------------------


@dataclass
class InverseCertificate:
    passed: bool
    forward: bool | None = None
    backward: bool | None = None
    method: str = ""
    cause: str | None = None
    pointwise: bool | None = None

    def to_dict(self):
        return {
            "passed": self.passed,
            "forward": self.forward,
            "backward": self.backward,
            "method": self.method,
            "cause": self.cause,
            "pointwise": self.pointwise,
        }


def _check_identity(f: RationalMap, g: RationalMap):
    """Returns (holds, method) for f∘g == id."""
    comp = compose(f, g, expand=False)
    if comp.is_identity and comp._chain == ():
        return True, "factor cancellation"
    return comp.groups == RationalMap.identity(g.source)._groups, "expanded composition"


def _eval_chain_mod(f: RationalMap, point):
    for atom in reversed(f.chain):
        point = [v for grp in _eval_groups_mod(atom.groups, point) for v in grp]
    return point


def pointwise_identity(f: RationalMap, g: RationalMap, trials: int = 3, seed: int = 1) -> bool | None:
    """Evaluate f(g(x)) at random points mod a prime, factor by factor.

    False means f∘g is certainly not the identity; True means it agreed at
    every non-degenerate point; None means every point was degenerate.
    """
    rng = random.Random(seed)
    seen = False
    for _ in range(trials):
        point = [rng.randrange(1, _PRIME) for _ in range(g.source.nvars)]
        img = _eval_chain_mod(f, _eval_chain_mod(g, point))
        grouped = [img[s] for s in g.source.block_slices()]
        res = _proportional(grouped, point, g.source)
        if res is False:
            return False
        if res:
            seen = True
    return True if seen else None


def certify_inverse(f: RationalMap, g: RationalMap) -> InverseCertificate:
    """Check f∘g = id and g∘f = id exactly.

    The exact check cancels mutually inverse factors where the two chains
    meet and expands whatever is left.  A modular evaluation at random
    points is recorded alongside as an independent sanity check.
    """
    if f.source != g.target or f.target != g.source:
        return InverseCertificate(False, cause=f"shape mismatch: {f.source}->{f.target} vs {g.source}->{g.target}")
    methods = []
    try:
        fwd, m1 = _check_identity(f, g)
        methods.append(m1)
        bwd, m2 = _check_identity(g, f)
        methods.append(m2)
    except (GuardExceeded, CollapseError) as exc:
        return InverseCertificate(False, method="/".join(methods), cause=f"{type(exc).__name__}: {exc}")
    pw = [pointwise_identity(f, g), pointwise_identity(g, f)]
    pointwise = False if False in pw else (None if None in pw else True)
    ok = fwd and bwd and pointwise is not False
    cause = None
    if not (fwd and bwd):
        cause = "composition is not the identity"
    elif pointwise is False:
        cause = "exact check passed but modular evaluation disagrees"
    return InverseCertificate(ok, fwd, bwd, "/".join(methods), cause, pointwise)


# iteration ----------------------------------------------------------------------


def _root(d: int, n: int) -> float:
    if n == 1 or d < 2**1000:
        return float(d) ** (1.0 / n)
    return math.exp(math.log(d) / n)


@dataclass
class DegreeSequence:
    """Degrees of the reduced iterates f, f^2, ..."""

    entries: list = field(default_factory=list)  # (n, multidegree, degree)
    truncated: str | None = None

    @property
    def ns(self) -> list[int]:
        return [e[0] for e in self.entries]

    @property
    def degrees(self) -> list[int]:
        return [e[2] for e in self.entries]

    @property
    def roots(self) -> list[float]:
        return [_root(d, n) for n, _, d in self.entries]

    @property
    def upper_bound(self) -> float | None:
        """min_n deg(f^n)^(1/n), an upper bound for the first dynamical degree."""
        r = self.roots
        return min(r) if r else None

    @property
    def running_upper_bounds(self) -> list[float]:
        out, best = [], math.inf
        for r in self.roots:
            best = min(best, r)
            out.append(best)
        return out

    @property
    def estimate(self) -> float | None:
        """Growth-rate estimate from the second half of the sequence.

        (deg_N / deg_h)^(1/(N-h)) with h = N // 2 cancels the constant factor
        that makes deg_N^(1/N) converge slowly.  Falls back to the last root
        when fewer than two usable entries exist.
        """
        if not self.entries:
            return None
        degs = dict((n, d) for n, _, d in self.entries)
        N = self.entries[-1][0]
        h = N // 2
        if h >= 1 and h in degs and N > h:
            return math.exp((math.log(degs[N]) - math.log(degs[h])) / (N - h))
        return self.roots[-1]

    def append(self, n: int, multidegree, degree: int):
        if self.entries and n <= self.entries[-1][0]:
            raise ValueError("n must increase")
        if degree < 1:
            raise ValueError("degrees are at least 1")
        self.entries.append((n, multidegree, degree))

    def to_dict(self):
        return {
            "entries": [
                {"n": n, "degree": d, "multidegree": [list(x) for x in md], "root": r, "upper_bound": u}
                for (n, md, d), r, u in zip(self.entries, self.roots, self.running_upper_bounds)
            ],
            "upper_bound": self.upper_bound,
            "estimate": self.estimate,
            "truncated": self.truncated,
        }


def iterate_degrees(f: RationalMap, max_n: int, max_terms: int | None = None,
                    max_degree: int | None = None) -> DegreeSequence:
    """Degrees of f^n for n = 1..max_n, composing f with the previous iterate.

    On a guard trip the ``GuardExceeded`` carries the partial sequence in
    ``.partial``.
    """
    from .polyring import limits

    if f.source != f.target:
        raise ShapeMismatch("iteration needs a self-map")
    if max_n < 1:
        raise ValueError("max_n must be at least 1")
    seq = DegreeSequence()
    cur = None
    with limits(max_terms, max_degree):
        for n in range(1, max_n + 1):
            try:
                cur = f if cur is None else compose(f, cur)
                md = cur.multidegree
            except GuardExceeded as exc:
                seq.truncated = f"n={n}: {exc}"
                raise GuardExceeded(f"iterate {n}: {exc}", partial=seq) from exc
            except CollapseError as exc:
                raise CollapseError(f"iterate {n} collapses: {exc}") from exc
            seq.append(n, md, max(sum(x) for x in md))
            # drop the reference to the previous iterate
            cur._hint = None
    return seq


# serialization ------------------------------------------------------------------


def map_to_dict(f: RationalMap, provenance=None, include_groups: bool = True) -> dict:
    """Map document: the reduced groups (null if never expanded) and, for
    composites, the atomic factors so that certificates can be re-run."""
    doc = {
        "source": list(f.source.dims),
        "target": list(f.target.dims),
        "groups": None,
    }
    if include_groups and f.is_expanded:
        doc["groups"] = [[p.to_json() for p in g] for g in f.groups]
    if not f.is_atomic and f.chain:
        doc["factors"] = [map_to_dict(a) for a in f.chain]
    if provenance is not None:
        doc["provenance"] = provenance
    return doc


def map_from_dict(doc: dict) -> RationalMap:
    source = BlockShape(tuple(doc["source"]))
    target = BlockShape(tuple(doc["target"]))
    flat = None
    if doc.get("groups") is not None:
        groups = [[Polynomial.from_json(source, p) for p in g] for g in doc["groups"]]
        if len(groups) != len(target) or any(len(g) != s for g, s in zip(groups, target.sizes)):
            raise ShapeMismatch("groups do not match the target shape")
        flat = normalize(groups, source, target)
    factors = doc.get("factors")
    if not factors:
        if flat is None:
            raise ValueError("map document has neither groups nor factors")
        return flat
    atoms = [map_from_dict(a) for a in factors]
    if atoms[0].target != target or atoms[-1].source != source:
        raise ShapeMismatch("factor shapes do not chain to the declared source/target")
    if any(a.source != b.target for a, b in zip(atoms, atoms[1:])):
        raise ShapeMismatch("consecutive factors do not compose")
    out = RationalMap(source, target, None, tuple(a for atom in atoms for a in atom.chain))
    if flat is not None:
        out._groups = flat.groups
    return out


def dumps(doc) -> str:
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"

"""Exact sparse multihomogeneous polynomials over the integers.

Polynomials live on a product of projective spaces P^{n_1} x ... x P^{n_k},
described by a ``BlockShape``.  Terms are stored with *flat* exponent tuples
(block 0 coordinates first); the per-block view is available through
``Polynomial.monomials()`` and the serialization format.

Canonical term order is graded lexicographic inside each block, blocks in
declared order, largest term first.
"""

from __future__ import annotations

import contextlib
import contextvars
from dataclasses import dataclass
from math import comb
from operator import add as _add

from . import _sparse as sp
from .errors import (
    DegreeMismatch,
    GuardExceeded,
    NotDivisible,
    ShapeMismatch,
    ZeroPolynomialError,
)
from .gcd import gcd_terms, normalize_sign


@dataclass(frozen=True)
class Limits:
    max_terms: int = 5_000_000
    max_degree: int = 100_000


_LIMITS: contextvars.ContextVar[Limits] = contextvars.ContextVar("limits", default=Limits())


def current_limits() -> Limits:
    return _LIMITS.get()


@contextlib.contextmanager
def limits(max_terms: int | None = None, max_degree: int | None = None):
    """Temporarily change the term/degree ceilings."""
    old = _LIMITS.get()
    new = Limits(
        max_terms=old.max_terms if max_terms is None else max_terms,
        max_degree=old.max_degree if max_degree is None else max_degree,
    )
    token = _LIMITS.set(new)
    try:
        yield new
    finally:
        _LIMITS.reset(token)


@dataclass(frozen=True)
class BlockShape:
    """Dimensions (n_1, ..., n_k) of the projective factors."""

    dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims or any(d < 1 for d in dims):
            raise ValueError(f"block dimensions must be a nonempty list of integers >= 1, got {self.dims}")
        object.__setattr__(self, "dims", dims)

    @classmethod
    def of(cls, *dims) -> "BlockShape":
        if len(dims) == 1 and not isinstance(dims[0], int):
            dims = tuple(dims[0])
        return cls(tuple(dims))

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(d + 1 for d in self.dims)

    @property
    def nvars(self) -> int:
        return sum(self.sizes)

    @property
    def offsets(self) -> tuple[int, ...]:
        out, acc = [], 0
        for s in self.sizes:
            out.append(acc)
            acc += s
        return tuple(out)

    def block_slices(self):
        return [slice(o, o + s) for o, s in zip(self.offsets, self.sizes)]

    def concat(self, other: "BlockShape") -> "BlockShape":
        return BlockShape(self.dims + other.dims)

    def __len__(self):
        return len(self.dims)

    def __str__(self):
        return "x".join(f"P{d}" for d in self.dims)


def _as_shape(shape) -> BlockShape:
    return shape if isinstance(shape, BlockShape) else BlockShape.of(shape)


_LETTERS = "xyzuvw"


def variable_names(shape: BlockShape) -> list[str]:
    if len(shape) == 1:
        return [f"x{i}" for i in range(shape.sizes[0])]
    names = []
    for b, s in enumerate(shape.sizes):
        letter = _LETTERS[b] if b < len(_LETTERS) else f"t{b}_"
        names.extend(f"{letter}{i}" for i in range(s))
    return names


class Polynomial:
    """Immutable sparse multihomogeneous polynomial with integer coefficients."""

    __slots__ = ("shape", "_terms", "_mdeg", "_hash")

    def __init__(self, shape, terms=None, *, check: bool = True):
        shape = _as_shape(shape)
        self.shape = shape
        self._hash = None
        flat = {}
        if terms:
            nv = shape.nvars
            for m, c in terms.items():
                c = int(c)
                if not c:
                    continue
                if m and isinstance(m[0], (tuple, list)):
                    if len(m) != len(shape):
                        raise ShapeMismatch(f"monomial {m} does not match {shape}")
                    key = tuple(e for blk in m for e in blk)
                else:
                    key = tuple(m)
                if len(key) != nv:
                    raise ShapeMismatch(f"monomial {m} has {len(key)} exponents, shape {shape} needs {nv}")
                if check and any(e < 0 for e in key):
                    raise ValueError(f"negative exponent in {m}")
                flat[key] = flat.get(key, 0) + c
            flat = {m: c for m, c in flat.items() if c}
        self._terms = flat
        self._mdeg = None
        if check and flat:
            self._mdeg = self._scan_multidegree()

    @classmethod
    def _raw(cls, shape: BlockShape, terms: dict, mdeg=None) -> "Polynomial":
        p = cls.__new__(cls)
        p.shape = shape
        p._terms = terms
        p._mdeg = mdeg
        p._hash = None
        return p

    def _scan_multidegree(self):
        slices = self.shape.block_slices()
        mdeg = None
        for m in self._terms:
            d = tuple(sum(m[s]) for s in slices)
            if mdeg is None:
                mdeg = d
            elif d != mdeg:
                raise DegreeMismatch(f"polynomial is not multihomogeneous: {mdeg} vs {d}")
        return mdeg

    # constructors -----------------------------------------------------------

    @classmethod
    def zero(cls, shape) -> "Polynomial":
        return cls._raw(_as_shape(shape), {})

    @classmethod
    def constant(cls, shape, c: int = 1) -> "Polynomial":
        shape = _as_shape(shape)
        if not c:
            return cls.zero(shape)
        return cls._raw(shape, {(0,) * shape.nvars: int(c)}, (0,) * len(shape))

    @classmethod
    def var(cls, shape, i: int, block: int | None = None) -> "Polynomial":
        """Coordinate ``i`` (flat index, or index inside ``block``)."""
        shape = _as_shape(shape)
        if block is not None:
            i = shape.offsets[block] + i
        m = [0] * shape.nvars
        m[i] = 1
        return cls(shape, {tuple(m): 1})

    @classmethod
    def gens(cls, shape) -> list["Polynomial"]:
        shape = _as_shape(shape)
        return [cls.var(shape, i) for i in range(shape.nvars)]

    @classmethod
    def monomial(cls, shape, exponents, coeff: int = 1) -> "Polynomial":
        return cls(shape, {tuple(exponents) if not isinstance(exponents[0], (tuple, list)) else tuple(map(tuple, exponents)): coeff})

    # basic queries ----------------------------------------------------------

    @property
    def terms(self) -> dict:
        """Flat-exponent term dict.  Treat as read-only."""
        return self._terms

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    @property
    def multidegree(self) -> tuple[int, ...]:
        if not self._terms:
            raise ZeroPolynomialError("the zero polynomial has no multidegree")
        if self._mdeg is None:
            self._mdeg = self._scan_multidegree()
        return self._mdeg

    @property
    def degree(self) -> int:
        return sum(self.multidegree)

    def is_constant(self) -> bool:
        return len(self._terms) == 1 and not any(next(iter(self._terms)))

    def split(self, m: tuple) -> tuple[tuple[int, ...], ...]:
        return tuple(m[s] for s in self.shape.block_slices())

    def monomials(self):
        """(per-block exponent tuples, coefficient) in canonical order."""
        return [(self.split(m), c) for m, c in self.sorted_terms()]

    def sort_key(self, m):
        return tuple((sum(m[s]), m[s]) for s in self.shape.block_slices())

    def sorted_terms(self):
        return sorted(self._terms.items(), key=lambda t: self.sort_key(t[0]), reverse=True)

    def leading_term(self):
        if not self._terms:
            raise ZeroPolynomialError("zero polynomial has no leading term")
        m = max(self._terms, key=self.sort_key)
        return m, self._terms[m]

    def evaluate(self, point, modulus: int | None = None) -> int:
        if len(point) != self.shape.nvars:
            raise ShapeMismatch(f"point has {len(point)} coordinates, need {self.shape.nvars}")
        return sp.evaluate_terms(self._terms, point, modulus)

    # comparison -------------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, int):
            return (not other and not self._terms) or (self.is_constant() and next(iter(self._terms.values())) == other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.shape == other.shape and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.shape, frozenset(self._terms.items())))
        return self._hash

    # arithmetic ---------------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, int):
            return Polynomial.constant(self.shape, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        if other.shape != self.shape:
            raise ShapeMismatch(f"shapes differ: {self.shape} vs {other.shape}")
        return other

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.shape, {m: -c for m, c in self._terms.items()}, self._mdeg)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return add(self, -other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            if not other:
                return Polynomial.zero(self.shape)
            return Polynomial._raw(self.shape, sp.scale_terms(self._terms, other), self._mdeg)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power")
        out = Polynomial.constant(self.shape, 1)
        base = self
        while e:
            if e & 1:
                out = mul(out, base)
            e >>= 1
            if e:
                base = mul(base, base)
        return out

    def __floordiv__(self, other):
        return divexact(self, other)

    # display ------------------------------------------------------------------

    def __str__(self):
        if not self._terms:
            return "0"
        names = variable_names(self.shape)
        parts = []
        for m, c in self.sorted_terms():
            factors = []
            for name, e in zip(names, m):
                if e == 1:
                    factors.append(name)
                elif e:
                    factors.append(f"{name}^{e}")
            mono = "*".join(factors)
            if not mono:
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        head = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        return head + "".join(f" {s} {b}" for s, b in parts[1:])

    def __repr__(self):
        return f"Polynomial({self.shape}, {self})"

    # serialization ------------------------------------------------------------

    def to_json(self) -> list:
        """Terms in canonical order as [coefficient string, block exponents...]."""
        return [[str(c), *[list(b) for b in self.split(m)]] for m, c in self.sorted_terms()]

    @classmethod
    def from_json(cls, shape, data) -> "Polynomial":
        shape = _as_shape(shape)
        terms = {}
        for entry in data:
            coeff, *blocks = entry
            if len(blocks) != len(shape):
                raise ShapeMismatch(f"term {entry} has {len(blocks)} blocks, expected {len(shape)}")
            for blk, size in zip(blocks, shape.sizes):
                if len(blk) != size:
                    raise ShapeMismatch(f"block {blk} should have {size} exponents")
            key = tuple(int(e) for blk in blocks for e in blk)
            if key in terms:
                raise ValueError(f"duplicate monomial {blocks}")
            terms[key] = int(coeff)
        return cls(shape, terms)


# module-level operations ------------------------------------------------------


def _check_guard(terms: dict, where: str):
    lim = current_limits()
    if len(terms) > lim.max_terms:
        raise GuardExceeded(f"{where}: {len(terms)} terms exceeds ceiling {lim.max_terms}")


def add(p: Polynomial, q: Polynomial) -> Polynomial:
    if p.shape != q.shape:
        raise ShapeMismatch(f"shapes differ: {p.shape} vs {q.shape}")
    if not p:
        return q
    if not q:
        return p
    if p.multidegree != q.multidegree:
        raise DegreeMismatch(f"cannot add multidegrees {p.multidegree} and {q.multidegree}")
    terms = sp.add_terms(p._terms, q._terms)
    return Polynomial._raw(p.shape, terms, p.multidegree if terms else None)


def mul(p: Polynomial, q: Polynomial) -> Polynomial:
    if p.shape != q.shape:
        raise ShapeMismatch(f"shapes differ: {p.shape} vs {q.shape}")
    if not p or not q:
        return Polynomial.zero(p.shape)
    mdeg = tuple(map(_add, p.multidegree, q.multidegree))
    lim = current_limits()
    if sum(mdeg) > lim.max_degree:
        raise GuardExceeded(f"product degree {sum(mdeg)} exceeds ceiling {lim.max_degree}")
    terms = sp.mul_terms(p._terms, q._terms, lim.max_terms)
    _check_guard(terms, "mul")
    return Polynomial._raw(p.shape, terms, mdeg)


def divexact(p: Polynomial, q: Polynomial) -> Polynomial:
    """Exact quotient p / q; raises NotDivisible otherwise."""
    if p.shape != q.shape:
        raise ShapeMismatch(f"shapes differ: {p.shape} vs {q.shape}")
    if not q:
        raise ZeroDivisionError("division by zero polynomial")
    if not p:
        return p
    if any(a < b for a, b in zip(p.multidegree, q.multidegree)):
        raise NotDivisible("divisor has larger multidegree")
    res = sp.divexact_terms(p._terms, q._terms)
    if res is None:
        raise NotDivisible(f"{q} does not divide {p}")
    return Polynomial._raw(p.shape, res, tuple(a - b for a, b in zip(p.multidegree, q.multidegree)))


def divides(q: Polynomial, p: Polynomial) -> bool:
    try:
        divexact(p, q)
    except NotDivisible:
        return False
    return True


def content_and_primitive(p: Polynomial):
    """Split p = c * m * q with q primitive and free of monomial factors.

    Returns ``(c, m, q)`` where ``m`` is a per-block exponent tuple and the
    leading term of ``q`` is positive (``c`` carries the sign).
    """
    if not p:
        raise ZeroPolynomialError("content of the zero polynomial is undefined")
    low = sp.monomial_content([p._terms])
    terms = sp.divide_monomial(p._terms, low)
    c = sp.content(terms)
    lead = max(terms)
    if terms[lead] < 0:
        c = -c
    q = {m: v // c for m, v in terms.items()}
    mdeg = tuple(a - sum(low[s]) for a, s in zip(p.multidegree, p.shape.block_slices()))
    return c, p.split(low), Polynomial._raw(p.shape, q, mdeg)


def gcd(p: Polynomial, q: Polynomial) -> Polynomial:
    """Primitive gcd with positive leading coefficient."""
    if p.shape != q.shape:
        raise ShapeMismatch(f"shapes differ: {p.shape} vs {q.shape}")
    if not p and not q:
        raise ZeroPolynomialError("gcd(0, 0) is undefined")
    terms = gcd_terms(p._terms, q._terms, p.shape.nvars)
    return Polynomial(p.shape, terms)


def substitute(p: Polynomial, images) -> Polynomial:
    """Evaluate p at ``images`` (one polynomial per source coordinate)."""
    images = list(images)
    if len(images) != p.shape.nvars:
        raise ShapeMismatch(f"need {p.shape.nvars} images, got {len(images)}")
    if not images:
        raise ShapeMismatch("no images")
    out_shape = images[0].shape
    if any(im.shape != out_shape for im in images):
        raise ShapeMismatch("images live on different shapes")
    block_degs = []
    for s in p.shape.block_slices():
        degs = {im.multidegree for im in images[s] if im}
        if len(degs) > 1:
            raise DegreeMismatch(f"images of one block have different multidegrees: {sorted(degs)}")
        block_degs.append(degs.pop() if degs else None)
    if not p:
        return Polynomial.zero(out_shape)
    lim = current_limits()
    mdeg = [0] * len(out_shape)
    for e, bd in zip(p.multidegree, block_degs):
        if e and bd is not None:
            mdeg = [a + e * b for a, b in zip(mdeg, bd)]
    if sum(mdeg) > lim.max_degree:
        raise GuardExceeded(f"substitution degree {sum(mdeg)} exceeds ceiling {lim.max_degree}")
    terms = substitute_terms(p._terms, [im._terms for im in images], out_shape.nvars, lim.max_terms)
    _check_guard(terms, "substitute")
    return Polynomial._raw(out_shape, terms, tuple(mdeg) if terms else None)


def substitute_terms(terms: dict, images: list[dict], nvars_out: int, max_terms=None) -> dict:
    """Horner-style substitution on raw term dicts."""
    nv = len(images)
    one = {(0,) * nvars_out: 1}
    cache: dict[tuple[int, int], dict] = {}

    def power(k, e):
        if e == 0:
            return one
        key = (k, e)
        hit = cache.get(key)
        if hit is not None:
            return hit
        img = images[k]
        if not img:
            res = {}
        elif len(img) == 1:
            ((m, c),) = img.items()
            res = {tuple(x * e for x in m): c ** e}
        else:
            prev = cache.get((k, e - 1))
            if prev is not None:
                res = sp.mul_terms(prev, img, max_terms)
            else:
                half = power(k, e // 2)
                res = sp.mul_terms(half, half, max_terms)
                if e & 1:
                    res = sp.mul_terms(res, img, max_terms)
        cache[key] = res
        return res

    def rec(sub: dict, k: int) -> dict:
        # sub maps exponent suffixes (variables k..nv-1) to coefficients
        if k == nv:
            ((_, c),) = sub.items()
            return {(0,) * nvars_out: c}
        groups: dict[int, dict] = {}
        for m, c in sub.items():
            groups.setdefault(m[0], {})[m[1:]] = c
        out: dict = {}
        for e, g in groups.items():
            inner = rec(g, k + 1)
            if not inner:
                continue
            pw = power(k, e)
            if not pw:
                continue
            sp.addmul_into(out, sp.mul_terms(inner, pw, max_terms))
            if max_terms is not None and len(out) > max_terms:
                raise GuardExceeded(f"substitution exceeds term ceiling {max_terms}")
        return out

    return rec(terms, 0)


def dense_term_bound(shape: BlockShape, mdeg) -> int:
    """Number of monomials of the given multidegree."""
    out = 1
    for d, s in zip(mdeg, shape.sizes):
        out *= comb(d + s - 1, s - 1)
    return out


def normalized(p: Polynomial) -> Polynomial:
    """Primitive, sign-normalized copy (monomial content kept)."""
    if not p:
        return p
    c = sp.content(p._terms)
    return Polynomial._raw(p.shape, normalize_sign({m: v // c for m, v in p._terms.items()}), p._mdeg)

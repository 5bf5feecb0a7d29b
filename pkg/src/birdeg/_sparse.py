"""Dict-level kernels for sparse integer polynomials.

A polynomial is a ``dict`` mapping flat exponent tuples to nonzero ``int``
coefficients.  Nothing here checks homogeneity; callers own that.
"""

from __future__ import annotations

import heapq
from math import gcd as igcd
from operator import add, sub

from .errors import GuardExceeded

Terms = dict  # dict[tuple[int, ...], int]


def addmul_into(out: Terms, a: Terms, scale: int = 1) -> None:
    """out += scale * a, in place, dropping cancelled terms."""
    get = out.get
    for m, c in a.items():
        v = get(m, 0) + scale * c
        if v:
            out[m] = v
        else:
            out.pop(m, None)


def add_terms(a: Terms, b: Terms) -> Terms:
    out = dict(a)
    addmul_into(out, b)
    return out


def sub_terms(a: Terms, b: Terms) -> Terms:
    out = dict(a)
    addmul_into(out, b, -1)
    return out


def scale_terms(a: Terms, c: int) -> Terms:
    if c == 0:
        return {}
    if c == 1:
        return a
    return {m: c * v for m, v in a.items()}


def shift_terms(a: Terms, mono: tuple) -> Terms:
    return {tuple(map(add, m, mono)): c for m, c in a.items()}


def mul_terms(a: Terms, b: Terms, max_terms: int | None = None) -> Terms:
    if len(a) < len(b):
        a, b = b, a
    if len(b) == 1:
        ((mb, cb),) = b.items()
        if not any(mb):
            return scale_terms(a, cb)
        return {tuple(map(add, ma, mb)): ca * cb for ma, ca in a.items()}
    out: Terms = {}
    get = out.get
    for mb, cb in b.items():
        for ma, ca in a.items():
            m = tuple(map(add, ma, mb))
            v = get(m, 0) + ca * cb
            if v:
                out[m] = v
            else:
                del out[m]
        if max_terms is not None and len(out) > max_terms:
            raise GuardExceeded(f"product exceeds term ceiling {max_terms}")
    return out


def pow_terms(a: Terms, e: int, max_terms: int | None = None) -> Terms:
    nv = len(next(iter(a))) if a else 0
    result: Terms = {(0,) * nv: 1}
    base = a
    while e:
        if e & 1:
            result = mul_terms(result, base, max_terms)
        e >>= 1
        if e:
            base = mul_terms(base, base, max_terms)
    return result


def content(a: Terms) -> int:
    g = 0
    for c in a.values():
        g = igcd(g, c)
        if g == 1:
            break
    return g


def monomial_content(polys) -> tuple | None:
    """Componentwise minimum exponent over every term of every polynomial."""
    low = None
    for a in polys:
        for m in a:
            low = m if low is None else tuple(map(min, low, m))
    return low


def divide_monomial(a: Terms, mono: tuple) -> Terms:
    if not any(mono):
        return a
    return {tuple(map(sub, m, mono)): c for m, c in a.items()}


def _neg(m: tuple) -> tuple:
    return tuple(-x for x in m)


def divexact_terms(a: Terms, b: Terms) -> Terms | None:
    """Exact quotient a / b in lex order, or None if b does not divide a."""
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    if not a:
        return {}
    lb = max(b)
    cb = b[lb]
    la = max(a)
    if any(x < y for x, y in zip(la, lb)) or a[la] % cb:
        return None
    tb = min(b)
    ta = min(a)
    if any(x < y for x, y in zip(ta, tb)) or a[ta] % b[tb]:
        return None
    rest = [(m, c) for m, c in b.items() if m != lb]
    r = dict(a)
    heap = [_neg(m) for m in r]
    heapq.heapify(heap)
    q: Terms = {}
    while heap:
        m = _neg(heapq.heappop(heap))
        c = r.pop(m, 0)
        if not c:
            continue
        e = tuple(map(sub, m, lb))
        if min(e) < 0:
            return None
        qc, rem = divmod(c, cb)
        if rem:
            return None
        q[e] = qc
        for mb, c2 in rest:
            mm = tuple(map(add, e, mb))
            old = r.get(mm)
            v = (old or 0) - qc * c2
            if v:
                if old is None:
                    heapq.heappush(heap, _neg(mm))
                r[mm] = v
            elif old is not None:
                del r[mm]
    return q


def evaluate_terms(a: Terms, point, modulus: int | None = None) -> int:
    total = 0
    for m, c in a.items():
        v = c
        for x, e in zip(point, m):
            if e:
                v *= pow(x, e, modulus) if modulus else x ** e
        total += v
    return total % modulus if modulus else total


def total_degree(a: Terms) -> int:
    return max((sum(m) for m in a), default=0)

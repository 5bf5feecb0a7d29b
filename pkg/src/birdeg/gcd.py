"""Multivariate integer gcd on raw sparse terms.

The general algorithm is the recursive primitive subresultant PRS, taking
as main variable the one of lowest maximal degree.  ``reduce_group`` adds
the cheap paths used when normalizing the components of a rational map:
monomial content, trial division by caller-supplied candidate factors, and
a modular coprimality proof (see ``_modular``).
"""

from __future__ import annotations

from math import gcd as igcd

from . import _sparse as sp
from ._modular import certify_coprime


def _strip_monomial(a):
    low = sp.monomial_content([a])
    return sp.divide_monomial(a, low), low


def _coeffs_in(a, v):
    """Split a as a univariate polynomial in variable v (coefficient list)."""
    out: dict[int, dict] = {}
    for m, c in a.items():
        e = m[v]
        key = m[:v] + (0,) + m[v + 1:] if e else m
        out.setdefault(e, {})[key] = c
    top = max(out)
    return [out.get(i, {}) for i in range(top + 1)]


def _assemble(coeffs, v):
    res = {}
    for e, cf in enumerate(coeffs):
        for m, c in cf.items():
            key = m[:v] + (e,) + m[v + 1:] if e else m
            res[key] = c
    return res


def _exact(a, b):
    q = sp.divexact_terms(a, b)
    if q is None:
        raise ArithmeticError("inexact division inside subresultant PRS")
    return q


def _const(nvars, c=1):
    return {(0,) * nvars: c}


def _is_const(a):
    return len(a) == 1 and not any(next(iter(a)))


def _prem(A, B):
    """Pseudo-remainder lc(B)**(deg A - deg B + 1) * A mod B."""
    db = len(B) - 1
    lcb = B[-1]
    R = list(A)
    for i in range(len(A) - 1 - db, -1, -1):
        if len(R) - 1 == db + i and R:
            lcr = R[-1]
            new = [sp.mul_terms(c, lcb) for c in R]
            for j, bc in enumerate(B):
                t = sp.mul_terms(lcr, bc)
                new[i + j] = sp.sub_terms(new[i + j], t)
            R = new
        else:
            R = [sp.mul_terms(c, lcb) for c in R]
        while R and not R[-1]:
            R.pop()
    return R


def _subresultant_gcd(A, B, nvars):
    """Last nonzero subresultant of primitive A, B (univariate lists)."""
    if len(A) < len(B):
        A, B = B, A
    g = _const(nvars)
    h = _const(nvars)
    while True:
        delta = len(A) - len(B)
        R = _prem(A, B)
        if not R:
            return B
        if len(R) == 1:
            return [_const(nvars)]
        divisor = sp.mul_terms(g, sp.pow_terms(h, delta)) if delta else g
        A, B = B, [_exact(c, divisor) for c in R]
        g = A[-1]
        if delta == 0:
            pass
        elif delta == 1:
            h = g
        else:
            h = _exact(sp.pow_terms(g, delta), sp.pow_terms(h, delta - 1))


def _multi_gcd(polys, nvars, vars_left):
    acc = None
    for p in polys:
        if not p:
            continue
        acc = p if acc is None else _gcd_rec(acc, p, nvars, vars_left)
        if _is_const(acc):
            return _const(nvars)
    return acc if acc is not None else {}


def _gcd_rec(a, b, nvars, vars_left):
    a, ma = _strip_monomial(a)
    b, mb = _strip_monomial(b)
    mono = tuple(map(min, ma, mb))
    ca, cb = sp.content(a), sp.content(b)
    ic = igcd(ca, cb)
    a = {m: c // ca for m, c in a.items()}
    b = {m: c // cb for m, c in b.items()}
    core = _gcd_core(a, b, nvars, vars_left)
    return sp.shift_terms(sp.scale_terms(core, ic), mono)


def _gcd_core(a, b, nvars, vars_left):
    if _is_const(a) or _is_const(b) or not vars_left:
        return _const(nvars)
    if a == b:
        return a
    degs = {}
    for v in vars_left:
        da = max(m[v] for m in a)
        db = max(m[v] for m in b)
        if da or db:
            degs[v] = (max(da, db), da, db)
    if not degs:
        return _const(nvars)
    v = min(degs, key=lambda k: degs[k][0])
    _, da, db = degs[v]
    rest = tuple(u for u in vars_left if u != v)
    if da == 0 or db == 0:
        # the gcd cannot involve v
        poly, other = (b, a) if da == 0 else (a, b)
        cont = _multi_gcd(_coeffs_in(poly, v), nvars, rest)
        return _gcd_rec(cont, other, nvars, rest)
    A = _coeffs_in(a, v)
    B = _coeffs_in(b, v)
    cont_a = _multi_gcd(A, nvars, rest)
    cont_b = _multi_gcd(B, nvars, rest)
    c = _gcd_rec(cont_a, cont_b, nvars, rest)
    A = [_exact(x, cont_a) if x else {} for x in A]
    B = [_exact(x, cont_b) if x else {} for x in B]
    G = _subresultant_gcd(A, B, nvars)
    cont_g = _multi_gcd(G, nvars, rest)
    G = [_exact(x, cont_g) if x else {} for x in G]
    return sp.mul_terms(c, _assemble(G, v))


def normalize_sign(a):
    if a and a[max(a)] < 0:
        return {m: -c for m, c in a.items()}
    return a


def gcd_terms(a, b, nvars):
    """Primitive gcd with positive leading coefficient; gcd(0, 0) = 0."""
    if not a and not b:
        return {}
    if not a or not b:
        p = a or b
        c = sp.content(p)
        return normalize_sign({m: v // c for m, v in p.items()})
    g = _gcd_rec(a, b, nvars, tuple(range(nvars)))
    c = sp.content(g)
    return normalize_sign({m: v // c for m, v in g.items()})


def _prepare_candidates(cands, nvars, max_degree):
    out = []
    seen = set()
    for c in cands:
        if not c:
            continue
        c, _ = _strip_monomial(c)
        if _is_const(c) or sp.total_degree(c) > max_degree:
            continue
        k = sp.content(c)
        c = normalize_sign({m: v // k for m, v in c.items()})
        key = frozenset(c.items())
        if key not in seen:
            seen.add(key)
            out.append(c)
    # split into a pairwise coprime family
    changed = True
    rounds = 0
    while changed and rounds < 8:
        changed = False
        rounds += 1
        for i in range(len(out)):
            for j in range(i + 1, len(out)):
                if certify_coprime([out[i], out[j]], nvars):
                    continue
                g = gcd_terms(out[i], out[j], nvars)
                if _is_const(g):
                    continue
                parts = [g, sp.divexact_terms(out[i], g), sp.divexact_terms(out[j], g)]
                rest = [c for k, c in enumerate(out) if k not in (i, j)]
                out = rest + [p for p in parts if p and not _is_const(p)]
                changed = True
                break
            if changed:
                break
    return out


def reduce_group(comps, nvars, candidates=()):
    """Divide a list of components by their gcd and integer content.

    Returns (reduced components, removed-factor) where the removed factor is
    reported only as the list of pieces found (for diagnostics).  Zero
    components stay zero.  The first nonzero component ends up with a
    positive leading coefficient.
    """
    live = [i for i, c in enumerate(comps) if c]
    if not live:
        raise ValueError("all components are zero")
    comps = list(comps)
    low = sp.monomial_content([comps[i] for i in live])
    for i in live:
        comps[i] = sp.divide_monomial(comps[i], low)
    removed = []
    if any(low):
        removed.append(("monomial", low))

    def coprime():
        return any(len(comps[i]) == 1 for i in live) or certify_coprime(
            [comps[i] for i in live], nvars
        )

    if not coprime():
        degree_cap = min(sp.total_degree(comps[i]) for i in live)
        for f in _prepare_candidates(candidates, nvars, degree_cap):
            while True:
                qs = []
                for i in live:
                    q = sp.divexact_terms(comps[i], f)
                    if q is None:
                        break
                    qs.append(q)
                else:
                    for i, q in zip(live, qs):
                        comps[i] = q
                    removed.append(("candidate", f))
                    continue
                break
        if not coprime():
            g = None
            for i in live:
                g = comps[i] if g is None else gcd_terms(g, comps[i], nvars)
                if _is_const(g):
                    break
            if not _is_const(g):
                for i in live:
                    comps[i] = _exact(comps[i], g)
                removed.append(("prs", g))
    k = 0
    for i in live:
        k = igcd(k, sp.content(comps[i]))
    first = comps[live[0]]
    if first[max(first)] < 0:
        k = -k
    if k != 1:
        for i in live:
            comps[i] = {m: c // k for m, c in comps[i].items()}
    return comps, removed

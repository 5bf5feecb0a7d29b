"""Coprimality proofs by restriction to a random line over a prime field.

For multihomogeneous integer polynomials P_0..P_k, substitute every
variable x_i -> a_i*s + b_i*t with random residues mod a prime.  This is a
ring homomorphism into F_p[s, t] that sends a form of degree e to a binary
form of degree e (or to zero).  A primitive common factor G of degree e > 0
would map to a nonzero binary form of degree e dividing every nonzero image,
so a constant gcd of the images *proves* the P_i have no common factor of
positive degree.  A nonconstant image gcd proves nothing; callers retry or
fall back to an exact gcd.
"""

from __future__ import annotations

import random

import numpy as np

PRIME = 2_147_483_647  # 2**31 - 1; products of two residues fit in int64
MAX_LINE_DEGREE = 2000
_CHUNK = 1 << 22


def _trim(f: np.ndarray) -> np.ndarray:
    nz = np.flatnonzero(f)
    return f[: nz[-1] + 1] if nz.size else f[:0]


def _vec_pow(base: np.ndarray, exps: np.ndarray) -> np.ndarray:
    """Table of base**e mod p, shape (len(exps), len(base))."""
    out = np.ones((exps.size, base.size), dtype=np.int64)
    b = base.copy()
    e = exps.copy()
    while e.any():
        odd = (e & 1).astype(bool)
        if odd.any():
            out[odd] = out[odd] * b % PRIME
        e >>= 1
        b = b * b % PRIME
    return out


def _interpolate(vals: np.ndarray) -> np.ndarray:
    """Coefficients (low to high) of the polynomial through (j, vals[j])."""
    n = vals.size
    coef = vals.copy()
    for k in range(1, n):
        inv = pow(k, PRIME - 2, PRIME)
        coef[k:] = (coef[k:] - coef[k - 1:-1]) % PRIME * inv % PRIME
    poly = np.array([coef[-1]], dtype=np.int64)
    for k in range(n - 2, -1, -1):
        nxt = np.zeros(poly.size + 1, dtype=np.int64)
        nxt[1:] = poly
        nxt[:-1] = (nxt[:-1] - k * poly) % PRIME
        nxt[0] = (nxt[0] + coef[k]) % PRIME
        poly = nxt
    return _trim(poly)


def line_images(polys, nvars: int, rng: random.Random):
    """Restrict each polynomial to one random line; None if too large."""
    degs = [max((sum(m) for m in p), default=0) for p in polys]
    D = max(degs, default=0)
    if D > MAX_LINE_DEGREE:
        return None
    a = [rng.randrange(1, PRIME) for _ in range(nvars)]
    b = [rng.randrange(1, PRIME) for _ in range(nvars)]
    s = np.arange(D + 1, dtype=np.int64)
    vals_on_line = [(ai * s + bi) % PRIME for ai, bi in zip(a, b)]
    images = []
    for p in polys:
        if not p:
            images.append(np.zeros(0, dtype=np.int64))
            continue
        monos = list(p)
        expo = np.array(monos, dtype=np.int64).reshape(len(monos), nvars)
        coeffs = np.array([p[m] % PRIME for m in monos], dtype=np.int64)
        acc = np.zeros(D + 1, dtype=np.int64)
        step = max(1, _CHUNK // (D + 1))
        for lo in range(0, len(monos), step):
            ex = expo[lo:lo + step]
            tv = np.ones((ex.shape[0], D + 1), dtype=np.int64)
            for k in range(nvars):
                col = ex[:, k]
                if not col.any():
                    continue
                uniq, inv = np.unique(col, return_inverse=True)
                table = _vec_pow(vals_on_line[k], uniq)
                tv = tv * table[inv] % PRIME
            tv = tv * coeffs[lo:lo + step, None] % PRIME
            acc = (acc + tv.sum(axis=0) % PRIME) % PRIME
        images.append(_interpolate(acc))
    return images, degs


def _polymod(f: np.ndarray, g: np.ndarray) -> np.ndarray:
    f = f.copy()
    dg = g.size - 1
    inv = pow(int(g[-1]), PRIME - 2, PRIME)
    while f.size - 1 >= dg and f.size:
        c = int(f[-1]) * inv % PRIME
        shift = f.size - 1 - dg
        f[shift:] = (f[shift:] - c * g) % PRIME
        f = _trim(f)
    return f


def poly_gcd_degree(images) -> int:
    g = None
    for f in images:
        if not f.size:
            continue
        if g is None:
            g = f
            continue
        a, b = g, f
        while b.size:
            a, b = b, _polymod(a, b)
        g = a
        if g.size == 1:
            return 0
    return -1 if g is None else g.size - 1


def certify_coprime(polys, nvars: int, attempts: int = 2, seed: int = 0x5EED) -> bool:
    """True only if the polynomials are proven to share no nonconstant factor."""
    nonzero = [p for p in polys if p]
    if not nonzero:
        return False
    if any(len(p) == 1 and not any(next(iter(p))) for p in nonzero):
        return True
    rng = random.Random(seed)
    for _ in range(attempts):
        out = line_images(nonzero, nvars, rng)
        if out is None:
            return False
        images, degs = out
        live = [(img, d) for img, d in zip(images, degs) if img.size]
        if not live:
            continue
        gdeg = poly_gcd_degree([img for img, _ in live])
        t_mult = min(d - (img.size - 1) for img, d in live)
        if gdeg + t_mult == 0:
            return True
    return False

"""Certified spectral radius of an integer matrix.

Pipeline:
  1. split into irreducible diagonal blocks (strongly connected components of
     the nonzero pattern), whose spectra together make up the spectrum;
  2. exact characteristic polynomial of each block, by Faddeev-LeVerrier
     modulo several word-size primes and Chinese remaindering;
  3. square-free part by an exact univariate gcd;
  4. roots seeded in floating point, polished by Newton's method in mpmath,
     and certified with the inclusion discs |z - z_i| <= deg*|p(z_i)/p'(z_i)|:
     when those discs are pairwise disjoint each holds exactly one root.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath
import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from ._sparse import divexact_terms
from .errors import SpectralError
from .gcd import gcd_terms

_DPS = 60
# primes below 2**22; products of n of them stay exact in float64 for n <= 256
_PRIME_START = (1 << 22) - 3


@dataclass(frozen=True)
class SpectralEstimate:
    value: float
    radius_error_bound: float  # relative
    method: str

    def __float__(self):
        return self.value


def _primes(count: int, start: int = _PRIME_START):
    out = []
    p = start
    while len(out) < count:
        if p % 2 and all(p % q for q in range(3, math.isqrt(p) + 1, 2)):
            out.append(p)
        p -= 2
    return out


_PRIME_CACHE: list[int] = []


def _get_primes(count: int):
    if len(_PRIME_CACHE) < count:
        _PRIME_CACHE[:] = _primes(count)
    return _PRIME_CACHE[:count]


def _charpoly_mod(M: np.ndarray, p: int) -> list[int]:
    """Faddeev-LeVerrier modulo p: monic coefficients c_n=1, c_{n-1}, ..., c_0."""
    n = M.shape[0]
    A = M % p
    Mk = np.zeros_like(A)
    coeffs = [1]
    c = 1
    eye = np.eye(n, dtype=np.float64)
    for k in range(1, n + 1):
        Mk = (Mk + c * eye) % p
        AM = np.fmod(A @ Mk, p)
        tr = int(np.trace(AM)) % p
        c = (-tr * pow(k, p - 2, p)) % p
        coeffs.append(c)
        Mk = AM
    return coeffs


def charpoly(rows) -> list[int]:
    """Exact characteristic polynomial det(xI - M), highest degree first."""
    n = len(rows)
    if n == 0:
        return [1]
    if n > 256:
        raise SpectralError("matrix too large for the float64 modular kernel")
    R = max(sum(abs(x) for x in r) for r in rows)
    bits = n * math.log2(1 + R) + 2
    primes = _get_primes(max(1, math.ceil(bits / 21.9)))
    for p in primes:
        if p <= n:
            raise SpectralError("prime too small for Faddeev-LeVerrier")
    M = np.array([[x for x in r] for r in rows], dtype=object)
    residues = []
    for p in primes:
        Mp = np.array((M % p).tolist(), dtype=np.float64)
        residues.append(_charpoly_mod(Mp, p))
    # Chinese remaindering, coefficientwise
    modulus = 1
    out = [0] * (n + 1)
    for p, res in zip(primes, residues):
        inv = pow(modulus % p, -1, p) if modulus > 1 else None
        for i, r in enumerate(res):
            if modulus == 1:
                out[i] = r
            else:
                t = ((r - out[i]) * inv) % p
                out[i] = out[i] + modulus * t
        modulus *= p
    half = modulus // 2
    return [x - modulus if x > half else x for x in out]


def _blocks(rows):
    n = len(rows)
    pattern = csr_matrix(np.array([[1 if x else 0 for x in r] for r in rows], dtype=np.int8))
    k, labels = connected_components(pattern, directed=True, connection="strong")
    out = []
    for c in range(k):
        idx = [i for i in range(n) if labels[i] == c]
        out.append([[rows[i][j] for j in idx] for i in idx])
    return out


def _squarefree(coeffs: list[int]) -> list[int]:
    n = len(coeffs) - 1
    if n <= 1:
        return coeffs
    p = {(n - i,): c for i, c in enumerate(coeffs) if c}
    dp = {(e[0] - 1,): e[0] * c for e, c in p.items() if e[0]}
    g = gcd_terms(p, dp, 1)
    gd = max(g)[0]
    if gd == 0:
        return coeffs
    q = divexact_terms(p, g)
    qd = max(q)[0]
    return [q.get((qd - i,), 0) for i in range(qd + 1)]


def _seed_roots(coeffs):
    top = max(abs(c) for c in coeffs)
    shift = max(0, top.bit_length() - 900)
    try:
        fl = [float(c >> shift) if c >= 0 else -float((-c) >> shift) for c in coeffs]
        if not all(math.isfinite(x) for x in fl):
            return None
        return list(np.roots(fl))
    except (OverflowError, np.linalg.LinAlgError):
        return None


def _certify(coeffs, roots):
    """Polish roots and return (roots, radii) if the inclusion discs are disjoint."""
    n = len(coeffs) - 1
    mp_coeffs = [mpmath.mpf(c) for c in coeffs]
    polished, radii = [], []
    for z in roots:
        z = mpmath.mpc(z)
        for _ in range(100):
            val, der = mpmath.polyval(mp_coeffs, z, derivative=True)
            if der == 0:
                return None
            step = val / der
            z -= step
            if abs(step) <= abs(z) * mpmath.mpf(10) ** (-_DPS + 8):
                break
        val, der = mpmath.polyval(mp_coeffs, z, derivative=True)
        if der == 0:
            return None
        polished.append(z)
        radii.append(n * abs(val / der))
    for i in range(n):
        for j in range(i + 1, n):
            if abs(polished[i] - polished[j]) <= radii[i] + radii[j]:
                return None
    return polished, radii


def _block_radius(coeffs):
    """(radius, absolute error, method) for the roots of an integer polynomial."""
    n = len(coeffs) - 1
    if n == 0:
        return 0.0, 0.0, "empty"
    if n == 1:
        return abs(mpmath.mpf(coeffs[1]) / coeffs[0]), mpmath.mpf(0), "linear"
    with mpmath.workdps(_DPS):
        seeds = _seed_roots(coeffs)
        cert = _certify(coeffs, seeds) if seeds is not None and len(seeds) == n else None
        method = "newton discs"
        if cert is None:
            try:
                seeds = mpmath.polyroots([mpmath.mpf(c) for c in coeffs], maxsteps=400, extraprec=4 * _DPS)
            except mpmath.libmp.libhyper.NoConvergence as exc:
                raise SpectralError(f"root finding did not converge: {exc}") from exc
            cert = _certify(coeffs, seeds)
            method = "durand-kerner discs"
        if cert is None:
            raise SpectralError("could not separate the roots of the characteristic polynomial")
        roots, radii = cert
        mods = [abs(z) for z in roots]
        k = max(range(n), key=lambda i: mods[i])
        err = max(radii)
        return mods[k], err, method


def spectral_radius_rows(rows) -> SpectralEstimate:
    n = len(rows)
    best = mpmath.mpf(0)
    err = mpmath.mpf(0)
    methods = set()
    with mpmath.workdps(_DPS):
        for block in _blocks(rows):
            cp = _squarefree(charpoly(block))
            r, e, m = _block_radius(cp)
            methods.add(m)
            if r > best:
                best = r
            err = max(err, e)
        value = float(best)
        rel = float(err / best) if best else float(err)
    return SpectralEstimate(value, rel, "exact charpoly + " + "/".join(sorted(methods)))

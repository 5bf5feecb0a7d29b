"""Integer matrices and the monomial maps they define.

A matrix M acts on the torus by u_i -> prod_j u_j^{M_ij}: row i is the
exponent vector of the i-th image coordinate, so h_M∘h_N = h_{MN}.  The
dynamical degrees of h_M are the spectral radii of the exterior powers of M,
which makes this module the exact oracle for the identity checks.
"""

from __future__ import annotations

import json
from itertools import combinations

from .errors import NotUnimodular, SingularMatrix
from .polyring import BlockShape, Polynomial
from .profiles import DynDegProfile, exact_entry
from .projmap import RationalMap, normalize
from .spectral import SpectralEstimate, spectral_radius_rows


class IntMatrix:
    """Square matrix with Python-int entries (immutable)."""

    __slots__ = ("rows",)

    def __init__(self, rows):
        rows = tuple(tuple(int(x) for x in r) for r in rows)
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise ValueError("matrix must be square with dimension >= 1")
        self.rows = rows

    @property
    def n(self) -> int:
        return len(self.rows)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def diag(cls, *entries) -> "IntMatrix":
        n = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)])

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        return isinstance(other, IntMatrix) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if other.n != self.n:
            raise ValueError("dimension mismatch")
        cols = list(zip(*other.rows))
        return IntMatrix([[sum(a * b for a, b in zip(r, c)) for c in cols] for r in self.rows])

    def __neg__(self):
        return IntMatrix([[-x for x in r] for r in self.rows])

    def __pow__(self, e: int) -> "IntMatrix":
        if e < 0:
            return inverse_unimodular(self) ** (-e)
        out = IntMatrix.identity(self.n)
        base = self
        while e:
            if e & 1:
                out = out @ base
            e >>= 1
            if e:
                base = base @ base
        return out

    def transpose(self) -> "IntMatrix":
        return IntMatrix(list(zip(*self.rows)))

    def direct_sum(self, other: "IntMatrix") -> "IntMatrix":
        n, m = self.n, other.n
        rows = [list(r) + [0] * m for r in self.rows]
        rows += [[0] * n + list(r) for r in other.rows]
        return IntMatrix(rows)

    def tolist(self):
        return [list(r) for r in self.rows]

    def __repr__(self):
        return f"IntMatrix({self.tolist()})"

    # file format: {"n": n, "entries": row-major decimal strings}
    def to_dict(self):
        return {"n": self.n, "entries": [str(x) for r in self.rows for x in r]}

    @classmethod
    def from_dict(cls, doc) -> "IntMatrix":
        n = int(doc["n"])
        entries = [int(x) for x in doc["entries"]]
        if len(entries) != n * n:
            raise ValueError(f"expected {n * n} entries, got {len(entries)}")
        return cls([entries[i * n:(i + 1) * n] for i in range(n)])


def _as_matrix(M) -> IntMatrix:
    return M if isinstance(M, IntMatrix) else IntMatrix(M)


def load_matrix(path) -> IntMatrix:
    with open(path) as fh:
        return IntMatrix.from_dict(json.load(fh))


def save_matrix(M: IntMatrix, path) -> None:
    with open(path, "w") as fh:
        json.dump(M.to_dict(), fh)
        fh.write("\n")


# determinants -------------------------------------------------------------------


def det_bareiss(M) -> int:
    """Fraction-free Gaussian elimination."""
    a = [list(r) for r in _as_matrix(M).rows]
    n = len(a)
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            piv = next((i for i in range(k + 1, n) if a[i][k]), None)
            if piv is None:
                return 0
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
            row_i[k] = 0
        prev = akk
    return sign * a[n - 1][n - 1]


def det_cofactor(M) -> int:
    """Laplace expansion along the first row (small matrices only)."""
    rows = _as_matrix(M).rows

    def rec(rows):
        n = len(rows)
        if n == 1:
            return rows[0][0]
        total = 0
        for j, x in enumerate(rows[0]):
            if x:
                minor = [r[:j] + r[j + 1:] for r in rows[1:]]
                total += (-1) ** j * x * rec(minor)
        return total

    return rec(rows)


def det(M) -> int:
    M = _as_matrix(M)
    return det_cofactor(M) if M.n <= 4 else det_bareiss(M)


def adjugate(M) -> IntMatrix:
    M = _as_matrix(M)
    n = M.n
    if n == 1:
        return IntMatrix([[1]])
    rows = M.rows
    cof = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [r[:j] + r[j + 1:] for k, r in enumerate(rows) if k != i]
            cof[i][j] = (-1) ** (i + j) * det(IntMatrix(minor))
    return IntMatrix(list(zip(*cof)))


def inverse_unimodular(M) -> IntMatrix:
    M = _as_matrix(M)
    d = det(M)
    if d not in (1, -1):
        raise NotUnimodular(f"determinant is {d}, not ±1")
    adj = adjugate(M)
    return IntMatrix([[d * x for x in r] for r in adj.rows])


def exterior_power(M, p: int) -> IntMatrix:
    """Matrix of p x p minors, index subsets in lexicographic order."""
    M = _as_matrix(M)
    n = M.n
    if not 0 <= p <= n:
        raise ValueError(f"p must lie in [0, {n}], got {p}")
    if p == 0:
        return IntMatrix([[1]])
    subsets = list(combinations(range(n), p))
    rows = M.rows
    out = []
    for I in subsets:
        sub_rows = [rows[i] for i in I]
        out.append([det_bareiss([[r[j] for j in J] for r in sub_rows]) if p > 1 else sub_rows[0][J[0]]
                    for J in subsets])
    return IntMatrix(out)


def spectral_radius(M) -> SpectralEstimate:
    return spectral_radius_rows(_as_matrix(M).rows)


# maps ---------------------------------------------------------------------------


def clearing_rows(M):
    """Shifted exponent rows (zero row first) and the common degree D."""
    M = _as_matrix(M)
    rows = [(0,) * M.n] + list(M.rows)
    mins = [min(col) for col in zip(*rows)]
    shifted = [tuple(x - m for x, m in zip(r, mins)) for r in rows]
    D = max(sum(r) for r in shifted)
    return shifted, D, mins


def to_projective(M) -> RationalMap:
    """The monomial map h_M as a reduced self-map of P^n."""
    M = _as_matrix(M)
    if det(M) == 0:
        raise SingularMatrix("monomial map of a singular matrix is not dominant")
    shifted, D, _ = clearing_rows(M)
    shape = BlockShape((M.n,))
    comps = tuple(Polynomial(shape, {(D - sum(r),) + r: 1}) for r in shifted)
    return RationalMap(shape, shape, (comps,), label=f"h_M (deg {D})")


def monomial_degree(M) -> int:
    """Degree of h_M from the clearing formula, without building the map."""
    return clearing_rows(M)[1]


def linear_map(L) -> RationalMap:
    """x -> L x on P^{n-1}."""
    L = _as_matrix(L)
    if det(L) == 0:
        raise SingularMatrix("linear map needs an invertible matrix")
    shape = BlockShape((L.n - 1,))
    gens = Polynomial.gens(shape)
    comps = []
    for r in L.rows:
        terms = {}
        for c, g in zip(r, gens):
            if c:
                ((m, _),) = g.terms.items()
                terms[m] = c
        comps.append(Polynomial(shape, terms))
    return normalize([comps], label="linear")


def monomial_dyndeg_profile(M) -> DynDegProfile:
    """λ_p(h_M) = ρ(Λ^p M) for p = 0..n."""
    M = _as_matrix(M)
    d = det(M)
    if d == 0:
        raise SingularMatrix("dynamical degrees need det(M) != 0")
    entries = [exact_entry(1, 0, "λ_0")]
    for p in range(1, M.n):
        est = spectral_radius(exterior_power(M, p))
        entries.append(exact_entry(est.value, est.radius_error_bound))
    entries.append(exact_entry(abs(d), 0, "|det M|"))
    return DynDegProfile(tuple(entries), "monomial", {"provenance": "exact-monomial oracle: λ_p = ρ(Λ^p M)"})

"""Independent reference implementations used only by the tests.

Nothing here imports the package's algorithms: these are slow, obvious
versions (permutation expansion, Berkowitz, dense evaluation) that the
fast code is checked against.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import permutations, product


def leibniz_det(rows) -> int:
    n = len(rows)
    total = 0
    for perm in permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = 1
        for i in range(n):
            term *= rows[i][perm[i]]
        total += -term if inv % 2 else term
    return total


def cofactor3(m) -> int:
    (a, b, c), (d, e, f), (g, h, i) = m
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


def matmul(A, B):
    return [[sum(A[i][k] * B[k][j] for k in range(len(B))) for j in range(len(B[0]))] for i in range(len(A))]


def berkowitz(rows) -> list[int]:
    """Characteristic polynomial det(xI - M), highest degree first."""
    n = len(rows)
    A = [list(r) for r in rows]
    # Berkowitz: build the Toeplitz products from the bottom-right corner up
    vect = [1]
    for r in range(n - 1, -1, -1):
        k = n - r
        a = A[r][r]
        R = A[r][r + 1:]
        C = [A[i][r] for i in range(r + 1, n)]
        S = [row[r + 1:] for row in A[r + 1:]]
        # column of the Toeplitz matrix: 1, -a, -R C, -R S C, ...
        col = [1, -a]
        v = C
        for _ in range(k - 1):
            col.append(-sum(x * y for x, y in zip(R, v)))
            v = [sum(S[i][j] * v[j] for j in range(len(v))) for i in range(len(v))]
        new = []
        for i in range(k + 1):
            new.append(sum(col[i - j] * vect[j] for j in range(min(i, len(vect) - 1) + 1) if i - j < len(col)))
        vect = new
    return vect


def poly_eval_dense(terms: dict, point) -> int:
    total = 0
    for m, c in terms.items():
        v = c
        for x, e in zip(point, m):
            v *= x ** e
        total += v
    return total


def resultant_linear_2(p, q) -> int:
    """Resultant of two binary linear forms a0 x0 + a1 x1: a 2x2 determinant."""
    return p[0] * q[1] - p[1] * q[0]


def hand_clearing_degree(M) -> int:
    """Degree of the monomial map from the clearing recipe, written out longhand."""
    n = len(M)
    mins = []
    for j in range(n):
        col = [0] + [M[i][j] for i in range(n)]
        mins.append(min(col))
    best = sum(-m for m in mins)  # the zero row after shifting
    for i in range(n):
        s = sum(M[i][j] - mins[j] for j in range(n))
        best = max(best, s)
    return best


def eval_map_at(groups, point):
    return [[poly_eval_dense(p.terms, point) for p in g] for g in groups]


def projectively_equal(u, v) -> bool:
    if not any(u) or not any(v):
        return False
    return all(u[i] * v[j] == u[j] * v[i] for i in range(len(u)) for j in range(len(u)))


def random_point(n, rng: random.Random, lo=-50, hi=50):
    return [rng.randint(lo, hi) or 1 for _ in range(n)]


def eval_univariate(coeffs, x: Fraction) -> Fraction:
    return sum(Fraction(c) * x ** (len(coeffs) - 1 - i) for i, c in enumerate(coeffs))


def exterior_eigen_products(eigs, p):
    """All p-fold products of eigenvalues over index subsets."""
    from itertools import combinations

    out = []
    for I in combinations(range(len(eigs)), p):
        v = 1
        for i in I:
            v *= eigs[i]
        out.append(v)
    return out


def all_monomials(nvars, degree):
    for m in product(range(degree + 1), repeat=nvars):
        if sum(m) == degree:
            yield m

"""Independent reference computations used to freeze and cross-check values.

None of these share code with the package: they use brute force, floating
LP with a margin (scipy), determinantal divisors, and exhaustive search.
"""
from __future__ import annotations

import itertools
import math
import random
from fractions import Fraction

import numpy as np
from scipy.optimize import linprog


def minors_gcd_factors(rows):
    """Invariant factors from determinantal divisors d_k = gcd of k x k minors."""
    m, n = len(rows), len(rows[0])

    def det(mat):
        mat = [[Fraction(x) for x in r] for r in mat]
        k, sign, out = len(mat), 1, Fraction(1)
        for c in range(k):
            p = next((r for r in range(c, k) if mat[r][c] != 0), None)
            if p is None:
                return 0
            if p != c:
                mat[c], mat[p] = mat[p], mat[c]
                sign = -sign
            out *= mat[c][c]
            for r in range(c + 1, k):
                f = mat[r][c] / mat[c][c]
                mat[r] = [a - f * b for a, b in zip(mat[r], mat[c])]
        return int(sign * out)

    divisors = [1]
    for k in range(1, min(m, n) + 1):
        g = 0
        for rs in itertools.combinations(range(m), k):
            for cs in itertools.combinations(range(n), k):
                g = math.gcd(g, det([[rows[r][c] for c in cs] for r in rs]))
        if g == 0:
            break
        divisors.append(g)
    return tuple(divisors[k] // divisors[k - 1] for k in range(1, len(divisors)))


def semigroup_exhaustive(columns, v, max_total):
    """v in N-span of columns, searching coefficient vectors with sum <= max_total."""
    n = len(columns)
    d = len(v)
    for total in range(max_total + 1):
        for combo in itertools.combinations_with_replacement(range(n), total):
            s = [0] * d
            for j in combo:
                s = [a + b for a, b in zip(s, columns[j])]
            if tuple(s) == tuple(v):
                return True
    return False


def umbrella_lp_oracle(columns, L_d):
    """Umbrella faces by brute force over all column subsets.

    tau is a face iff some (w0, w) with w0 > 0 vanishes on (L_j, a_j) for
    j in tau and is positive on the others (strictly, via a margin LP).
    """
    n, d = len(columns), len(columns[0])
    pts = [[float(L_d[j])] + [float(x) for x in columns[j]] for j in range(n)]
    faces = set()
    for k in range(n + 1):
        for tau in itertools.combinations(range(n), k):
            # variables: w0, w (d), t ; maximize t
            c = np.zeros(d + 2)
            c[-1] = -1.0
            A_ub, b_ub, A_eq, b_eq = [], [], [], []
            row = np.zeros(d + 2)
            row[0], row[-1] = -1.0, 1.0
            A_ub.append(row)
            b_ub.append(0.0)
            for j in range(n):
                r = np.array(pts[j] + [0.0])
                if j in tau:
                    A_eq.append(r)
                    b_eq.append(0.0)
                else:
                    r2 = -r
                    r2[-1] = 1.0
                    A_ub.append(r2)
                    b_ub.append(0.0)
            res = linprog(c, A_ub=np.array(A_ub), b_ub=b_ub, A_eq=np.array(A_eq) if A_eq else None,
                          b_eq=b_eq if b_eq else None, bounds=[(-10, 10)] * (d + 1) + [(None, 1)],
                          method="highs")
            if res.status == 0 and -res.fun > 1e-7:
                faces.add(frozenset(tau))
    return faces


def simplex_volume(vertices):
    """|det| of edge vectors of a full-dimensional simplex."""
    v0 = vertices[0]
    m = [[Fraction(a) - b for a, b in zip(v, v0)] for v in vertices[1:]]
    return abs(_fdet(m))


def _fdet(m):
    m = [list(r) for r in m]
    k, out = len(m), Fraction(1)
    for c in range(k):
        p = next((r for r in range(c, k) if m[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            out = -out
        out *= m[c][c]
        for r in range(c + 1, k):
            f = m[r][c] / m[c][c]
            m[r] = [a - f * b for a, b in zip(m[r], m[c])]
    return out


def polygon_area2(points):
    """Twice the area of the convex hull of 2D integer points (monotone chain)."""
    pts = sorted(set(map(tuple, points)))
    if len(pts) < 3:
        return 0

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    return abs(sum(hull[i][0] * hull[i - 1][1] - hull[i - 1][0] * hull[i][1] for i in range(len(hull))))


def random_instance(rng: random.Random, d_max=3, n_max=7, entry=4):
    """A random pointed integer matrix with ZA = Z^d (columns in the open
    positive orthant plus the unit vectors)."""
    d = rng.randint(2, d_max)
    n = rng.randint(d + 1, n_max)
    cols = [tuple(int(i == k) for i in range(d)) for k in range(d)]
    while len(cols) < n:
        c = tuple(rng.randint(0, entry) for _ in range(d))
        if any(c) and c not in cols:
            cols.append(c)
    rng.shuffle(cols)
    return cols


def random_weight(rng: random.Random, n: int, hi=5):
    return tuple(Fraction(rng.randint(0, hi)) for _ in range(n))

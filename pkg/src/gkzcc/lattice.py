"""Exact integer and rational linear algebra over lattices.

Everything here works on Python ints and ``fractions.Fraction``; there is no
floating point anywhere.  Vectors are tuples, matrices are tuples of row
tuples.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from .errors import InfiniteIndex, NotASublattice

INFINITE = math.inf

Vector = tuple


@dataclass(frozen=True)
class IntMatrix:
    """A d x n integer matrix stored row by row.

    Columns are the points a_1, ..., a_n; column indices are 0-based.
    """

    rows: tuple

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in r) for r in self.rows)
        if rows and len({len(r) for r in rows}) != 1:
            raise ValueError("ragged matrix")
        for r, src in zip(rows, self.rows):
            for x, y in zip(r, src):
                if x != y:
                    raise ValueError(f"non-integral entry {y!r}")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def from_columns(cls, columns: Iterable[Sequence[int]], d: int | None = None) -> "IntMatrix":
        cols = [tuple(c) for c in columns]
        if not cols:
            return cls(tuple(() for _ in range(d or 0)))
        d = len(cols[0]) if d is None else d
        return cls(tuple(tuple(c[i] for c in cols) for i in range(d)))

    @property
    def d(self) -> int:
        return len(self.rows)

    @property
    def n(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    @cached_property
    def columns(self) -> tuple:
        return tuple(tuple(r[j] for r in self.rows) for j in range(self.n))

    def column(self, j: int) -> tuple:
        return self.columns[j]

    def select(self, indices: Iterable[int]) -> "IntMatrix":
        """Submatrix on the given column indices (sorted)."""
        return IntMatrix.from_columns([self.columns[j] for j in sorted(indices)], self.d)

    @cached_property
    def epsilon(self) -> tuple:
        """Sum of all columns."""
        return tuple(sum(r) for r in self.rows)

    def __repr__(self):
        return f"IntMatrix({[list(r) for r in self.rows]})"


# ---------------------------------------------------------------------------
# small dense helpers


def identity(n: int) -> list:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a, b) -> list:
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    return [[sum(a[i][k] * b[k][j] for k in range(inner)) for j in range(cols)] for i in range(len(a))]


def transpose(a) -> list:
    if not a:
        return []
    return [list(col) for col in zip(*a)]


def dot(u, v):
    return sum(x * y for x, y in zip(u, v))


def det_int(m) -> int:
    """Determinant of a square integer matrix (Bareiss, fraction free)."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(r) for r in m]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def det_frac(m) -> Fraction:
    n = len(m)
    a = [[Fraction(x) for x in r] for r in m]
    res = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            res = -res
        res *= a[c][c]
        for i in range(c + 1, n):
            f = a[i][c] / a[c][c]
            if f:
                for j in range(c, n):
                    a[i][j] -= f * a[c][j]
    return res


def rref(rows) -> tuple[list, list]:
    """Reduced row echelon form over Q.  Returns (nonzero rows, pivot columns)."""
    a = [[Fraction(x) for x in r] for r in rows]
    if not a:
        return [], []
    ncols = len(a[0])
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a[:r], pivots


def rank_q(vectors) -> int:
    vectors = [v for v in vectors]
    if not vectors:
        return 0
    return len(rref(vectors)[1])


def solve_q(columns, rhs):
    """Solve sum_j x_j * columns[j] = rhs over Q; one solution or None."""
    columns = [tuple(c) for c in columns]
    d = len(rhs)
    if not columns:
        return () if all(x == 0 for x in rhs) else None
    aug = [[columns[j][i] for j in range(len(columns))] + [rhs[i]] for i in range(d)]
    red, piv = rref(aug)
    k = len(columns)
    if k in piv:
        return None
    x = [Fraction(0)] * k
    for row, c in zip(red, piv):
        x[c] = row[k]
    return tuple(x)


def nullspace_q(rows, ncols: int) -> list:
    """Basis (over Q) of {x : rows . x = 0}."""
    if not rows:
        return [tuple(Fraction(int(i == j)) for j in range(ncols)) for i in range(ncols)]
    red, piv = rref(rows)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for row, c in zip(red, piv):
            x[c] = -row[f]
        basis.append(tuple(x))
    return basis


def primitive(v) -> tuple:
    """Scale a rational vector to the primitive integer vector in its direction."""
    v = [Fraction(x) for x in v]
    den = 1
    for x in v:
        den = den * x.denominator // math.gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    if g == 0:
        return tuple(ints)
    return tuple(x // g for x in ints)


def frac_inverse(m) -> list:
    n = len(m)
    aug = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(m)]
    red, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in red]


# ---------------------------------------------------------------------------
# normal forms


def smith_normal_form(m) -> tuple[list, list, list]:
    """Smith normal form with transforms.

    Args:
        m: integer matrix (an ``IntMatrix`` or a list of rows).

    Returns:
        ``(U, S, V)`` with ``U @ M @ V == S``, U and V unimodular, S diagonal
        with nonnegative entries s_1 | s_2 | ... .
    """
    if isinstance(m, IntMatrix):
        m = m.rows
    S = [list(r) for r in m]
    rows = len(S)
    cols = len(S[0]) if rows else 0
    U = identity(rows)
    V = identity(cols)

    def swap_rows(i, j):
        S[i], S[j] = S[j], S[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in S:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]

    def add_row(dst, src, q):  # row_dst -= q * row_src
        S[dst] = [a - q * b for a, b in zip(S[dst], S[src])]
        U[dst] = [a - q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):
        for r in S:
            r[dst] -= q * r[src]
        for r in V:
            r[dst] -= q * r[src]

    t = 0
    while t < min(rows, cols):
        entries = [(abs(S[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if S[i][j]]
        if not entries:
            break
        _, i, j = min(entries)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            changed = False
            for i in range(t + 1, rows):
                if S[i][t]:
                    add_row(i, t, S[i][t] // S[t][t])
                    if S[i][t]:
                        swap_rows(t, i)
                        changed = True
            for j in range(t + 1, cols):
                if S[t][j]:
                    add_col(j, t, S[t][j] // S[t][t])
                    if S[t][j]:
                        swap_cols(t, j)
                        changed = True
            if changed:
                continue
            bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                        if S[i][j] % S[t][t]), None)
            if bad is None:
                break
            add_row(t, bad[0], -1)
        if S[t][t] < 0:
            S[t] = [-x for x in S[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return U, S, V


def invariant_factors(m) -> tuple:
    _, S, _ = smith_normal_form(m)
    return tuple(S[i][i] for i in range(min(len(S), len(S[0]) if S else 0)) if S[i][i])


def row_hnf(rows) -> list:
    """Row-style Hermite normal form of the lattice spanned by ``rows``.

    Returns the nonzero rows in echelon form: strictly increasing pivot
    columns, positive pivots, entries above each pivot reduced into
    ``[0, pivot)``.  Canonical for the lattice.
    """
    a = [list(r) for r in rows if any(r)]
    if not a:
        return []
    ncols = len(a[0])
    r = 0
    for c in range(ncols):
        while True:
            nz = [i for i in range(r, len(a)) if a[i][c]]
            if not nz:
                break
            p = min(nz, key=lambda i: abs(a[i][c]))
            a[r], a[p] = a[p], a[r]
            done = True
            for i in range(r + 1, len(a)):
                if a[i][c]:
                    q = a[i][c] // a[r][c]
                    a[i] = [x - q * y for x, y in zip(a[i], a[r])]
                    if a[i][c]:
                        done = False
            if done:
                break
        if r < len(a) and a[r][c]:
            if a[r][c] < 0:
                a[r] = [-x for x in a[r]]
            for i in range(r):
                q = a[i][c] // a[r][c]
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[r])]
            r += 1
            if r == len(a):
                break
    return [tuple(x) for x in a[:r]]


def integer_kernel(rows, ncols: int) -> list:
    """Z-basis of {x in Z^ncols : rows . x = 0}."""
    rows = [list(r) for r in rows]
    if not rows:
        return [tuple(int(i == j) for j in range(ncols)) for i in range(ncols)]
    _, S, V = smith_normal_form(rows)
    rk = sum(1 for i in range(min(len(S), ncols)) if S[i][i])
    return [tuple(V[i][j] for i in range(ncols)) for j in range(rk, ncols)]


# ---------------------------------------------------------------------------
# lattices


class Lattice:
    """A subgroup of Z^d, stored through its canonical Hermite basis.

    Two lattices compare equal exactly when their integer spans agree.
    """

    __slots__ = ("ambient_rank", "basis", "_pivots")

    def __init__(self, ambient_rank: int, generators: Iterable[Sequence[int]] = ()):
        gens = [tuple(int(x) for x in g) for g in generators]
        for g in gens:
            if len(g) != ambient_rank:
                raise ValueError("generator of the wrong length")
        self.ambient_rank = ambient_rank
        self.basis = tuple(row_hnf(gens))
        self._pivots = tuple(next(i for i, x in enumerate(b) if x) for b in self.basis)

    @classmethod
    def standard(cls, d: int) -> "Lattice":
        return cls(d, identity(d))

    @classmethod
    def of_columns(cls, A: IntMatrix, indices: Iterable[int] | None = None) -> "Lattice":
        idx = range(A.n) if indices is None else sorted(indices)
        return cls(A.d, [A.columns[j] for j in idx])

    @property
    def generators(self) -> tuple:
        return self.basis

    @property
    def rank(self) -> int:
        return len(self.basis)

    def __eq__(self, other):
        return (isinstance(other, Lattice) and self.ambient_rank == other.ambient_rank
                and self.basis == other.basis)

    def __hash__(self):
        return hash((self.ambient_rank, self.basis))

    def __repr__(self):
        return f"Lattice({self.ambient_rank}, {[list(b) for b in self.basis]})"

    def reduce(self, v) -> tuple[tuple, tuple]:
        """Canonical coset representative of ``v`` modulo this lattice.

        Returns ``(remainder, coefficients)`` with
        ``v == remainder + sum(c_i * basis_i)``.
        """
        v = list(v)
        coeffs = []
        for b, c in zip(self.basis, self._pivots):
            q = v[c] // b[c]
            coeffs.append(q)
            if q:
                v = [x - q * y for x, y in zip(v, b)]
        return tuple(v), tuple(coeffs)

    def canonical(self, v) -> tuple:
        return self.reduce(v)[0]

    def contains(self, v) -> bool:
        return not any(self.reduce(v)[0])

    def coordinates(self, v) -> tuple:
        rem, coeffs = self.reduce(v)
        if any(rem):
            raise NotASublattice(f"{tuple(v)} is not in {self!r}")
        return coeffs

    def is_sublattice_of(self, other: "Lattice") -> bool:
        return all(other.contains(b) for b in self.basis)

    def contains_rationally(self, v) -> bool:
        """True if ``v`` lies in the rational span of the lattice."""
        return rank_q(list(self.basis) + [tuple(v)]) == self.rank


def lattice_index(superset: Lattice, subset: Lattice):
    """Index [superset : subset]; ``INFINITE`` when the ranks differ."""
    if not subset.is_sublattice_of(superset):
        raise NotASublattice("subset lattice is not contained in superset")
    if subset.rank != superset.rank:
        return INFINITE
    coords = [superset.coordinates(b) for b in subset.basis]
    return abs(det_int(coords))


def saturate(L: Lattice) -> Lattice:
    """Z^d intersected with the rational span of ``L``."""
    d = L.ambient_rank
    if L.rank == 0:
        return Lattice(d)
    if L.rank == d:
        return Lattice.standard(d)
    normals = integer_kernel(L.basis, d)
    return Lattice(d, integer_kernel(normals, d))


def coset_reps(superset: Lattice, subset: Lattice) -> list:
    """One canonical representative per coset of ``subset`` in ``superset``."""
    idx = lattice_index(superset, subset)
    if idx == INFINITE:
        raise InfiniteIndex("coset enumeration needs a finite index")
    coords = [superset.coordinates(b) for b in subset.basis]
    h = row_hnf(coords)
    ranges = [range(h[i][i]) for i in range(len(h))]
    reps = set()
    for c in itertools.product(*ranges):
        v = [0] * superset.ambient_rank
        for ci, b in zip(c, superset.basis):
            if ci:
                v = [x + ci * y for x, y in zip(v, b)]
        reps.add(subset.canonical(v))
    assert len(reps) == idx
    return sorted(reps)


def in_integer_image(M, v) -> bool:
    """True iff ``v`` is an integer combination of the columns of ``M``."""
    if not isinstance(M, IntMatrix):
        M = IntMatrix(M)
    return Lattice.of_columns(M).contains(v)


def quotient_map(sublattice_gens, ambient: Sequence[Sequence[int]]):
    """Coordinates for the torsion-free quotient of a lattice.

    Given generators ``ambient`` of a lattice Lam (vectors in Z^d) and a
    subset ``sublattice_gens`` of Lam, return ``(k, project)`` where ``k`` is
    the rank of Lam / (Lam intersected with the rational span of the
    sublattice) and ``project`` maps a vector of Lam to integer coordinates
    in Z^k of its image.
    """
    lam = Lattice(len(ambient[0]) if ambient else 0, ambient)
    r = lam.rank
    sub = [lam.coordinates(v) for v in sublattice_gens]
    if not sub or not any(any(x) for x in sub):
        keep = list(range(r))
        return r, lambda v: tuple(lam.coordinates(v)[i] for i in keep)
    # rows of U with U @ T = S; T has the sublattice coordinates as columns
    T = transpose(sub)
    U, S, _ = smith_normal_form(T)
    m = sum(1 for i in range(min(len(S), len(S[0]))) if S[i][i])
    proj_rows = U[m:]

    def project(v):
        c = lam.coordinates(v)
        return tuple(dot(row, c) for row in proj_rows)

    return r - m, project


def integer_solution(rows, rhs, ncols: int):
    """An integer x with ``rows @ x == rhs``, or None when none exists.

    ``rhs`` may be rational; a non-integral system simply has no solution.
    """
    rhs = [Fraction(c) for c in rhs]
    if not rows:
        return (0,) * ncols
    U, S, V = smith_normal_form([list(r) for r in rows])
    c = [sum(Fraction(u) * x for u, x in zip(row, rhs)) for row in U]
    y = [0] * ncols
    for i, ci in enumerate(c):
        s = S[i][i] if i < ncols else 0
        if s == 0:
            if ci != 0:
                return None
            continue
        q = ci / s
        if q.denominator != 1:
            return None
        y[i] = int(q)
    return tuple(sum(V[r][k] * y[k] for k in range(ncols)) for r in range(ncols))

"""Exact rational polyhedral geometry.

Cones are handled through their generators and brute-force facet
enumeration, which is plenty at the sizes this engine targets (d <= 5,
a dozen generators).  Entries may be ``Fraction`` or ``PerturbedScalar``;
only ring operations and sign tests are used on cone generators.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import NotPointed, OverlapUnresolved, UnboundedPolytope
from .lattice import IntMatrix, Lattice, det_frac, dot, nullspace_q, primitive, rank_q, rref, solve_q
from .perturbed import PerturbedScalar

FaceIndexSet = frozenset


def det_ring(m) -> object:
    """Determinant over any commutative ring of scalars (Laplace expansion)."""
    n = len(m)
    if n == 0:
        return Fraction(1)
    if not any(isinstance(x, PerturbedScalar) for r in m for x in r):
        return det_frac(m)
    if n == 1:
        return m[0][0]
    total = Fraction(0)
    for j, x in enumerate(m[0]):
        if not x:
            continue
        minor = [r[:j] + r[j + 1:] for r in m[1:]]
        term = x * det_ring(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def orthogonal_vector(vectors) -> tuple:
    """Generalized cross product of D-1 vectors in dimension D.

    The result n satisfies n . x = det(vectors + [x]) for every x.
    """
    vectors = [list(v) for v in vectors]
    D = len(vectors) + 1
    out = []
    for k in range(D):
        minor = [v[:k] + v[k + 1:] for v in vectors]
        c = det_ring(minor)
        out.append(c if (k + D - 1) % 2 == 0 else -c)
    return tuple(out)


def _project_to_span(vectors):
    """Injective coordinate projection of rational vectors onto their span."""
    if not vectors:
        return vectors, 0
    _, piv = rref(vectors)
    return [tuple(v[c] for c in piv) for v in vectors], len(piv)


def cone_facets(generators: Sequence[Sequence]) -> list:
    """Facets of a full-dimensional cone.

    Returns a list of ``(inward_normal, zero_set)`` where ``zero_set`` is the
    frozenset of generator indices on the facet.
    """
    gens = [tuple(g) for g in generators]
    if not gens:
        return []
    D = len(gens[0])
    found = {}
    for subset in itertools.combinations(range(len(gens)), D - 1):
        normal = orthogonal_vector([gens[i] for i in subset])
        if not any(normal):
            continue
        values = [dot(normal, g) for g in gens]
        pos = any(v > 0 for v in values)
        neg = any(v < 0 for v in values)
        if pos and neg:
            continue
        if neg:
            normal = tuple(-x for x in normal)
        zeros = frozenset(i for i, v in enumerate(values) if not v)
        if len(zeros) == len(gens):
            continue
        found.setdefault(zeros, normal)
    return [(nrm, z) for z, nrm in found.items()]


def cone_faces(generators: Sequence[Sequence], full_dimensional: bool | None = None) -> set:
    """All faces of the cone spanned by ``generators`` as generator-index sets.

    The whole cone and its minimal face are included.  Rational generators
    that do not span the ambient space are first projected onto their span.
    """
    gens = [tuple(g) for g in generators]
    everything = frozenset(range(len(gens)))
    if not gens:
        return {everything}
    if not full_dimensional:
        exact = all(not isinstance(x, PerturbedScalar) for g in gens for x in g)
        if exact:
            gens, r = _project_to_span(gens)
            if r == 0:
                return {everything}
    facets = [z for _, z in cone_facets(gens)]
    faces = {everything}
    frontier = set(facets)
    while frontier:
        faces |= frontier
        new = set()
        for f in frontier:
            for g in facets:
                h = f & g
                if h not in faces:
                    new.add(h)
        frontier = new
    return faces


# ---------------------------------------------------------------------------
# exact linear programming


@dataclass
class LPResult:
    status: str  # "optimal", "infeasible", "unbounded"
    x: tuple | None = None
    value: Fraction | None = None


def lp_solve(c, A_ub=(), b_ub=(), A_eq=(), b_eq=()) -> LPResult:
    """Maximize ``c . x`` over free rational variables.

    Constraints are ``A_ub x <= b_ub`` and ``A_eq x == b_eq``.  Dense
    two-phase simplex over ``Fraction`` with Bland's rule.
    """
    nvar = len(c)
    rows, rhs, slack_sign = [], [], []
    for a, b in zip(A_ub, b_ub):
        rows.append(list(a))
        rhs.append(Fraction(b))
        slack_sign.append(1)
    for a, b in zip(A_eq, b_eq):
        rows.append(list(a))
        rhs.append(Fraction(b))
        slack_sign.append(0)
    m = len(rows)
    n_ub = len(A_ub)
    # columns: x+ (nvar), x- (nvar), slacks (n_ub), artificials (m)
    ncols = 2 * nvar + n_ub + m
    T = []
    for i in range(m):
        row = [Fraction(0)] * (ncols + 1)
        for j in range(nvar):
            row[j] = Fraction(rows[i][j])
            row[nvar + j] = -Fraction(rows[i][j])
        if i < n_ub:
            row[2 * nvar + i] = Fraction(1)
        row[ncols] = rhs[i]
        if rhs[i] < 0:
            row = [-x for x in row]
        row[2 * nvar + n_ub + i] = Fraction(1)
        T.append(row)
    basis = [2 * nvar + n_ub + i for i in range(m)]
    art = set(basis)

    def pivot(r, col):
        p = T[r][col]
        T[r] = [x / p for x in T[r]]
        for i in range(m):
            if i != r and T[i][col]:
                f = T[i][col]
                T[i] = [x - f * y for x, y in zip(T[i], T[r])]
        basis[r] = col

    def run(obj, allowed):
        # obj: list of coefficients (maximize); reduced cost r_j = obj_j - c_B B^-1 A_j
        while True:
            enter = None
            for j in allowed:
                if j in basis:
                    continue
                rc = obj[j] - sum(obj[basis[i]] * T[i][j] for i in range(m))
                if rc > 0:
                    enter = j
                    break
            if enter is None:
                return "optimal"
            best = None
            for i in range(m):
                if T[i][enter] > 0:
                    ratio = T[i][ncols] / T[i][enter]
                    key = (ratio, basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return "unbounded"
            pivot(best[1], enter)

    obj1 = [Fraction(0)] * ncols
    for j in art:
        obj1[j] = Fraction(-1)
    run(obj1, range(ncols))
    if any(T[i][ncols] != 0 for i in range(m) if basis[i] in art):
        return LPResult("infeasible")
    # drive artificials out of the basis
    for i in range(m):
        if basis[i] in art:
            col = next((j for j in range(2 * nvar + n_ub) if T[i][j] != 0), None)
            if col is not None:
                pivot(i, col)
    keep = [i for i in range(m) if basis[i] not in art]
    T = [T[i] for i in keep]
    basis = [basis[i] for i in keep]
    m = len(T)
    obj2 = [Fraction(0)] * ncols
    for j in range(nvar):
        obj2[j] = Fraction(c[j])
        obj2[nvar + j] = -Fraction(c[j])
    status = run(obj2, range(2 * nvar + n_ub))
    if status == "unbounded":
        return LPResult("unbounded")
    vals = [Fraction(0)] * ncols
    for i in range(m):
        vals[basis[i]] = T[i][ncols]
    x = tuple(vals[j] - vals[nvar + j] for j in range(nvar))
    return LPResult("optimal", x, sum((Fraction(ci) * xi for ci, xi in zip(c, x)), Fraction(0)))


def pointedness_certificate(A: IntMatrix) -> tuple:
    """Rational h with h . a_i > 0 for every column (here: >= 1).

    Raises:
        NotPointed: the cone over the columns contains a line or a zero column.
    """
    if A.n == 0:
        return tuple(Fraction(0) for _ in range(A.d))
    res = lp_solve([0] * A.d, A_ub=[[-x for x in a] for a in A.columns], b_ub=[-1] * A.n)
    if res.status != "optimal":
        raise NotPointed("no linear functional is positive on all columns")
    h = res.x
    assert all(dot(h, a) > 0 for a in A.columns)
    return h


def integral_certificate(A: IntMatrix) -> tuple:
    """Primitive integer version of the pointedness certificate."""
    return primitive(pointedness_certificate(A))


def cone_face_lattice(A: IntMatrix) -> list:
    """Faces G of A (column-index frozensets), sorted by dimension of RG.

    Raises:
        NotPointed: when the cone is not pointed.
    """
    pointedness_certificate(A)
    faces = cone_faces(A.columns)
    faces.add(frozenset())
    return sorted(faces, key=lambda f: (face_dimension(A, f), sorted(f)))


def face_dimension(A: IntMatrix, face: Iterable[int]) -> int:
    return rank_q([A.columns[j] for j in face])


# ---------------------------------------------------------------------------
# polytopes


@dataclass(frozen=True)
class Polytope:
    """Convex hull of ``points`` plus the cone over ``rays``."""

    points: tuple
    rays: tuple = field(default=())

    def __post_init__(self):
        pts = []
        for p in self.points:
            p = tuple(Fraction(x) for x in p)
            if p not in pts:
                pts.append(p)
        object.__setattr__(self, "points", tuple(pts))
        object.__setattr__(self, "rays", tuple(tuple(Fraction(x) for x in r) for r in self.rays if any(r)))

    @classmethod
    def hull_with_origin(cls, columns: Iterable[Sequence[int]], d: int) -> "Polytope":
        return cls(((0,) * d,) + tuple(tuple(c) for c in columns))

    @property
    def ambient_dim(self) -> int:
        return len(self.points[0]) if self.points else 0

    @property
    def dimension(self) -> int:
        if not self.points:
            return -1
        p0 = self.points[0]
        return rank_q([tuple(a - b for a, b in zip(p, p0)) for p in self.points[1:]] + list(self.rays))


def affine_coordinates(points) -> tuple[list, tuple, list]:
    """Coordinates of points in an affine basis of their affine hull.

    Returns ``(coords, origin, directions)`` with
    ``points[i] == origin + sum(coords[i][k] * directions[k])``.
    """
    p0 = points[0]
    diffs = [tuple(a - b for a, b in zip(p, p0)) for p in points]
    directions = []
    for v in diffs:
        if any(v) and rank_q(directions + [v]) > len(directions):
            directions.append(v)
    coords = [solve_q(directions, v) if directions else () for v in diffs]
    return coords, p0, directions


def _hyperplane_through(pts):
    """Normal and offset of the hyperplane through k affinely independent points in Q^k."""
    p0 = pts[0]
    rows = [tuple(a - b for a, b in zip(p, p0)) for p in pts[1:]]
    ns = nullspace_q(rows, len(p0))
    if len(ns) != 1:
        return None
    normal = primitive(ns[0])
    return normal, dot(normal, p0)


def full_dim_facets(coords) -> list:
    """Facets of the full-dimensional hull of ``coords`` (points in Q^k).

    Returns ``(normal, offset, vertex_index_set)`` with ``normal . x <= offset``
    valid on all points, normals primitive integral.
    """
    k = len(coords[0])
    if k == 0:
        return []
    found = {}
    for subset in itertools.combinations(range(len(coords)), k):
        hp = _hyperplane_through([coords[i] for i in subset])
        if hp is None:
            continue
        normal, off = hp
        vals = [dot(normal, p) for p in coords]
        if all(v <= off for v in vals):
            pass
        elif all(v >= off for v in vals):
            normal, off = tuple(-x for x in normal), -off
        else:
            continue
        on = frozenset(i for i, v in enumerate(vals) if v == (off if vals[subset[0]] == off else -off))
        on = frozenset(i for i in range(len(coords)) if dot(normal, coords[i]) == off)
        found.setdefault((normal, off), on)
    return [(nrm, off, on) for (nrm, off), on in found.items()]


def facet_hyperplanes(P: Polytope) -> list:
    """Irredundant facet inequalities ``h . x <= c`` of P within its affine span.

    Offsets are normalized to 1 or -1 when nonzero, otherwise the normal is
    primitive integral.
    """
    if P.rays:
        raise UnboundedPolytope("facet_hyperplanes expects a bounded polytope")
    if len(P.points) <= 1:
        return []
    coords, p0, W = affine_coordinates(list(P.points))
    k = len(W)
    out = []
    for eta, gamma, _ in full_dim_facets(coords):
        # lift eta to an ambient normal inside the direction space
        gram = [[dot(W[i], W[j]) for j in range(k)] for i in range(k)]
        y = solve_q([tuple(col) for col in zip(*gram)], eta)
        h = [sum(y[i] * W[i][t] for i in range(k)) for t in range(len(p0))]
        c = gamma + dot(h, p0)
        if c:
            scale = abs(c)
            h = tuple(Fraction(x) / scale for x in h)
            c = c / scale
        else:
            h = primitive(h)
        out.append((tuple(Fraction(x) for x in h), Fraction(c)))
    return sorted(out)


# ---------------------------------------------------------------------------
# triangulations and volumes


def _simplex_volume(simplex) -> Fraction:
    p0 = simplex[0]
    return abs(det_frac([[a - b for a, b in zip(p, p0)] for p in simplex[1:]]))


def placing_triangulation(coords) -> list:
    """Lexicographic placing triangulation of full-dimensional points in Q^k.

    Returns simplices as tuples of point indices.
    """
    k = len(coords[0])
    order = sorted(range(len(coords)), key=lambda i: coords[i])
    chosen = [order[0]]
    for i in order[1:]:
        if len(chosen) == k + 1:
            break
        cand = chosen + [i]
        if rank_q([tuple(a - b for a, b in zip(coords[j], coords[cand[0]])) for j in cand[1:]]) == len(cand) - 1:
            chosen = cand
    if len(chosen) < k + 1:
        return []
    interior = tuple(sum(coords[j][t] for j in chosen) / (k + 1) for t in range(k))

    def oriented(face):
        normal, off = _hyperplane_through([coords[j] for j in face])
        if dot(normal, interior) > off:
            normal, off = tuple(-x for x in normal), -off
        return normal, off

    simplices = [tuple(chosen)]
    boundary = {}
    for face in itertools.combinations(sorted(chosen), k):
        boundary[frozenset(face)] = oriented(face)
    for p in order:
        if p in chosen:
            continue
        visible = [f for f, (nrm, off) in boundary.items() if dot(nrm, coords[p]) > off]
        if not visible:
            continue
        ridge_count = {}
        for f in visible:
            simplices.append(tuple(sorted(f)) + (p,))
            for ridge in itertools.combinations(sorted(f), k - 1):
                ridge_count[ridge] = ridge_count.get(ridge, 0) + 1
        for f in visible:
            del boundary[f]
        for ridge, cnt in ridge_count.items():
            if cnt == 1:
                face = ridge + (p,)
                boundary[frozenset(face)] = oriented(face)
    return simplices


def pulling_triangulation(coords) -> list:
    """Recursive pulling triangulation: cone from the lexicographically least
    point over triangulations of the facets that miss it."""
    idx = list(range(len(coords)))
    return [tuple(s) for s in _pull(coords, idx)]


def _pull(coords, idx):
    sub = [coords[i] for i in idx]
    local, _, W = affine_coordinates(sub)
    k = len(W)
    if k == 0:
        return [[idx[0]]]
    if len(idx) == k + 1:
        return [list(idx)]
    v_local = min(range(len(idx)), key=lambda i: local[i])
    out = []
    for _, _, on in full_dim_facets(local):
        if v_local in on:
            continue
        face_idx = [idx[i] for i in sorted(on)]
        for s in _pull(coords, face_idx):
            out.append(s + [idx[v_local]])
    return out


def _lattice_coords(P: Polytope, lattice: Lattice | None):
    if lattice is None:
        return [tuple(p) for p in P.points], P.ambient_dim
    basis = lattice.basis
    out = []
    for p in P.points:
        c = solve_q(basis, p) if basis else (() if not any(p) else None)
        if c is None:
            raise ValueError(f"point {p} is outside the span of the lattice")
        out.append(tuple(c))
    return out, lattice.rank


def normalized_volume(P: Polytope, lattice: Lattice | None = None, method: str = "placing") -> Fraction:
    """Normalized volume of P in ``lattice`` (unit simplex has volume 1).

    ``lattice`` defaults to Z^ambient.  Polytopes of lower dimension than the
    lattice rank have volume 0; a nonempty polytope in a rank-0 lattice has
    volume 1.
    """
    if P.rays:
        raise UnboundedPolytope("cannot take the volume of an unbounded polyhedron")
    if not P.points:
        return Fraction(0)
    coords, r = _lattice_coords(P, lattice)
    if r == 0:
        return Fraction(1)
    if rank_q([tuple(a - b for a, b in zip(p, coords[0])) for p in coords[1:]]) < r:
        return Fraction(0)
    if method == "placing":
        simplices = placing_triangulation(coords)
    elif method == "pulling":
        simplices = pulling_triangulation(coords)
    else:
        raise ValueError(f"unknown triangulation method {method!r}")
    return sum((_simplex_volume([coords[i] for i in s]) for s in simplices), Fraction(0))


def _halfspaces(coords):
    return [(nrm, off) for nrm, off, _ in full_dim_facets(coords)]


def _vertices_of(halfspaces, k):
    verts = set()
    for subset in itertools.combinations(halfspaces, k):
        normals = [h for h, _ in subset]
        if rank_q(normals) < k:
            continue
        x = solve_q([tuple(col) for col in zip(*normals)], [c for _, c in subset])
        if x is None:
            continue
        if all(dot(h, x) <= c for h, c in halfspaces):
            verts.add(tuple(x))
    return sorted(verts)


def _intersection_volume(coord_sets, k) -> Fraction:
    hs = []
    for cs in coord_sets:
        if rank_q([tuple(a - b for a, b in zip(p, cs[0])) for p in cs[1:]]) < k:
            return Fraction(0)
        hs.extend(_halfspaces(cs))
    verts = _vertices_of(hs, k)
    if len(verts) < k + 1:
        return Fraction(0)
    return normalized_volume(Polytope(verts))


def interiors_disjoint(P: Polytope, Q: Polytope, lattice: Lattice | None = None) -> bool:
    a, k = _lattice_coords(P, lattice)
    b, _ = _lattice_coords(Q, lattice)
    return _intersection_volume([a, b], k) == 0


def union_volume(pieces, lattice: Lattice | None = None, max_depth: int = 4) -> Fraction:
    """Normalized volume of the union of set differences ``Delta_i minus C_i``.

    Args:
        pieces: iterable of ``(Delta, C)`` pairs of polytopes with ``C``
            contained in ``Delta``; ``C`` may be ``None``.
        lattice: lattice for normalization (default Z^d).
        max_depth: inclusion-exclusion depth allowed when pieces overlap.

    Raises:
        OverlapUnresolved: pieces overlap and either some subtrahend has
            positive volume or the overlap needs more than ``max_depth`` terms.
    """
    pieces = list(pieces)
    if not pieces:
        return Fraction(0)
    vols = []
    for delta, c in pieces:
        vd = normalized_volume(delta, lattice)
        vc = normalized_volume(c, lattice) if c is not None and c.points else Fraction(0)
        vols.append((vd, vc))
    overlapping = [(i, j) for i, j in itertools.combinations(range(len(pieces)), 2)
                   if not interiors_disjoint(pieces[i][0], pieces[j][0], lattice)]
    if not overlapping:
        return sum((vd - vc for vd, vc in vols), Fraction(0))
    if any(vc for _, vc in vols):
        raise OverlapUnresolved("overlapping pieces with full-dimensional subtrahends")
    coords = []
    k = None
    for delta, _ in pieces:
        cs, k = _lattice_coords(delta, lattice)
        coords.append(cs)
    total = Fraction(0)
    for size in range(1, len(pieces) + 1):
        if size > max_depth:
            raise OverlapUnresolved(f"inclusion-exclusion depth {size} exceeds limit {max_depth}")
        layer = Fraction(0)
        for combo in itertools.combinations(range(len(pieces)), size):
            layer += _intersection_volume([coords[i] for i in combo], k)
        if layer == 0:
            break
        total += layer if size % 2 else -layer
    return total

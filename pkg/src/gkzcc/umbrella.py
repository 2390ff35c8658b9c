"""(A,L)-umbrellas.

The L-polyhedron is realized as the homogenized cone

    K = cone{ (1, 0), (L_d1, a_1), ..., (L_dn, a_n) }  in Q x Q^d,

whose faces avoiding the distinguished ray (1, 0) are exactly the umbrella
faces.  This sidesteps choosing an affine chart: the cone is always pointed
(take (e, h) with h a pointedness certificate and e small), and weights may
carry infinitesimals since facet enumeration only needs ring operations and
signs.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable

from .errors import FaceNotInUmbrella, InvalidWeight
from .lattice import IntMatrix, rank_q, solve_q
from .perturbed import PerturbedScalar, as_scalar
from .polyhedra import Polytope, cone_faces, normalized_volume, pointedness_certificate, union_volume

ALL = "ALL"


def _scalar(x):
    if isinstance(x, PerturbedScalar):
        return as_scalar(x)
    if isinstance(x, str):
        return Fraction(x)
    return Fraction(x)


@dataclass(frozen=True)
class WeightSpec:
    """Projective weight vector L = (L_x, L_d) with L_x + L_d = c * 1, c > 0."""

    L_x: tuple
    L_d: tuple

    def __post_init__(self):
        lx = tuple(_scalar(v) for v in self.L_x)
        ld = tuple(_scalar(v) for v in self.L_d)
        if len(lx) != len(ld) or not lx:
            raise InvalidWeight("L_x and L_d must have the same positive length")
        sums = {as_scalar(a + b) for a, b in zip(lx, ld)}
        if len(sums) != 1:
            raise InvalidWeight("not projective: L_x + L_d is not a constant vector")
        c = next(iter(sums))
        if not c > 0:
            raise InvalidWeight("not projective: the constant L_x + L_d must be positive")
        object.__setattr__(self, "L_x", lx)
        object.__setattr__(self, "L_d", ld)

    @property
    def n(self) -> int:
        return len(self.L_d)

    @property
    def constant(self):
        return as_scalar(self.L_x[0] + self.L_d[0])

    @classmethod
    def F(cls, n: int) -> "WeightSpec":
        return cls((0,) * n, (1,) * n)

    @classmethod
    def from_partial(cls, L_d: Iterable, c=None) -> "WeightSpec":
        """L_x = c - L_d; ``c`` defaults to one more than the largest real part of L_d."""
        ld = tuple(_scalar(v) for v in L_d)
        if c is None:
            c = max(Fraction(v.real_part) if isinstance(v, PerturbedScalar) else v for v in ld) + 1
            c = max(c, Fraction(1))
        c = _scalar(c)
        return cls(tuple(as_scalar(c - v) for v in ld), ld)

    @classmethod
    def L_s(cls, n: int, j: int, s) -> "WeightSpec":
        """L(s) = F + (s - 1) V_j: weight s on the j-th derivative (0-based j), 1 elsewhere."""
        s = _scalar(s)
        ld = tuple(s if i == j else Fraction(1) for i in range(n))
        return cls(tuple(as_scalar(1 - v) for v in ld), ld)

    def perturb(self, delta) -> "WeightSpec":
        """L + delta * (1_n, -1_n)."""
        return WeightSpec(tuple(as_scalar(v + delta) for v in self.L_x),
                          tuple(as_scalar(v - delta) for v in self.L_d))

    def restrict(self, indices: Iterable[int]) -> "WeightSpec":
        idx = sorted(indices)
        return WeightSpec(tuple(self.L_x[i] for i in idx), tuple(self.L_d[i] for i in idx))

    def __str__(self):
        return "L_d=(" + ",".join(str(v) for v in self.L_d) + f"), c={self.constant}"


@dataclass(frozen=True)
class Umbrella:
    """Faces of the (A,L)-umbrella as column-index frozensets."""

    matrix: IntMatrix
    weight: WeightSpec
    faces: frozenset
    dims: tuple  # sorted (face, dim) pairs

    def dim(self, face) -> int:
        return dict(self.dims)[frozenset(face)]

    def faces_of_dim(self, k: int) -> list:
        return sorted((f for f, dd in self.dims if dd == k), key=sorted)

    @property
    def facets(self) -> list:
        return self.faces_of_dim(self.matrix.d - 1)

    def __contains__(self, face) -> bool:
        return frozenset(face) in self.faces

    def restricted_to(self, G) -> list:
        """Faces of Phi_G^L (umbrella faces contained in G)."""
        G = frozenset(G)
        return sorted((f for f in self.faces if f <= G), key=lambda f: (len(f), sorted(f)))

    def facets_in(self, G) -> list:
        """Facets of Phi_G^L: umbrella faces in G of dimension dim(CG) - 1."""
        G = frozenset(G)
        r = rank_q([self.matrix.columns[j] for j in G])
        return sorted((f for f, dd in self.dims if f <= G and dd == r - 1), key=sorted)

    def sorted_faces(self) -> list:
        return sorted(self.faces, key=lambda f: (self.dim(f), sorted(f)))


@lru_cache(maxsize=4096)
def _compute(A: IntMatrix, L: WeightSpec) -> Umbrella:
    pointedness_certificate(A)
    d = A.d
    origin = (Fraction(1),) + (Fraction(0),) * d
    gens = [origin] + [(L.L_d[j],) + tuple(Fraction(x) for x in A.columns[j]) for j in range(A.n)]
    faces = set()
    for f in cone_faces(gens, full_dimensional=True):
        if 0 in f:
            continue
        faces.add(frozenset(i - 1 for i in f))
    faces.add(frozenset())
    dims = tuple(sorted(((f, rank_q([A.columns[j] for j in f]) - 1) for f in faces),
                        key=lambda p: (p[1], sorted(p[0]))))
    return Umbrella(A, L, frozenset(faces), dims)


def compute_umbrella(A: IntMatrix, L: WeightSpec) -> Umbrella:
    """The (A,L)-umbrella.

    Raises:
        InvalidWeight: weight length does not match the number of columns.
        NotPointed: the cone over A is not pointed.
    """
    if L.n != A.n:
        raise InvalidWeight(f"weight has {L.n} entries but A has {A.n} columns")
    return _compute(A, L)


def is_F_homogeneous(A: IntMatrix, tau: Iterable[int]) -> bool:
    """True iff the columns in tau lie on an affine hyperplane missing the origin."""
    tau = sorted(tau)
    if not tau:
        return True
    rows = [tuple(A.columns[j]) for j in tau]
    # h . a_j = 1 for all j: solvability of a linear system in h
    return solve_q([tuple(r[i] for r in rows) for i in range(A.d)], [1] * len(rows)) is not None


def restricted_matrix(A: IntMatrix, L: WeightSpec, tau=ALL) -> tuple[IntMatrix, tuple]:
    """Submatrix A^L (tau = ALL) or A^{L,tau} and the original column indices kept."""
    U = compute_umbrella(A, L)
    facets = U.facets
    if tau is not ALL:
        tau = frozenset(tau)
        if tau not in U:
            raise FaceNotInUmbrella(f"{sorted(tau)} is not a face of the umbrella")
        facets = [f for f in facets if tau <= f]
    cols = tuple(sorted(set().union(*facets))) if facets else ()
    return A.select(cols), cols


def is_pyramid(A: IntMatrix, eta_prime, eta) -> bool:
    """eta' is a pyramid over eta: rank Z(eta) + |eta' minus eta| = d."""
    eta = frozenset(eta)
    rest = frozenset(eta_prime) - eta
    return rank_q([A.columns[j] for j in eta]) + len(rest) == A.d


def delta_volume(A: IntMatrix, cols) -> Fraction:
    return normalized_volume(Polytope.hull_with_origin([A.columns[j] for j in cols], A.d))


def convexity_report(A: IntMatrix, L: WeightSpec, tau) -> tuple[bool, bool, bool]:
    """(is_convex, is_tau_convex, pyramid_ok) for a face tau of the umbrella.

    Convexity of the union of pyramids Delta_{tau'} is tested by comparing
    its volume with the volume of Delta over the columns involved.
    """
    U = compute_umbrella(A, L)
    tau = frozenset(tau)
    if tau not in U:
        raise FaceNotInUmbrella(f"{sorted(tau)} is not a face of the umbrella")

    def convex_over(facets):
        if not all(is_F_homogeneous(A, f) for f in facets):
            return False
        if not facets:
            return False
        pieces = [(Polytope.hull_with_origin([A.columns[j] for j in f], A.d), None) for f in facets]
        cols = sorted(set().union(*facets))
        return union_volume(pieces) == delta_volume(A, cols)

    facets = U.facets
    containing = [f for f in facets if tau <= f]
    pyramid_ok = all(is_pyramid(A, f, f - tau) for f in containing)
    return convex_over(facets), convex_over(containing), pyramid_ok

"""Characteristic-cycle multiplicities and their parameter jumps."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb

from .errors import (FaceNotInUmbrella, InvariantViolation, NotConvexFiltration, NotSimplicial,
                     UnsupportedConfiguration)
from .lattice import (IntMatrix, Lattice, coset_reps, integer_kernel, lattice_index, quotient_map,
                      rank_q, saturate)
from .polyhedra import Polytope, normalized_volume, union_volume
from .semigroup import Parameter, RankingData, SemigroupView, _integer_point, ranking_data
from .umbrella import WeightSpec, compute_umbrella, convexity_report

EMPTY_J = "EMPTY_J"
NO_CODIM2 = "NO_CODIM2"
UNIQUE_CODIM2 = "UNIQUE_CODIM2"
SIMPLE = "SIMPLE"
TWO_FACE = "TWO_FACE"
D2 = "D2"
D3 = "D3"
UNSUPPORTED = "UNSUPPORTED"


def codim(A: IntMatrix, G) -> int:
    return A.d - rank_q([A.columns[j] for j in G])


def _zt_cap_qtau(A: IntMatrix, tau, tp) -> Lattice:
    """Z(tau') intersected with Q(tau)."""
    ztp = Lattice.of_columns(A, tp)
    if not tau:
        return Lattice(A.d)
    coords = [ztp.coordinates(A.columns[j]) for j in sorted(tau)]
    r = ztp.rank
    sat = integer_kernel(integer_kernel(coords, r), r) if rank_q(coords) < r else \
        [tuple(int(i == k) for i in range(r)) for k in range(r)]
    gens = [tuple(sum(c * b[t] for c, b in zip(v, ztp.basis)) for t in range(A.d)) for v in sat]
    return Lattice(A.d, gens)


@lru_cache(maxsize=8192)
def _generic_mult(A: IntMatrix, L: WeightSpec, tau: frozenset, G: frozenset) -> int:
    U = compute_umbrella(A, L)
    if tau not in U or not tau <= G:
        raise FaceNotInUmbrella(f"{sorted(j + 1 for j in tau)} is not a face of the umbrella of the face")
    if not G:
        return 1
    ZG = Lattice.of_columns(A, G)
    total = Fraction(0)
    for tp in U.facets_in(G):
        if not tau <= tp:
            continue
        ztp = Lattice.of_columns(A, tp)
        i1 = lattice_index(ZG, ztp)
        i2 = lattice_index(_zt_cap_qtau(A, tau, tp), Lattice.of_columns(A, tau))
        k, project = quotient_map([A.columns[j] for j in sorted(tau)], [A.columns[j] for j in sorted(tp)])
        P = Polytope([(0,) * k] + [project(A.columns[j]) for j in sorted(tp)])
        Q = Polytope([project(A.columns[j]) for j in sorted(tp - tau)])
        vol = normalized_volume(P) - normalized_volume(Q)
        total += i1 * i2 * vol
    assert total.denominator == 1 and total >= 0
    return int(total)


def generic_mult(A: IntMatrix, L: WeightSpec, tau=(), G=None) -> int:
    """mu_G^{L,tau}: the beta-generic multiplicity of the tau-component.

    ``G`` defaults to all columns.  The empty face has multiplicity 1.
    """
    G = frozenset(range(A.n)) if G is None else frozenset(G)
    return _generic_mult(A, L, frozenset(tau), G)


def mult_by_union_volume(A: IntMatrix, L: WeightSpec) -> int:
    """mu_A^{L,empty} as the volume of the union of Delta_{tau'} minus conv(tau')."""
    U = compute_umbrella(A, L)
    pieces = []
    for tp in U.facets:
        cols = [A.columns[j] for j in sorted(tp)]
        pieces.append((Polytope.hull_with_origin(cols, A.d), Polytope(cols)))
    v = union_volume(pieces)
    assert v.denominator == 1
    return int(v)


@dataclass(frozen=True)
class CycleComponent:
    tau: frozenset
    multiplicity: int
    generic: int


@dataclass
class JumpReport:
    tau: frozenset
    generic: int
    jump: int | None
    case: str
    C_beta: int | None = None
    faces: tuple = ()
    reason: str = ""
    diagnostics: dict = field(default_factory=dict)

    @property
    def supported(self) -> bool:
        return self.jump is not None

    @property
    def total(self) -> int | None:
        return None if self.jump is None else self.generic + self.jump


def _view(A: IntMatrix, S: SemigroupView | None) -> SemigroupView:
    return S if S is not None and S.A == A else SemigroupView(A)


def two_face_constant(A: IntMatrix, F1, F2) -> int:
    G = frozenset(F1) & frozenset(F2)
    cG, c1, c2 = codim(A, G), codim(A, F1), codim(A, F2)
    c12 = A.d - rank_q([A.columns[j] for j in set(F1) | set(F2)])
    return comb(cG, 2) - cG + 1 - comb(c1, 2) - comb(c2, 2) + comb(c12, 2)


def jump(A: IntMatrix, L: WeightSpec, tau, beta: Parameter, S: SemigroupView | None = None,
         J: RankingData | None = None) -> JumpReport:
    """Multiplicity jump of the tau-component at beta.

    Only the closed-form configurations are evaluated; anything else is
    reported as UNSUPPORTED with no value.
    """
    tau = frozenset(tau)
    U = compute_umbrella(A, L)
    if tau not in U:
        raise FaceNotInUmbrella(f"{sorted(j + 1 for j in tau)} is not a face of the umbrella")
    S = _view(A, S)
    mu = generic_mult(A, L, tau)
    J = ranking_data(S, beta) if J is None else J
    Jp = J.restrict(tau)
    rep = _dispatch(A, L, tau, S, J, Jp, mu)
    if rep.jump is not None and rep.jump < 0:
        raise InvariantViolation(f"negative jump {rep.jump} for face {sorted(tau)}")
    return rep


def _dispatch(A, L, tau, S, J, Jp, mu) -> JumpReport:
    if not Jp:
        return JumpReport(tau, mu, 0, EMPTY_J)
    codim2 = [G for G in S.faces if tau <= G and codim(A, G) == 2]
    if not codim2:
        return JumpReport(tau, mu, 0, NO_CODIM2)
    counts = J.counts()
    if len(codim2) == 1:
        G = codim2[0]
        if J.max_count(G):
            val = counts[G] * generic_mult(A, L, tau, G)
        else:
            val = 0
        return JumpReport(tau, mu, val, UNIQUE_CODIM2, faces=(G,))
    mfaces = Jp.max_faces()
    if len(mfaces) == 1:
        G = mfaces[0]
        val = counts[G] * (codim(A, G) - 1) * generic_mult(A, L, tau, G)
        return JumpReport(tau, mu, val, SIMPLE, faces=(G,))
    if len(mfaces) == 2:
        F1, F2 = mfaces
        if F1 <= F2 or F2 <= F1:
            return JumpReport(tau, mu, None, UNSUPPORTED, faces=(F1, F2),
                              reason="maximal pairs on two comparable faces")
        G = F1 & F2
        C = two_face_constant(A, F1, F2)
        val = sum(counts[F] * (codim(A, F) - 1) * generic_mult(A, L, tau, F) for F in (F1, F2))
        # faces not containing tau contribute nothing
        bG = counts.get(G, 0) if tau <= G else 0
        if bG:
            val += bG * C * generic_mult(A, L, tau, G)
        return JumpReport(tau, mu, val, TWO_FACE, C_beta=C, faces=(F1, F2, G))
    return JumpReport(tau, mu, None, UNSUPPORTED, faces=tuple(mfaces),
                      reason=f"maximal pairs involve {len(mfaces)} faces; general spectral sequence needed")


def char_cycle(A: IntMatrix, L: WeightSpec, beta: Parameter, S: SemigroupView | None = None) -> list:
    """Components of the L-characteristic cycle with multiplicities at beta.

    Raises:
        UnsupportedConfiguration: some face's jump is outside the closed-form cases.
    """
    U = compute_umbrella(A, L)
    S = _view(A, S)
    J = ranking_data(S, beta)
    out = []
    for tau in U.sorted_faces():
        rep = jump(A, L, tau, beta, S, J)
        if rep.jump is None:
            raise UnsupportedConfiguration(f"face {sorted(j + 1 for j in tau)}: {rep.reason}")
        out.append(CycleComponent(tau, rep.generic + rep.jump, rep.generic))
    return out


def rank(A: IntMatrix, beta: Parameter, S: SemigroupView | None = None) -> int:
    """Holonomic rank: the F-multiplicity of the zero section at beta."""
    F = WeightSpec.F(A.n)
    rep = jump(A, F, (), beta, S)
    if rep.jump is None:
        raise UnsupportedConfiguration(rep.reason)
    return rep.generic + rep.jump


def exceptional_query(A: IntMatrix, L: WeightSpec, tau, beta: Parameter,
                      S: SemigroupView | None = None) -> bool:
    rep = jump(A, L, tau, beta, S)
    if rep.jump is None:
        raise UnsupportedConfiguration(rep.reason)
    return rep.jump > 0


def rays(A: IntMatrix, S: SemigroupView | None = None) -> list:
    S = _view(A, S)
    return [G for G in S.faces if codim(A, G) == A.d - 1]


def simplicial_cm_test(A: IntMatrix, tau=(), S: SemigroupView | None = None,
                       radius: int | None = None) -> tuple[bool, bool]:
    """(is_simplicial, exceptional_empty) for a simplicial cone.

    Looks for a face G containing tau, of codimension at least 2, and a
    lattice point b missing from NA + ZG while present in NA + ZF for every
    face F strictly above G; such a pair is a maximal ranking pair and
    makes the exceptional set nonempty.  Candidates b are nonnegative ray
    combinations plus coset offsets, with coefficients up to ``radius``.

    Raises:
        NotSimplicial: the cone over A has more than d rays.
    """
    S = _view(A, S)
    ray_faces = rays(A, S)
    if len(ray_faces) != A.d:
        raise NotSimplicial(f"the cone has {len(ray_faces)} rays in dimension {A.d}")
    tau = frozenset(tau)
    gens = [A.columns[min(r)] for r in ray_faces]
    offsets = coset_reps(Lattice.standard(A.d), Lattice(A.d, gens))
    if radius is None:
        radius = max(2, sum(abs(x) for row in A.rows for x in row))
    for G in S.faces:
        if not tau <= G or codim(A, G) < 2:
            continue
        above = [F for F in S.faces if G < F]
        outside = [r for r in range(A.d) if not ray_faces[r] <= G]
        for coeffs in itertools.product(range(radius + 1), repeat=len(outside)):
            for w in offsets:
                b = list(w)
                for c, r in zip(coeffs, outside):
                    if c:
                        b = [x + c * y for x, y in zip(b, gens[r])]
                b = tuple(b)
                if S.contains(G, b):
                    continue
                if all(S.contains(F, b) for F in above):
                    return True, False
    return True, True


def convex_reduction(A: IntMatrix, L: WeightSpec, beta: Parameter, S: SemigroupView | None = None) -> int:
    """mu_{A,0}^{L,empty}(beta) for a convex filtration, cross-checked on the A^L side.

    For every face G carrying ranking data (and for A itself), the count of
    ZG-translates times mu_G^{L,empty} must equal the directly counted
    ZG^L-translates times vol_{ZG^L}(Delta_{G^L}).

    Raises:
        NotConvexFiltration, UnsupportedConfiguration, InvariantViolation.
    """
    is_convex, _, _ = convexity_report(A, L, ())
    if not is_convex:
        raise NotConvexFiltration("the umbrella facets do not form a convex F-homogeneous union")
    S = _view(A, S)
    U = compute_umbrella(A, L)
    J = ranking_data(S, beta)
    rep = jump(A, L, (), beta, S, J)
    if rep.jump is None:
        raise UnsupportedConfiguration(rep.reason)
    counts = J.counts()
    faces = set(counts) | {frozenset(range(A.n))}
    for G in faces:
        cols = sorted(set().union(*U.facets_in(G))) if G else []
        ZG = Lattice.of_columns(A, G)
        ZGL = Lattice.of_columns(A, cols)
        if ZGL.rank != ZG.rank:
            raise InvariantViolation(f"A^L part of face {sorted(G)} is not full rank")
        volL = normalized_volume(Polytope.hull_with_origin([A.columns[j] for j in cols], A.d), ZGL) \
            if G else Fraction(1)
        if G == frozenset(range(A.n)):
            lhs, nL = generic_mult(A, L, (), G), lattice_index(ZG, ZGL)
        else:
            lhs = counts[G] * generic_mult(A, L, (), G)
            x0 = _integer_point(A, beta, G)
            nL = sum(1 for r in coset_reps(saturate(ZG), ZGL)
                     if not S.contains(G, tuple(a + b for a, b in zip(x0, r))))
        if lhs != nL * volL:
            raise InvariantViolation(f"convex reduction mismatch on face {sorted(G)}: {lhs} vs {nL * volL}")
    return rep.generic + rep.jump

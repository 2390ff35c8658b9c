import random
from fractions import Fraction

import pytest

from corpus import A1, A2, LM, LM_G1, LM_L
from gkzcc import PerturbedScalar, WeightSpec, compute_umbrella, convexity_report, is_F_homogeneous
from gkzcc.errors import FaceNotInUmbrella, InvalidWeight, NotPointed
from gkzcc.lattice import IntMatrix
from gkzcc.polyhedra import Polytope, facet_hyperplanes
from gkzcc.umbrella import ALL, restricted_matrix
from oracles import random_instance, random_weight, umbrella_lp_oracle


def fs(*xs):
    return frozenset(xs)


def test_A2_F_umbrella():
    U = compute_umbrella(A2, WeightSpec.F(4))
    assert U.facets == [fs(0, 1, 2, 3)]
    assert U.faces_of_dim(0) == [fs(0), fs(3)]
    assert fs() in U
    assert U.faces == umbrella_lp_oracle(A2.columns, (1, 1, 1, 1))


@pytest.mark.parametrize("s,facet", [("3/2", fs(1)), ("19/10", fs(1)), ("21/10", fs(0)), ("3", fs(0))])
def test_A1_switch_at_two(s, facet):
    assert compute_umbrella(A1, WeightSpec.L_s(2, 1, s)).facets == [facet]


def test_face_restricted_umbrella_interior_point():
    U = compute_umbrella(LM, LM_L)
    assert [f for f in U.restricted_to(LM_G1) if len(f) == 1] == [fs(2)]


def test_weight_validation():
    with pytest.raises(InvalidWeight):
        WeightSpec((0, 0), (1, 2))
    with pytest.raises(InvalidWeight):
        WeightSpec((-1, -1), (1, 1))
    with pytest.raises(InvalidWeight):
        compute_umbrella(A2, WeightSpec.F(3))
    L = WeightSpec.L_s(3, 2, Fraction(5, 2))
    assert L.L_d == (1, 1, Fraction(5, 2)) and L.constant == 1


def test_not_pointed():
    with pytest.raises(NotPointed):
        compute_umbrella(IntMatrix(((1, -1),)), WeightSpec.F(2))


def test_F_homogeneity():
    assert is_F_homogeneous(A2, range(4))
    assert is_F_homogeneous(IntMatrix(((2,), (0,), (0,))), [0])
    assert not is_F_homogeneous(IntMatrix(((1, 2), (0, 0))), [0, 1])
    assert is_F_homogeneous(A2, [])


def test_restricted_matrix():
    F = WeightSpec.F(4)
    assert restricted_matrix(A2, F)[1] == (0, 1, 2, 3)
    assert restricted_matrix(A1, WeightSpec.L_s(2, 1, "3/2"))[1] == (1,)
    L = WeightSpec.L_s(7, 3, 2)
    assert restricted_matrix(LM, L, ())[1] == restricted_matrix(LM, L, ALL)[1]
    with pytest.raises(FaceNotInUmbrella):
        restricted_matrix(A2, F, {1})


def test_convexity_report():
    assert convexity_report(A2, WeightSpec.F(4), ()) == (True, True, True)
    # at the slope s = 3 along x4 the umbrella has a non-F-homogeneous facet
    assert convexity_report(LM, WeightSpec.L_s(7, 3, 3), ())[0] is False
    assert convexity_report(LM, WeightSpec.L_s(7, 3, Fraction(5, 2)), ())[0] is True
    with pytest.raises(FaceNotInUmbrella):
        convexity_report(A2, WeightSpec.F(4), {1})


def test_F_umbrella_matches_hull_faces():
    P = Polytope.hull_with_origin(LM.columns, 3)
    U = compute_umbrella(LM, WeightSpec.F(7))
    hull_facets = set()
    for h, c in facet_hyperplanes(P):
        if c != 0:
            hull_facets.add(frozenset(j for j, a in enumerate(LM.columns) if sum(x * y for x, y in zip(h, a)) == c))
    assert set(U.facets) == hull_facets


def test_umbrella_closed_under_intersection():
    rng = random.Random(2)
    for _ in range(15):
        cols = random_instance(rng, n_max=8)
        A = IntMatrix.from_columns(cols)
        U = compute_umbrella(A, WeightSpec.from_partial(random_weight(rng, A.n)))
        for f in U.faces:
            for g in U.faces:
                assert f & g in U


def test_perturbation_keeps_F_homogeneous_facets():
    rng = random.Random(4)
    eps = PerturbedScalar.eps()
    for _ in range(15):
        cols = random_instance(rng)
        A = IntMatrix.from_columns(cols)
        L = WeightSpec.from_partial(random_weight(rng, A.n))
        U, U2 = compute_umbrella(A, L), compute_umbrella(A, L.perturb(eps))
        for f in U.facets:
            if is_F_homogeneous(A, f):
                assert f in U2.facets


def test_symbolic_matches_small_rational_epsilon():
    rng = random.Random(9)
    for _ in range(15):
        cols = random_instance(rng)
        A = IntMatrix.from_columns(cols)
        j = rng.randrange(A.n)
        s = Fraction(rng.randint(3, 8), 2)
        sym = compute_umbrella(A, WeightSpec.L_s(A.n, j, PerturbedScalar((s, 1)))).faces
        e = Fraction(1, 10)
        while True:
            a = compute_umbrella(A, WeightSpec.L_s(A.n, j, s + e)).faces
            b = compute_umbrella(A, WeightSpec.L_s(A.n, j, s + e / 2)).faces
            if a == b:
                break
            e /= 2
        assert sym == a

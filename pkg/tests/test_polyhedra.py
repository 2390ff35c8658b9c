import random
from fractions import Fraction

import pytest

from corpus import A2, LM, NS
from gkzcc.errors import NotPointed
from gkzcc.lattice import IntMatrix, Lattice, dot
from gkzcc.polyhedra import (Polytope, cone_face_lattice, facet_hyperplanes, lp_solve, normalized_volume,
                             pointedness_certificate, union_volume)
from oracles import polygon_area2, simplex_volume


def faces(A):
    return {frozenset(f) for f in cone_face_lattice(A)}


def test_face_lattice_A2():
    assert faces(A2) == {frozenset(), frozenset({0}), frozenset({3}), frozenset(range(4))}


def test_face_lattice_contains_example_faces():
    F = faces(LM)
    assert frozenset({2, 3}) in F and frozenset({4, 5}) in F


def test_face_lattice_orthant():
    I = IntMatrix(((1, 0), (0, 1)))
    assert faces(I) == {frozenset(), frozenset({0}), frozenset({1}), frozenset({0, 1})}


def test_faces_satisfy_G_equals_A_cap_RG():
    from gkzcc.lattice import rank_q
    for A in (A2, LM, NS):
        for G in faces(A):
            span = [A.columns[j] for j in G]
            r = rank_q(span)
            assert {j for j in range(A.n) if rank_q(span + [A.columns[j]]) == r} == set(G)


def test_pointedness():
    assert all(dot(pointedness_certificate(A2), a) > 0 for a in A2.columns)
    h = pointedness_certificate(NS)
    assert all(dot(h, a) > 0 for a in NS.columns)
    with pytest.raises(NotPointed):
        pointedness_certificate(IntMatrix(((1, -1), (0, 0))))


def test_normalized_volume_examples():
    assert normalized_volume(Polytope.hull_with_origin([(1, 0, 0), (0, 1, 0), (0, 0, 1)], 3)) == 1
    assert normalized_volume(Polytope.hull_with_origin(A2.columns, 2)) == 4
    seg = Polytope([(0, 0, 0), (0, 1, 0), (0, 3, 0)])
    assert normalized_volume(seg, Lattice(3, [(0, 1, 0)])) == 3
    assert normalized_volume(seg) == 0


def test_volume_matches_det_on_random_simplices():
    rng = random.Random(3)
    count = 0
    while count < 100:
        d = rng.randint(1, 4)
        verts = [tuple(rng.randint(-3, 3) for _ in range(d)) for _ in range(d + 1)]
        ref = simplex_volume(verts)
        if ref == 0:
            continue
        assert normalized_volume(Polytope(verts)) == ref
        count += 1


def test_volume_matches_polygon_area():
    rng = random.Random(11)
    for _ in range(30):
        pts = [(rng.randint(0, 5), rng.randint(0, 5)) for _ in range(rng.randint(3, 8))]
        assert normalized_volume(Polytope(pts)) == polygon_area2(pts)


def test_triangulations_agree():
    rng = random.Random(5)
    for _ in range(30):
        d = rng.randint(2, 3)
        pts = [tuple(rng.randint(0, 4) for _ in range(d)) for _ in range(rng.randint(d + 1, 8))]
        P = Polytope(pts)
        assert normalized_volume(P, method="placing") == normalized_volume(P, method="pulling")


def test_facet_hyperplanes_triangle():
    H = facet_hyperplanes(Polytope([(0, 0), (1, 0), (1, 4)]))
    assert len(H) == 3


def test_facet_hyperplanes_slope_certificate():
    rest = [LM.columns[i] for i in range(6)]
    H = facet_hyperplanes(Polytope.hull_with_origin(rest, 3))
    target = (Fraction(1, 3), Fraction(1, 3), Fraction(1, 2))
    assert any(c == 1 and tuple(Fraction(x) for x in h) == target for h, c in H)


def test_facet_hyperplanes_segment():
    H = facet_hyperplanes(Polytope([(0, 0), (2, 2)]))
    assert len(H) == 2


def test_facet_hyperplanes_verify():
    P = Polytope.hull_with_origin(LM.columns, 3)
    for h, c in facet_hyperplanes(P):
        vals = [dot(h, p) for p in P.points]
        assert max(vals) == c or min(vals) == c


def test_union_volume():
    D = Polytope([(0, 0), (1, 0), (0, 1)])
    assert union_volume([(D, Polytope([(1, 0), (0, 1)]))]) == 1
    assert union_volume([(Polytope.hull_with_origin(A2.columns, 2), Polytope(A2.columns))]) == 4
    T2 = Polytope([(1, 0), (0, 1), (1, 1)])
    assert union_volume([(D, None), (T2, None)]) == 2


def test_lp_solve_simple():
    res = lp_solve([1, 1], A_ub=[[1, 0], [0, 1], [-1, 0], [0, -1]], b_ub=[2, 3, 0, 0])
    assert res.status == "optimal" and res.value == 5
    res = lp_solve([0], A_ub=[[1], [-1]], b_ub=[-1, -1])
    assert res.status == "infeasible"

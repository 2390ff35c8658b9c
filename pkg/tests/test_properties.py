"""Randomized properties driven by hypothesis."""
from fractions import Fraction

from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from gkzcc import WeightSpec, compute_umbrella, generic_mult, mult_by_union_volume
from gkzcc.lattice import IntMatrix, Lattice, coset_reps, lattice_index, matmul, smith_normal_form
from gkzcc.perturbed import PerturbedScalar
from gkzcc.polyhedra import Polytope, normalized_volume
from oracles import minors_gcd_factors, umbrella_lp_oracle

small = st.integers(-5, 5)
fast = settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@st.composite
def matrices(draw):
    m, n = draw(st.integers(1, 3)), draw(st.integers(1, 4))
    return [[draw(small) for _ in range(n)] for _ in range(m)]


@st.composite
def instances(draw):
    d = draw(st.integers(2, 3))
    cols = [tuple(int(i == k) for i in range(d)) for k in range(d)]
    extra = draw(st.lists(st.tuples(*[st.integers(0, 4)] * d).filter(any), min_size=1, max_size=7 - d,
                          unique=True))
    cols += [c for c in extra if c not in cols]
    Ld = draw(st.lists(st.integers(0, 5), min_size=len(cols), max_size=len(cols)))
    return cols, tuple(Fraction(x) for x in Ld)


@fast
@given(matrices())
def test_snf_matches_determinantal_divisors(M):
    U, S, V = smith_normal_form(M)
    assert matmul(matmul(U, M), V) == S
    assert tuple(x for x in (S[i][i] for i in range(min(len(S), len(S[0])))) if x) == minors_gcd_factors(M)


@fast
@given(st.lists(st.tuples(small, small), min_size=2, max_size=3))
def test_coset_count_equals_index(gens):
    sub = Lattice(2, gens)
    if sub.rank < 2:
        return
    reps = coset_reps(Lattice.standard(2), sub)
    assert len(reps) == lattice_index(Lattice.standard(2), sub)
    assert len({sub.canonical(r) for r in reps}) == len(reps)


@settings(max_examples=25, deadline=None)
@given(instances())
def test_umbrella_matches_lp_oracle(inst):
    cols, Ld = inst
    U = compute_umbrella(IntMatrix.from_columns(cols), WeightSpec.from_partial(Ld))
    assert set(U.faces) == umbrella_lp_oracle(cols, Ld)


@settings(max_examples=25, deadline=None)
@given(instances())
def test_two_multiplicity_formulas_agree(inst):
    cols, Ld = inst
    A = IntMatrix.from_columns(cols)
    L = WeightSpec.from_partial(Ld)
    assert generic_mult(A, L, ()) == mult_by_union_volume(A, L)


@fast
@given(st.lists(st.tuples(st.integers(0, 5), st.integers(0, 5), st.integers(0, 5)), min_size=4, max_size=8))
def test_triangulations_agree(pts):
    P = Polytope(pts)
    assert normalized_volume(P, method="placing") == normalized_volume(P, method="pulling")


@fast
@given(st.fractions(-5, 5), st.fractions(-5, 5), st.fractions(-5, 5))
def test_perturbed_order_is_lexicographic(a, b, c):
    x, y = PerturbedScalar((a, b)), PerturbedScalar((a, c))
    assert (x < y) == (b < c)
    assert x + y - y == x
    assert (x * y).coefficient(0) == a * a

from fractions import Fraction

import pytest

from corpus import A1, A1A2, A2, LM, LM_BETA, LM_G1, LM_G2
from gkzcc import (Parameter, direct_sum, generic_irregularity, irregularity_at, product_rule,
                   semicontinuity_scan, slopes_along)
from gkzcc.gevrey import HYPOTHESIS_FAILED, face_irregularity
from gkzcc.lattice import IntMatrix

STRATA = [Parameter.generic(3, LM), Parameter.stratum((1, 0, 0), LM_G1), Parameter.stratum((1, 0, 0), LM_G2),
          LM_BETA]
A1A2_BETA = Parameter.stratum((0, 1, 2), {0, 1})


def test_slopes_three_dim_example():
    found = {j: slopes_along(LM, j).values for j in range(7)}
    assert found == {0: [], 1: [Fraction(3, 2)], 2: [], 3: [3], 4: [], 5: [2], 6: [Fraction(7, 6)]}


def test_slopes_other_examples():
    assert slopes_along(A1A2, 1).values == [2]
    assert all(slopes_along(A2, j).values == [] for j in range(4))


def test_slope_certificate():
    (s, (h, c)), = slopes_along(LM, 6).slopes
    assert c == 1 and sum(x * y for x, y in zip(h, LM.columns[6])) == s


def test_slopes_invariant_under_unimodular_change():
    U = ((1, 1, 0), (0, 1, 0), (0, 0, 1))
    B = IntMatrix(tuple(tuple(sum(U[i][k] * LM.rows[k][j] for k in range(3)) for j in range(7)) for i in range(3)))
    for j in range(7):
        assert slopes_along(B, j).values == slopes_along(LM, j).values


def test_generic_irregularity():
    assert generic_irregularity(A1A2, 1, 2) == 4
    assert generic_irregularity(A1A2, 1, 3) == 4
    assert generic_irregularity(A1, 1, 2) == 1
    assert generic_irregularity(LM, 3, Fraction(5, 2)) == 0
    with pytest.raises(ValueError):
        generic_irregularity(LM, 3, 1)


def test_generic_irregularity_is_step_function():
    for j in range(7):
        slopes = slopes_along(LM, j).values
        grid = [Fraction(k, 12) for k in range(13, 60)]
        prev = 0
        for s in grid:
            v = generic_irregularity(LM, j, s)
            assert v >= prev
            if v != prev:
                assert s in slopes
            prev = v


def test_irregularity_direct_sum_example():
    rep = irregularity_at(A1A2, 1, 2, A1A2_BETA)
    assert (rep.generic, rep.value) == (4, 5)
    assert irregularity_at(A1A2, 1, 3, A1A2_BETA).value == 5


@pytest.mark.parametrize("j,s,expected", [
    (3, 3, [0, 1, 0, 1]), (3, 4, [0, 1, 0, 1]),
    (5, 2, [0, 0, 1, 1]), (5, Fraction(5, 2), [0, 0, 1, 1]),
    (1, Fraction(3, 2), [0, 0, 0, 0]), (6, Fraction(7, 6), [0, 0, 0, 0]),
])
def test_three_dim_stratification(j, s, expected):
    out = []
    for p in STRATA:
        rep = irregularity_at(LM, j, s, p)
        assert not rep.warnings
        out.append(rep.value - rep.generic)
    assert out == expected


def test_face_irregularity_zero_off_face():
    assert face_irregularity(LM, LM_G1, 5, 2) == 0
    assert face_irregularity(LM, LM_G1, 3, 3) == 1


def test_direct_sum_shape():
    B = direct_sum(A1, A2)
    assert B.rows == ((1, 2, 0, 0, 0, 0), (0, 0, 1, 1, 1, 1), (0, 0, 0, 1, 3, 4))


def test_product_rule():
    assert product_rule(A1, Parameter.generic(1, A1), 1, 2, A2, Parameter.point((1, 2))) == 5
    assert product_rule(A1, Parameter.generic(1, A1), 1, 2, A2, Parameter.generic(2, A2)) == 4


def test_semicontinuity_scan():
    for j in range(7):
        for entry in semicontinuity_scan(LM, j, STRATA):
            assert entry["findings"] == []
    x4 = semicontinuity_scan(LM, 3, STRATA)
    assert [e["slope"] for e in x4] == [3] and x4[0]["hypothesis"] == HYPOTHESIS_FAILED
    assert semicontinuity_scan(LM, 3, []) == []
    a1 = semicontinuity_scan(A1, 1, [Parameter.generic(1, A1), Parameter.point((1,))])
    assert all(not e["findings"] for e in a1)


def test_scan_parallel_matches_serial():
    assert [[v for _, v in e["values"]] for e in semicontinuity_scan(LM, 5, STRATA, workers=4)] == \
        [[v for _, v in e["values"]] for e in semicontinuity_scan(LM, 5, STRATA)]

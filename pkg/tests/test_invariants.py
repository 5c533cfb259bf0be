import random

import pytest
from sympy import primerange
from conftest import KNOTINFO, TREFOIL_DELTA

from knotribbon.exactalg import AbelianGroup, LaurentPoly, det_bareiss, smith_normal_form
from knotribbon.invariants import (
    InvariantError,
    alexander,
    betti_of,
    betti_profile,
    checkerboard,
    determinant,
    double_cover_homology,
    goeritz,
    goeritz_determinant,
    homology_of_sum,
)
from knotribbon.knotstore import builtin, torus_2q
from knotribbon.pdcode import PDCode, connected_power, connected_sum, mirror, orient, parse_pd, trace_faces

TREFOIL = builtin("trefoil").pd


def snf_of(gm):
    return smith_normal_form(gm.rows(), ncols=gm.size)


def test_checkerboard_trefoil_class_sizes():
    c = checkerboard(trace_faces(TREFOIL))
    sizes = sorted(len(c.faces_of(k)) for k in (0, 1))
    assert sizes == [2, 3]
    assert len(c.white) == 2


def test_checkerboard_unknot():
    c = checkerboard(trace_faces(PDCode()))
    assert len(c.faces_of(0)) == len(c.faces_of(1)) == 1


def test_checkerboard_is_proper(all_knots):
    for code in all_knots.values():
        if code.n == 0:
            continue
        fm = trace_faces(code)
        c = checkerboard(fm)
        assert len(c.faces_of(0)) + len(c.faces_of(1)) == code.n + 2
        assert c.faces_of(0) and c.faces_of(1)
        for row in fm.corner_face:
            # neighbouring corners of a crossing lie in faces across an edge
            for i in range(4):
                assert c.colors[row[i]] != c.colors[row[(i + 1) % 4]]


def test_goeritz_trefoil():
    d = orient(TREFOIL)
    gm = goeritz(d, checkerboard(trace_faces(d)))
    assert gm.size == 1
    assert abs(gm.matrix[0][0]) == 3


def test_goeritz_unknot_is_empty():
    d = orient(PDCode())
    gm = goeritz(d, checkerboard(trace_faces(d)))
    assert gm.size == 0
    assert smith_normal_form(gm.rows(), ncols=0).is_trivial


def test_goeritz_symmetric(all_knots):
    for code in all_knots.values():
        if code.n < 2:
            continue
        d = orient(code)
        m = goeritz(d, checkerboard(trace_faces(d))).matrix
        assert all(m[i][j] == m[j][i] for i in range(len(m)) for j in range(len(m)))


def test_goeritz_of_trefoil_sum():
    assert goeritz_determinant(connected_sum(TREFOIL, TREFOIL)) == 9


def _all_goeritz_variants(code):
    d = orient(code)
    c = checkerboard(trace_faces(d))
    for color in (0, 1):
        for region in c.faces_of(color):
            yield goeritz(d, c, color=color, deleted=region)


def test_colour_class_and_deleted_region_independence_small(all_knots):
    for name in ("trefoil", "4_1", "6_1", "9_46", "T2_7"):
        ref = double_cover_homology(all_knots[name])
        for gm in _all_goeritz_variants(all_knots[name]):
            assert snf_of(gm) == ref, name


def test_eta_flip_negates_matrix_keeps_cokernel():
    code = builtin("K0_paper").pd
    d = orient(code)
    gm = goeritz(d, checkerboard(trace_faces(d)))
    flipped = [[-v for v in row] for row in gm.rows()]
    assert smith_normal_form(flipped) == smith_normal_form(gm.rows())
    assert abs(det_bareiss(flipped)) == abs(det_bareiss(gm.rows()))


@pytest.mark.parametrize("name", sorted(KNOTINFO))
def test_against_knotinfo(table_store, name):
    det, delta, factors = KNOTINFO[name]
    code = table_store.get(name).pd
    assert determinant(code) == det
    assert alexander(code) == LaurentPoly(delta)
    assert double_cover_homology(code).invariant_factors == factors


def test_satellite_codes_alexander_and_det():
    for name in ("K0_paper", "K1_paper"):
        code = builtin(name).pd
        assert alexander(code) == TREFOIL_DELTA
        assert determinant(code) == 3
        assert double_cover_homology(code) == AbelianGroup((3,))


def test_trefoil_and_unknot():
    assert alexander(TREFOIL) == TREFOIL_DELTA
    assert determinant(TREFOIL) == 3
    assert double_cover_homology(TREFOIL).invariant_factors == (3,)
    assert alexander(PDCode()) == LaurentPoly({0: 1})
    assert determinant(PDCode()) == 1
    assert double_cover_homology(PDCode()).is_trivial


@pytest.mark.parametrize("q", [3, 5, 7, 9, 11])
def test_torus_knot_invariants(q):
    code = torus_2q(q).pd
    assert determinant(code) == q
    # Delta of T(2,q): alternating +-1 over exponents -(q-1)/2..(q-1)/2
    h = (q - 1) // 2
    assert alexander(code) == LaurentPoly({e: (-1) ** (e + h) for e in range(-h, h + 1)})


def test_alexander_symmetric_and_normalized(all_knots):
    for code in all_knots.values():
        p = alexander(code)
        assert p.is_symmetric()
        assert p(1) == 1


def test_mirror_invariance(all_knots):
    for code in all_knots.values():
        m = mirror(code)
        assert determinant(m) == determinant(code)
        assert alexander(m) == alexander(code)
        assert double_cover_homology(m) == double_cover_homology(code)


def test_corrupted_code_raises_or_changes():
    # flipping one crossing of K0 changes the knot
    k0 = builtin("K0_paper").pd
    flipped = list(k0.crossings)
    a, b, c, d = flipped[0]
    flipped[0] = (b, c, d, a) if orient(k0).over_in[0] == 1 else (d, a, b, c)
    code = PDCode(tuple(flipped))
    assert alexander(code) != TREFOIL_DELTA


# --- Betti profiles --------------------------------------------------------


def test_betti_profile_examples():
    assert betti_profile(AbelianGroup((9,)), [3]) == {3: 1}
    assert betti_profile(AbelianGroup((9,)), [5]) == {5: 0}
    assert betti_profile(AbelianGroup((3, 3, 3)), [3]) == {3: 3}
    assert betti_profile(AbelianGroup((15,))) == {3: 1, 5: 1}
    assert betti_profile(AbelianGroup()) == {}


def test_trefoil_cube_betti():
    assert betti_of(connected_power(TREFOIL, 3), [3])[3] >= 3


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_trefoil_power_betti_lower_bound(n):
    assert betti_of(connected_power(TREFOIL, n), [3])[3] >= n


def test_odd_primes_not_dividing_det_vanish(all_knots):
    for code in all_knots.values():
        det = determinant(code)
        h = double_cover_homology(code)
        for p in primerange(3, 51):
            if det % p:
                assert h.p_rank(p) == 0


# --- direct sums -----------------------------------------------------------


def test_homology_of_sum_examples():
    assert homology_of_sum([AbelianGroup((3,)), AbelianGroup((3,))]) == AbelianGroup((3, 3))
    assert homology_of_sum([AbelianGroup((9,)), AbelianGroup((25,))]) == AbelianGroup((225,))
    for m in range(1, 5):
        g = homology_of_sum([AbelianGroup((9,))] * m)
        assert g.invariant_factors == (9,) * m
        assert g.p_rank(3) == m
    assert homology_of_sum([]).is_trivial


def test_connected_sum_splitting_random_pairs(small_knots):
    rng = random.Random(7)
    for _ in range(20):
        a, b = rng.choice(small_knots), rng.choice(small_knots)
        got = double_cover_homology(connected_sum(a, b))
        want = homology_of_sum([double_cover_homology(a), double_cover_homology(b)])
        assert got == want


def test_goeritz_rejects_non_white_deleted_region():
    d = orient(TREFOIL)
    c = checkerboard(trace_faces(d))
    black = c.faces_of(1 - c.chosen_class)[0]
    with pytest.raises(ValueError):
        goeritz(d, c, deleted=black)


def test_goeritz_rejects_inconsistent_colouring():
    d = orient(TREFOIL)
    c = checkerboard(trace_faces(d))
    bad = type(c)(c.faces, tuple(0 for _ in c.colors), 0)
    with pytest.raises(InvariantError):
        goeritz(d, bad)


def test_parse_then_invariants_knot_table_form():
    code = parse_pd("X[1,5,2,4] X[3,1,4,6] X[5,3,6,2]")
    assert determinant(code) == 3

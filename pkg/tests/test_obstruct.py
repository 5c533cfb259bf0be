import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from knotribbon.exactalg import AbelianGroup
from knotribbon.invariants import betti_of, double_cover_homology
from knotribbon.knotstore import builtin, torus_2q
from knotribbon.obstruct import (
    CobordismContext,
    gilmer_check,
    livingston_bounds,
    obstruct_groups,
    obstruct_pair,
    paper_m_bound,
    stabilize,
    stabilize_groups,
)
from knotribbon.pdcode import PDCode, connected_power, connected_sum

UNKNOT = PDCode()
TREFOIL = builtin("trefoil").pd

profiles = st.dictionaries(st.sampled_from([3, 5, 7, 11]), st.integers(0, 6), max_size=4)


def test_livingston_examples():
    r = livingston_bounds({3: 1}, {}, 0)
    assert (r.c2_bound, r.c2_witness, r.c0_bound) == (1, 3, 0)
    assert r.ribbon_forward_excluded and not r.ribbon_backward_excluded

    r = livingston_bounds({3: 4}, {3: 0}, 1)
    assert r.c2_bound == 1

    r = livingston_bounds({3: 2, 5: 1}, {3: 2, 5: 1}, 3)
    assert r.c0_bound == r.c2_bound == 0
    assert r.outcome == "not_excluded"


def test_livingston_rejects_even_prime_and_negative_genus():
    with pytest.raises(ValueError):
        livingston_bounds({2: 1}, {}, 0)
    with pytest.raises(ValueError):
        livingston_bounds({}, {}, -1)


def test_livingston_aggregate_is_max_of_entries():
    r = livingston_bounds({3: 5, 5: 0, 7: 2}, {3: 0, 5: 3, 7: 0}, 0)
    assert r.c2_bound == max(e.c2_bound for e in r.entries) == 3
    assert r.c0_bound == max(e.c0_bound for e in r.entries) == 2
    assert (r.c2_witness, r.c0_witness) == (3, 5)


@pytest.mark.parametrize("dets, verdict", [((9, 25), (True, True)), ((3, 9), (False, True)), ((5, 5), (False, False))])
def test_gilmer_examples(dets, verdict):
    assert gilmer_check(*dets) == verdict


def test_gilmer_rejects_nonpositive():
    with pytest.raises(ValueError):
        gilmer_check(0, 3)


@pytest.mark.parametrize("args, m", [((0, 0, 0, 0, 0), 1), ((1, 0, 0, 1, 0), 5), ((1, 1, 1, 1, 2), 13)])
def test_paper_m_bound_examples(args, m):
    assert paper_m_bound(*args) == m


@settings(max_examples=200, deadline=None)
@given(profiles, profiles, st.integers(0, 4))
def test_monotone_in_genus(b0, b1, g):
    lo, hi = livingston_bounds(b0, b1, g), livingston_bounds(b0, b1, g + 1)
    assert hi.c0_bound <= lo.c0_bound and hi.c2_bound <= lo.c2_bound
    if hi.ribbon_forward_excluded:
        assert lo.ribbon_forward_excluded
    if hi.ribbon_backward_excluded:
        assert lo.ribbon_backward_excluded


@settings(max_examples=200, deadline=None)
@given(profiles, profiles, st.integers(0, 4))
def test_swap_symmetry(b0, b1, g):
    r, s = livingston_bounds(b0, b1, g), livingston_bounds(b1, b0, g)
    assert (r.c0_bound, r.c2_bound) == (s.c2_bound, s.c0_bound)
    assert r.ribbon_forward_excluded == s.ribbon_backward_excluded
    assert r.ribbon_backward_excluded == s.ribbon_forward_excluded


@settings(max_examples=100, deadline=None)
@given(st.lists(st.sampled_from([3, 5, 9, 15, 25, 27]), max_size=4),
       st.lists(st.sampled_from([3, 5, 9, 15, 25, 27]), max_size=4), st.integers(0, 2))
def test_extra_primes_do_not_change_bounds(o0, o1, g):
    h0, h1 = AbelianGroup.from_cyclic(o0), AbelianGroup.from_cyclic(o1)
    base = obstruct_groups(h0, h1, g)
    extra = [3, 5, 7, 11, 13]
    wide = livingston_bounds(
        {p: h0.p_rank(p) for p in extra}, {p: h1.p_rank(p) for p in extra}, g
    )
    assert (wide.c0_bound, wide.c2_bound) == (base.c0_bound, base.c2_bound)


def test_obstruct_pair_satellites():
    rep = obstruct_pair(builtin("K0_paper").pd, builtin("K1_paper").pd, 0)
    assert rep.det0 == rep.det1 == 3
    assert all(e.beta0 == e.beta1 for e in rep.entries)
    assert rep.outcome == "not_excluded"


def test_obstruct_pair_j_knots(j0, j1):
    rep = obstruct_pair(j0, j1, 0)
    assert rep.outcome == "excluded_both"
    assert rep.ribbon_forward_excluded and rep.c2_witness == 3
    assert rep.ribbon_backward_excluded and rep.c0_witness == 5
    assert rep.gilmer_forward_excluded and rep.gilmer_backward_excluded


def test_obstruct_pair_trefoil_self():
    rep = obstruct_pair(TREFOIL, TREFOIL, 0)
    assert rep.outcome == "not_excluded"
    assert rep.gilmer_forward_excluded is False


def test_gilmer_only_at_genus_zero(j0, j1):
    rep = obstruct_pair(j0, j1, 1)
    assert rep.gilmer_forward_excluded is None
    assert rep.outcome == "not_excluded"


def test_optimality_context():
    ctx = CobordismContext(1, 3)
    assert obstruct_pair(TREFOIL, TREFOIL, 2, ctx).optimal is True
    assert obstruct_pair(TREFOIL, TREFOIL, 1, ctx).optimal is False
    assert obstruct_pair(TREFOIL, TREFOIL, 1, CobordismContext(1, None)).optimal is None
    assert obstruct_pair(TREFOIL, TREFOIL, 1).optimal is None


def test_report_to_dict():
    d = livingston_bounds({3: 1}, {}, 0).to_dict()
    assert d["outcome"] == "excluded_one"
    assert d["entries"] == [{"p": 3, "beta0": 1, "beta1": 0, "c0_bound": 0, "c2_bound": 1}]


def test_stabilize_unknots(j0, j1):
    res = stabilize(UNKNOT, UNKNOT, j0, j1, 0, 10)
    assert res.minimal_m == 1
    assert res.report.ribbon_forward_excluded and res.report.ribbon_backward_excluded


@pytest.mark.parametrize("g", [0, 1, 2, 3])
def test_stabilize_trivial_j_not_excluded(g):
    # the profiles never change, so an unobstructed pair stays unobstructed
    res = stabilize(TREFOIL, TREFOIL, UNKNOT, UNKNOT, g, 12)
    assert not res.excluded and res.report is None
    # unknot -> T(2, 2g+3) is obstructed in one direction at most
    res = stabilize(UNKNOT, torus_2q(2 * g + 3).pd, UNKNOT, UNKNOT, g, 12)
    assert not res.excluded


@pytest.mark.parametrize("g", [0, 1, 2])
def test_stabilize_within_threshold(j0, j1, g):
    k1 = torus_2q(2 * g + 3).pd
    res = stabilize(TREFOIL, k1, j0, j1, g, 64)
    assert res.excluded
    assert 1 <= res.minimal_m <= res.sufficient_m
    d = res.d
    assert res.sufficient_m == paper_m_bound(d["d03"], d["d13"], d["d05"], d["d15"], g)


def test_stabilize_minimality(j0, j1):
    # one step below the minimum must fail
    h = [double_cover_homology(c) for c in (TREFOIL, torus_2q(7).pd, j0, j1)]
    res = stabilize_groups(*h, 2, 64)
    below = stabilize_groups(*h, 2, res.minimal_m - 1) if res.minimal_m > 1 else None
    assert below is None or not below.excluded


def test_stabilize_fast_path_matches_spliced_diagram():
    j0, j1 = torus_2q(3).pd, torus_2q(5).pd
    for m in (1, 2):
        for k, j in ((TREFOIL, j0), (torus_2q(5).pd, j1)):
            spliced = connected_sum(k, connected_power(j, m))
            fast = AbelianGroup() + double_cover_homology(k)
            for _ in range(m):
                fast = fast + double_cover_homology(j)
            assert double_cover_homology(spliced) == fast
            assert betti_of(spliced, [3, 5]) == {3: fast.p_rank(3), 5: fast.p_rank(5)}


def test_stabilize_rejects_bad_m_max():
    with pytest.raises(ValueError):
        stabilize(UNKNOT, UNKNOT, UNKNOT, UNKNOT, 0, 0)

import itertools

import pytest
from hypothesis import given, strategies as st

from flatforge.catalog import ag, free, pg
from flatforge.errors import ScaleRefusal, UsageError
from flatforge.flats import enumerate_flats
from flatforge.lemmas import unavoidable_search
from flatforge.matroid import Matroid, indices, mask_of, popcount
from flatforge.ramsey import (Coloring, _gl_generators, all_colorings_mono, canonical_form,
                              element_coloring_to_points, enumerate_simple_binary,
                              max_flatfree_set, mono_flat_search, small_hj_report,
                              small_ramsey_report, spanning_subsets, theorem_census)
from oracles import max_flatfree_brute


def test_mono_flat_examples():
    M = pg(2, 2)
    line = next(enumerate_flats(M, 2))
    col = [0 if line >> i & 1 else 1 for i in range(7)]
    assert mono_flat_search(M, col, 2).elements == line
    F = free(4, 2)
    for bits in range(16):
        col = [bits >> i & 1 for i in range(4)]
        fl = mono_flat_search(F, col, 2)
        assert fl is not None and len({col[i] for i in fl.indices()}) == 1
    A = ag(2, 3)
    _, cap = max_flatfree_set(A, 2)
    col = [0 if cap >> i & 1 else 1 for i in range(9)]
    fl = mono_flat_search(A, col, 2)
    assert fl is not None and fl.elements & cap == 0


def test_mono_flat_rejects_partial_colouring():
    with pytest.raises(UsageError):
        mono_flat_search(pg(2, 2), [0] * 6, 2)
    with pytest.raises(UsageError):
        mono_flat_search(pg(2, 2), [0, None, 0, 0, 0, 0, 0], 2)
    with pytest.raises(UsageError):
        Coloring(2, (0, 2))


@pytest.mark.parametrize("M", [pg(2, 2), ag(2, 3), free(3, 2)], ids=["fano", "ag23", "free3"])
def test_constant_colouring(M):
    for k in range(0, M.rank + 2):
        has = any(True for _ in enumerate_flats(M, k))
        if k == 0:
            continue
        assert (mono_flat_search(M, [0] * M.n, k) is not None) == has


def test_all_colorings_examples():
    v = all_colorings_mono(pg(2, 2), 2, 2, "all")
    assert v.holds and set(v.modes) == {"raw", "search", "cap"}
    v = all_colorings_mono(pg(1, 2), 2, 2, "all")
    assert not v.holds and sorted(v.witness) == [0, 0, 1]
    v = all_colorings_mono(ag(2, 3), 2, 2, "cap")
    assert v.holds and v.cap_size == 4 and 2 * v.cap_size < 9


def test_fano_by_raw_enumeration():
    M = pg(2, 2)
    lines = list(enumerate_flats(M, 2))
    for bits in range(1 << 7):
        cls = [bits, 127 ^ bits]
        assert any(L & c == L for L in lines for c in cls)


def test_scale_refusal():
    with pytest.raises(ScaleRefusal):
        all_colorings_mono(pg(2, 7), 2, 2, "search")
    with pytest.raises(ScaleRefusal):
        all_colorings_mono(pg(4, 2), 2, 2, "raw")
    with pytest.raises(UsageError):
        all_colorings_mono(pg(2, 2), 2, 3, "cap")


def test_cap_examples():
    assert max_flatfree_set(pg(2, 2), 2)[0] == 4
    assert max_flatfree_set(ag(2, 3), 2)[0] == 4
    assert max_flatfree_set(free(4, 2), 2)[0] == 1
    size, X = max_flatfree_set(pg(2, 2), 2)
    assert pg(2, 2).is_flat(127 ^ X) and pg(2, 2).rank_of(127 ^ X) == 2


@pytest.mark.parametrize("M,k", [(pg(2, 2), 2), (ag(2, 3), 2), (ag(3, 2), 3), (pg(1, 3), 2)])
def test_cap_matches_brute_force(M, k):
    flats = list(enumerate_flats(M, k))
    assert max_flatfree_set(M, k) == max_flatfree_brute(M.n, flats)


@pytest.mark.parametrize("M,k", [(pg(3, 2), 2), (ag(2, 3), 2), (pg(2, 3), 2), (ag(3, 2), 3)])
def test_cap_witness_locally_maximal(M, k):
    size, X = max_flatfree_set(M, k)
    flats = list(enumerate_flats(M, k))
    assert popcount(X) == size and not any(F & X == F for F in flats)
    for x in indices(M.full & ~X):
        assert any(F & (X | 1 << x) == F for F in flats)


def test_ramsey_reports():
    rep = small_ramsey_report(2, 2, 3)
    assert rep.holds_at == 3 and rep.fails_at == 2
    rep = small_ramsey_report(2, 2, 4)
    assert [r.holds for r in rep.rows] == [False, True, True]
    # a cap of 8 alone does not rule out a cover of 15 points; the cap
    # mode settles it by checking complements of every large flat-free set
    assert rep.rows[2].cap_size == 8 and rep.rows[2].modes["cap"]
    rep = small_ramsey_report(3, 2, 2)
    assert rep.fails_at == 2 and rep.holds_at is None
    w = rep.rows[0].witness
    assert len(set(w)) == 2


def test_hj_reports():
    assert small_hj_report(3, 2, 2, 3).holds_at == 3
    rep = small_hj_report(2, 2, 2, 2)
    assert rep.fails_at == 2 and rep.rows[0].points == 2
    assert small_hj_report(3, 2, 2, 2).fails_at == 2


def test_three_colour_report():
    rep = small_hj_report(2, 2, 3, 3)
    # AG(2,2): four points, every pair is a line; three colours cannot avoid a pair
    assert rep.rows[-1].holds


def test_monotone_under_embedding():
    # PG(2,2) sits inside PG(3,2) with the same lines on its points
    big = pg(3, 2)
    plane = next(F for F in enumerate_flats(big, 3))
    assert all_colorings_mono(big.restrict(plane), 2, 2).holds
    assert all_colorings_mono(big, 2, 2).holds


@given(st.integers(0, (1 << 7) - 1))
def test_element_colouring_conversion(bits):
    M = Matroid(2, [(1, 0), (1, 0), (0, 1), (1, 1)])
    col = [bits & 1, bits & 1, bits >> 1 & 1, bits >> 2 & 1]
    si, pts = element_coloring_to_points(M, col)
    assert si.n == 3 and pts == [col[0], col[2], col[3]]
    if (bits >> 3) & 1:
        col[1] = 1 - col[0]
        with pytest.raises(UsageError):
            element_coloring_to_points(M, col)
        assert element_coloring_to_points(M, col, strict=False)[1][0] == col[0]


def test_enumeration_counts():
    assert sum(1 for _ in enumerate_simple_binary(2)) == 4
    raw3 = sum(1 for _ in enumerate_simple_binary(3))
    P = pg(2, 2)
    assert raw3 == sum(1 for m in range(1 << 7) if P.rank_of(m) == 3) == 92
    assert sum(1 for _ in enumerate_simple_binary(2, dedupe=True)) == 2
    with pytest.raises(ScaleRefusal):
        next(enumerate_simple_binary(5))
    with pytest.raises(ScaleRefusal):
        next(enumerate_simple_binary(6))
    sampled = list(enumerate_simple_binary(5, samples=3, seed=1))
    assert len(sampled) == 3 and all(M.rank == 5 and M.is_simple() for M in sampled)


def test_dedupe_matches_isomorphism_classes_rank3():
    # simple rank-3 binary matroids: classes by number of points and lines
    reps = list(enumerate_simple_binary(3, dedupe=True))
    assert len(reps) == len({canonical_form(M) for M in reps})


def test_gl_generators_are_collineations():
    P = pg(2, 2)
    lines = set(enumerate_flats(P, 2))
    for perm in _gl_generators(3):
        assert sorted(perm) == list(range(7))
        for L in lines:
            assert mask_of(perm[i] for i in indices(L)) in lines


def test_canonical_form_invariant_under_relabelling():
    P = pg(3, 2)
    S = mask_of([0, 1, 2, 3, 4, 8])
    base = canonical_form(P.restrict(S))
    for perm in _gl_generators(4):
        T = mask_of(perm[i] for i in indices(S))
        assert canonical_form(P.restrict(T)) == base


def test_census_small_ranks():
    assert theorem_census(2, 2).counterexamples == []
    rep = theorem_census(3, 2)
    assert rep.counterexamples == [] and rep.total == 92
    assert sum(rep.counts.values()) == rep.total


def test_census_sampled_rank5():
    rep = theorem_census(5, 3, samples=5, seed=2)
    assert rep.mode == "sampled" and rep.total == 5 == sum(rep.counts.values())
    again = theorem_census(5, 3, samples=5, seed=2)
    assert again.counts == rep.counts
    with pytest.raises(ScaleRefusal):
        theorem_census(5, 3)


def test_spanning_subsets_rank_guard():
    with pytest.raises(ScaleRefusal):
        next(spanning_subsets(5))

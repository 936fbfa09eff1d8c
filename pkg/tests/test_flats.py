import pytest
from hypothesis import given, strategies as st

from flatforge.catalog import ag, build_catalog, free, pg
from flatforge.errors import UsageError
from flatforge.flats import (AFFINE, INDEPENDENT, PROJECTIVE, classify_flat, enumerate_flats,
                             find_affine_restrictions, find_two_point_line, is_affine_restriction)
from flatforge.matroid import Matroid, indices, mask_of, popcount
from oracles import flats_from_ranks, gaussian_binomial, subset_ranks


def test_enumerate_examples():
    assert len(list(enumerate_flats(pg(2, 2), 2))) == 7
    assert len(list(enumerate_flats(pg(3, 2), 2))) == 35
    assert len(list(enumerate_flats(free(4, 2), 2))) == 6
    assert list(enumerate_flats(pg(2, 2), 4)) == []


@pytest.mark.parametrize("n", range(0, 5))
@pytest.mark.parametrize("p", [2, 3])
def test_projective_flat_counts(n, p):
    if p == 3 and n == 4:
        ks = [1, 2, 4, 5]  # rank 3 in PG(4,3) is covered by the slow test below
    else:
        ks = range(n + 2)
    M = pg(n, p)
    for k in ks:
        assert sum(1 for _ in enumerate_flats(M, k)) == gaussian_binomial(n + 1, k, p)


@pytest.mark.slow
def test_projective_flat_counts_pg43_rank3():
    assert sum(1 for _ in enumerate_flats(pg(4, 3), 3)) == gaussian_binomial(5, 3, 3)


@pytest.mark.parametrize("n,p", [(1, 2), (2, 2), (3, 2), (2, 3), (3, 3)])
def test_affine_flat_counts(n, p):
    M = ag(n, p)
    for k in range(1, n + 2):
        # translates of (k-1)-dimensional subspaces
        expected = p ** (n - k + 1) * gaussian_binomial(n, k - 1, p)
        assert sum(1 for _ in enumerate_flats(M, k)) == expected


@pytest.mark.parametrize("n,p", [(2, 2), (3, 2), (2, 3), (3, 3)])
def test_lines_have_expected_sizes(n, p):
    for L in enumerate_flats(pg(n, p), 2):
        assert popcount(L) == p + 1
    A = ag(n, p)
    for L in enumerate_flats(A, 2):
        assert popcount(L) == p
    assert len(A.lines_through(0)) == (p**n - 1) // (p - 1)


def test_classify_examples():
    F = pg(2, 2)
    assert classify_flat(F, F.full).tags == {PROJECTIVE}
    A = ag(2, 3)
    fl = classify_flat(A, A.full)
    assert fl.tags == {AFFINE} and fl.functional == (1, 0, 0)
    pair = next(L for L in enumerate_flats(free(3, 2), 2))
    assert classify_flat(free(3, 2), pair).tags == {INDEPENDENT, AFFINE}
    with pytest.raises(UsageError):
        classify_flat(F, 0b11)


def test_two_point_line_examples():
    t = find_two_point_line(pg(2, 2))
    assert t.line is None and t.histogram == {3: 7}
    assert popcount(find_two_point_line(free(3, 2)).line) == 2
    with pytest.raises(UsageError):
        find_two_point_line(Matroid(2, [(1, 0), (1, 0)]))


def test_affine_restriction_examples():
    M = pg(2, 2)
    S = mask_of(i for i, v in enumerate(M.vectors) if v[2] == 1)
    assert popcount(S) == 4 and is_affine_restriction(M, S) == (0, 0, 1)
    assert is_affine_restriction(M, M.closure(0b11)) is None


def test_affine_witness_survives_restriction():
    for spec in ["ag:2,3", "pg:3,2", "reid:3"]:
        M = build_catalog(spec)
        for k in (1, 2, 3):
            for F in enumerate_flats(M, k):
                fl = classify_flat(M, F)
                if AFFINE in fl.tags:
                    assert is_affine_restriction(M, F) == fl.functional


def test_find_affine_restrictions_in_pg32():
    M = pg(3, 2)
    found = list(find_affine_restrictions(M, 3))
    # each of the 15 planes contains 7 affine planes (complements of its lines)
    assert len(found) == 15 * 7
    assert all(is_affine_restriction(M, A) is not None for A in found)


@st.composite
def small_binary_or_ternary(draw):
    p = draw(st.sampled_from([2, 3]))
    dim = draw(st.integers(1, 4))
    n = draw(st.integers(1, 9))
    vecs = [tuple(draw(st.integers(0, p - 1)) for _ in range(dim)) for _ in range(n)]
    return Matroid(p, vecs, dim=dim)


@given(small_binary_or_ternary())
def test_flats_match_powerset_oracle(M):
    ranks = subset_ranks(M.vectors, M.p)
    for k in range(M.rank + 1):
        got = list(enumerate_flats(M, k))
        assert len(got) == len(set(got))
        assert set(got) == flats_from_ranks(ranks, M.n, k)
        keys = [tuple(indices(F)) for F in got]
        assert keys == sorted(keys)


@given(small_binary_or_ternary())
def test_projective_tag_matches_point_count(M):
    for k in range(1, M.rank + 1):
        for F in enumerate_flats(M, k):
            fl = classify_flat(M, F)
            full = M.point_count(F) == (M.p**k - 1) // (M.p - 1) == popcount(F) and not F & M.loops
            assert (PROJECTIVE in fl.tags) == full
            assert (INDEPENDENT in fl.tags) == (popcount(F) == k)

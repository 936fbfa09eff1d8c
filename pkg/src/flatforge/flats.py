"""Enumeration and classification of flats."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterator

from .errors import UsageError
from .gf import MatGF, canonical_point, complete_basis, dot, hyperplanes_of, mat_inverse
from .matroid import Matroid, indices, lex_key, popcount

INDEPENDENT = "Independent"
AFFINE = "AffineGeometry"
PROJECTIVE = "ProjectiveGeometry"
NEITHER = "Neither"
UNAVOIDABLE = frozenset({INDEPENDENT, AFFINE, PROJECTIVE})


@dataclass(frozen=True)
class Flat:
    elements: int
    rank: int
    tags: frozenset = field(default_factory=frozenset)
    functional: tuple | None = None  # avoiding hyperplane when AFFINE in tags

    @property
    def size(self) -> int:
        return popcount(self.elements)

    def indices(self) -> list[int]:
        return indices(self.elements)


def enumerate_flats(M: Matroid, k: int) -> Iterator[int]:
    """Rank-``k`` flats of ``M`` as masks, ordered by their sorted indices."""
    if k < 0:
        raise UsageError("rank must be non-negative")
    if k > M.rank:
        return iter(())
    return iter(sorted(M.kernel.flats(k), key=lex_key))


def _span_coordinates(M: Matroid, S: int) -> tuple[list[int], list[tuple], tuple]:
    """Greedy basis of span(S) drawn from S, the coordinates of each element
    of S in that basis, and the inverse of the completed ambient basis."""
    basis: list[int] = []
    cur = 0
    for i in indices(S):
        if M.kernel.rank(cur | 1 << i) > len(basis):
            basis.append(i)
            cur |= 1 << i
    p, dim = M.p, M.dim
    full = complete_basis([M.vectors[b] for b in basis], dim, p)
    # columns of ``full`` form an invertible matrix; coordinates = inverse * v
    inv = mat_inverse(MatGF.from_columns(p, full, dim).data, p)
    k = len(basis)
    coords = []
    for i in indices(S):
        v = M.vectors[i]
        coords.append(tuple(sum(inv[r][j] * v[j] for j in range(dim)) % p for r in range(k)))
    return basis, coords, inv


def is_affine_restriction(M: Matroid, S) -> tuple | None:
    """Ambient functional vanishing nowhere on ``S`` when ``M|S`` is an
    affine geometry AG(k-1, p) with k = rank(S); otherwise ``None``."""
    S = M._check(S)
    p = M.p
    elems = indices(S)
    if not elems or S & M.loops:
        return None
    if len({M.points_index[i] for i in elems}) != len(elems):
        return None
    k = M.rank_of(S)
    if len(elems) != p ** (k - 1):
        return None
    basis, coords, inv = _span_coordinates(M, S)
    for psi in hyperplanes_of(k, p):
        if all(dot(psi, c, p) for c in coords):
            # pull back to the ambient space: phi = psi * (first k rows of inv)
            phi = tuple(sum(psi[r] * inv[r][j] for r in range(k)) % p for j in range(M.dim))
            return canonical_point(phi, p)
    return None


def classify_flat(M: Matroid, F) -> Flat:
    F = M._check(F)
    if not M.is_flat(F):
        raise UsageError("input is not a flat")
    p = M.p
    k = M.rank_of(F)
    size = popcount(F)
    simple_part = popcount(F & ~M.loops) == M.point_count(F) and not (F & M.loops)
    tags = set()
    if size == k:
        tags.add(INDEPENDENT)
    if simple_part and size == (p**k - 1) // (p - 1):
        tags.add(PROJECTIVE)
    functional = None
    if k >= 1:
        functional = is_affine_restriction(M, F)
        if functional is not None:
            tags.add(AFFINE)
    if not tags:
        tags.add(NEITHER)
    return Flat(F, k, frozenset(tags), functional)


@dataclass(frozen=True)
class TwoPointLine:
    line: int | None
    histogram: dict


def find_two_point_line(M: Matroid) -> TwoPointLine:
    if not M.is_simple():
        raise UsageError("two-point line search needs a simple matroid")
    hist: Counter = Counter()
    found = None
    for L in enumerate_flats(M, 2):
        s = popcount(L)
        hist[s] += 1
        if s == 2 and found is None:
            found = L
    return TwoPointLine(found, dict(sorted(hist.items())))


def find_affine_restrictions(M: Matroid, k: int) -> Iterator[int]:
    """Every AG(k-1, p)-restriction of a simple ``M``, as masks.

    For each rank-k flat W and each hyperplane of span(W), the points of
    span(W) off the hyperplane must all be present.
    """
    p = M.p
    if k < 1 or k > M.rank:
        return
    seen = set()
    for W in enumerate_flats(M, k):
        if popcount(W) < p ** (k - 1):
            continue
        basis, coords, _ = _span_coordinates(M, W)
        elems = indices(W)
        for psi in hyperplanes_of(k, p):
            S = 0
            pts = set()
            for i, c in zip(elems, coords):
                if dot(psi, c, p):
                    S |= 1 << i
                    pts.add(canonical_point(c, p))
            if len(pts) == p ** (k - 1) and popcount(S) == len(pts) and S not in seen:
                seen.add(S)
                yield S


def atlas_certificate(M: Matroid, k: int) -> dict:
    """Every rank-k flat with its tags, as a ``flat_atlas`` certificate."""
    from .io import envelope

    recs = []
    for F in enumerate_flats(M, k):
        fl = classify_flat(M, F)
        recs.append({"elements": fl.indices(), "tags": sorted(fl.tags),
                     "functional": list(fl.functional) if fl.functional else None})
    return envelope("flat_atlas", M, {"k": k, "flats": recs})

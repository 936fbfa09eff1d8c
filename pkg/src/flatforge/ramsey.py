"""Monochromatic flats, flat-free sets and small Ramsey computations."""

from __future__ import annotations

import itertools
import random
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from . import kernels
from .catalog import ag, pg
from .errors import LemmaViolation, ScaleRefusal, UsageError
from .flats import Flat, classify_flat, enumerate_flats
from .gf import canonical_point, mat_inverse, mat_vec
from .io import envelope
from .lemmas import unavoidable_search
from .matroid import Matroid, indices, mask_of, popcount

EXHAUSTIVE_LIMIT = 40  # points, for the pruned colouring search
RAW_LIMIT = 16  # points, for enumerating every colouring
CAP_LIMIT = 64


@dataclass(frozen=True)
class Coloring:
    palette: int
    colors: tuple

    def __post_init__(self):
        if any(not 0 <= c < self.palette for c in self.colors):
            raise UsageError("colour outside the palette")

    def classes(self) -> list[int]:
        out = [0] * self.palette
        for i, c in enumerate(self.colors):
            out[c] |= 1 << i
        return out


def _as_coloring(M: Matroid, col) -> Coloring:
    if not isinstance(col, Coloring):
        col = list(col)
        if any(c is None for c in col):
            raise UsageError("partial colouring")
        col = Coloring(max(col, default=0) + 1, tuple(col))
    if len(col.colors) != M.n:
        raise UsageError(f"colouring covers {len(col.colors)} of {M.n} elements")
    return col


def element_coloring_to_points(M: Matroid, colors: Sequence[int], strict: bool = True) -> tuple[Matroid, list[int]]:
    """Point-level colouring of si(M) from an element colouring.

    With ``strict`` every parallel class must be monochromatic; otherwise a
    class takes the colour of its least element.
    """
    si, pmap = M.simplify()
    out = []
    for cls, rep in zip(pmap.classes, pmap.representatives):
        seen = {colors[i] for i in indices(cls)}
        if strict and len(seen) > 1:
            raise UsageError(f"parallel class {indices(cls)} is not monochromatic")
        out.append(colors[rep])
    return si, out


def mono_flat_search(M: Matroid, col, k: int) -> Flat | None:
    """First rank-k flat (in lexicographic order) inside one colour class."""
    if not M.is_simple():
        raise UsageError("monochromatic flat search needs a simple matroid")
    col = _as_coloring(M, col)
    classes = col.classes()
    for F in enumerate_flats(M, k):
        c = col.colors[(F & -F).bit_length() - 1]
        if F & classes[c] == F:
            return classify_flat(M, F)
    return None


def max_flatfree_set(M: Matroid, k: int, backend: str | None = None) -> tuple[int, int]:
    """Largest subset containing no rank-k flat; ties broken lexicographically."""
    if M.n > CAP_LIMIT:
        raise ScaleRefusal(f"{M.n} elements exceeds the cap-search limit {CAP_LIMIT}")
    return kernels.max_flatfree(M.n, list(enumerate_flats(M, k)), backend)


def _raw_free_coloring(n: int, flats: list[int], palette: int):
    if palette == 2:
        full = (1 << n) - 1
        # colour-1 class is ``m``; iterate in lexicographic order of the colour vector
        for m in range(1 << n):
            cls1 = int(format(m, f"0{n}b")[::-1], 2) if n else 0
            cls0 = full & ~cls1
            if not any(f & cls0 == f or f & cls1 == f for f in flats):
                return [cls1 >> i & 1 for i in range(n)]
        return None
    for colors in itertools.product(range(palette), repeat=n):
        classes = [0] * palette
        for i, c in enumerate(colors):
            classes[c] |= 1 << i
        if not any(f & cl == f for f in flats for cl in classes):
            return list(colors)
    return None


def _cap_free_coloring(n: int, flats: list[int]):
    size, _ = kernels.max_flatfree(n, flats)
    if 2 * size < n:
        return None, size
    full = (1 << n) - 1
    best = None
    for X in kernels.flatfree_sets(n, flats, n - size):
        if X & 1:
            continue  # element 0 takes colour 0 without loss of generality
        Y = full & ~X
        if all(f & Y != f for f in flats):
            colors = [X >> i & 1 for i in range(n)]
            if best is None or colors < best:
                best = colors
    return best, size


@dataclass
class MonoVerdict:
    holds: bool
    witness: list | None
    modes: dict = field(default_factory=dict)
    cap_size: int | None = None


def all_colorings_mono(M: Matroid, k: int, palette: int = 2, mode: str = "auto") -> MonoVerdict:
    """Does every ``palette``-colouring of the points have a monochromatic
    rank-k flat? A failing verdict carries the lexicographically first
    colouring without one.

    Modes: ``raw`` (every colouring), ``search`` (depth-first with pruning),
    ``cap`` (two colours only: flat-free covers via max_flatfree_set),
    ``auto`` (search, plus cap for two colours), ``all`` (every mode that fits,
    which must agree).
    """
    si, _ = M.simplify()
    n = si.n
    flats = list(enumerate_flats(si, k))
    if mode == "auto":
        modes = ["search"] + (["cap"] if palette == 2 and n <= CAP_LIMIT else [])
    elif mode == "all":
        modes = [m for m, ok in (("raw", n <= RAW_LIMIT), ("search", n <= EXHAUSTIVE_LIMIT),
                                 ("cap", palette == 2 and n <= CAP_LIMIT)) if ok]
    else:
        modes = [mode]
    results = {}
    cap_size = None
    for m in modes:
        if m == "raw":
            if n > RAW_LIMIT:
                raise ScaleRefusal(f"raw colouring enumeration limited to {RAW_LIMIT} points")
            results[m] = _raw_free_coloring(n, flats, palette)
        elif m == "search":
            if n > EXHAUSTIVE_LIMIT:
                raise ScaleRefusal(f"exhaustive colouring search limited to {EXHAUSTIVE_LIMIT} points")
            results[m] = kernels.free_coloring(n, flats, palette)
        elif m == "cap":
            if palette != 2:
                raise UsageError("cap-based mode handles two colours only")
            if n > CAP_LIMIT:
                raise ScaleRefusal(f"cap-based mode limited to {CAP_LIMIT} points")
            results[m], cap_size = _cap_free_coloring(n, flats)
        else:
            raise UsageError(f"unknown mode {mode!r}")
    if not results:
        raise ScaleRefusal(f"no colouring mode supports {n} points")
    witnesses = list(results.values())
    if any(w != witnesses[0] for w in witnesses):
        raise LemmaViolation(f"colouring modes disagree: {results}")
    w = witnesses[0]
    return MonoVerdict(w is None, w, {m: (r is None) for m, r in results.items()}, cap_size)


@dataclass
class RankRow:
    rank: int
    points: int
    holds: bool
    modes: dict
    witness: list | None = None
    cap_size: int | None = None


@dataclass
class RamseyBounds:
    q: int
    t: int
    colors: int
    geometry: str
    rows: list = field(default_factory=list)

    @property
    def holds_at(self) -> int | None:
        """Least rank at which every colouring has a monochromatic flat."""
        return min((r.rank for r in self.rows if r.holds), default=None)

    @property
    def fails_at(self) -> int | None:
        """Greatest rank with a colouring avoiding monochromatic flats."""
        return max((r.rank for r in self.rows if not r.holds), default=None)

    def to_json(self) -> dict:
        return {
            "q": self.q, "t": self.t, "colors": self.colors, "geometry": self.geometry,
            "holds_at": self.holds_at, "fails_at": self.fails_at,
            "rows": [{"rank": r.rank, "points": r.points, "holds": r.holds, "modes": r.modes,
                      "witness": r.witness, "cap_size": r.cap_size} for r in self.rows],
        }


def _report(q, t, colors, max_rank, affine):
    out = RamseyBounds(q, t, colors, "affine" if affine else "projective")
    for r in range(max(t, 1), max_rank + 1):
        M = ag(r - 1, q) if affine else pg(r - 1, q)
        v = all_colorings_mono(M, t, colors, mode="all")
        out.rows.append(RankRow(r, M.n, v.holds, v.modes, v.witness, v.cap_size))
    fa, ha = out.fails_at, out.holds_at
    if fa is not None and ha is not None and fa > ha:
        raise LemmaViolation("monochromatic property is not monotone in rank")
    return out


def small_ramsey_report(q: int, t: int, max_rank: int, colors: int = 2) -> RamseyBounds:
    """Decide, for each rank t..max_rank, whether every colouring of
    PG(r-1, q) has a monochromatic rank-t flat."""
    return _report(q, t, colors, max_rank, affine=False)


def small_hj_report(q: int, t: int, colors: int, max_rank: int) -> RamseyBounds:
    """As :func:`small_ramsey_report` for AG(r-1, q)."""
    return _report(q, t, colors, max_rank, affine=True)


# ---------------------------------------------------------------- binary census


def spanning_subsets(r: int) -> Iterator[int]:
    """Masks of spanning point sets of PG(r-1, 2), in increasing order."""
    if not 1 <= r <= 4:
        raise ScaleRefusal("exhaustive enumeration supports 1 <= r <= 4")
    P = pg(r - 1, 2)
    for m in range(1, 1 << P.n):
        if P.rank_of(m) == r:
            yield m


def enumerate_simple_binary(r: int, dedupe: bool = False, samples: int | None = None,
                            seed: int = 0) -> Iterator[Matroid]:
    """Simple rank-r binary matroids as restrictions of PG(r-1, 2).

    Exhaustive for r <= 4; r = 5 needs ``samples`` and draws seeded random
    spanning subsets. ``dedupe`` keeps one member per linear-symmetry class.
    """
    if r == 5:
        if samples is None:
            raise ScaleRefusal("rank 5 supports sampling mode only")
        P = pg(4, 2)
        rng = random.Random(seed)
        done = 0
        while done < samples:
            m = rng.getrandbits(P.n)
            if P.rank_of(m) == 5:
                done += 1
                yield P.restrict(m)
        return
    if samples is not None:
        raise UsageError("sampling mode is for rank 5")
    P = pg(r - 1, 2)
    masks = list(spanning_subsets(r))
    if dedupe:
        orbit = _orbits(r, masks)
        masks = sorted({orbit[m] for m in masks})
    for m in masks:
        yield P.restrict(m)


def _gl_generators(r: int) -> list[list[int]]:
    """Point permutations of PG(r-1, 2) induced by generators of GL(r, 2).

    Point i is the vector with integer value i + 1.
    """
    mats = []
    if r >= 2:
        swap = [[int((i, j) in ((0, 1), (1, 0)) or (i == j and i > 1)) for j in range(r)] for i in range(r)]
        cyc = [[int(j == (i + 1) % r) for j in range(r)] for i in range(r)]
        shear = [[int(i == j or (i, j) == (0, 1)) for j in range(r)] for i in range(r)]
        mats = [swap, cyc, shear]
    perms = []
    for g in mats:
        perm = []
        for v in range(1, 1 << r):
            vec = [v >> i & 1 for i in range(r)]
            w = mat_vec(g, vec, 2)
            perm.append(sum(b << i for i, b in enumerate(w)) - 1)
        perms.append(perm)
    return perms


def _apply(perm: list[int], mask: int) -> int:
    out = 0
    while mask:
        low = mask & -mask
        out |= 1 << perm[low.bit_length() - 1]
        mask ^= low
    return out


def _orbits(r: int, masks) -> dict:
    """Least member of each mask's orbit under GL(r, 2); ``masks`` must be
    a union of orbits."""
    gens = _gl_generators(r)
    pool = set(masks)
    parent = {m: m for m in pool}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for m in pool:
        for g in gens:
            img = _apply(g, m)
            if img not in pool:
                raise UsageError("mask set is not closed under the symmetry group")
            a, b = find(m), find(img)
            if a != b:
                parent[max(a, b)] = min(a, b)
    return {m: find(m) for m in pool}


def canonical_form(M: Matroid) -> tuple:
    """Lexicographically least column set over all changes of basis that
    send an ordered basis of M to the identity."""
    p, r = M.p, M.rank
    if M.dim != r:
        raise UsageError("canonical form needs a spanning representation (dim == rank)")
    best = None
    for basis in _ordered_bases(M):
        inv = mat_inverse(tuple(tuple(M.vectors[b][i] for b in basis) for i in range(r)), p)
        cols = sorted(canonical_point(mat_vec(inv, v, p), p) if any(v) else tuple(v) for v in M.vectors)
        key = tuple(cols)
        if best is None or key < best:
            best = key
    return best if best is not None else ()


def _ordered_bases(M: Matroid) -> Iterator[list[int]]:
    r = M.rank

    def go(chosen, mask):
        if len(chosen) == r:
            yield list(chosen)
            return
        for e in range(M.n):
            if not mask >> e & 1 and M.rank_of(mask | 1 << e) == len(chosen) + 1:
                chosen.append(e)
                yield from go(chosen, mask | 1 << e)
                chosen.pop()

    yield from go([], 0)


@dataclass
class EnumerationReport:
    r: int
    k: int
    p: int
    mode: str
    total: int
    counts: dict
    counterexamples: list  # masks over PG(r-1, 2)
    canonical: dict  # canonical form -> number of raw counterexamples
    positives: dict = field(default_factory=dict, repr=False)  # mask -> flat mask

    def to_json(self, with_positives: bool = False) -> dict:
        out = {
            "r": self.r, "k": self.k, "p": self.p, "mode": self.mode, "total": self.total,
            "counts": dict(sorted(self.counts.items())),
            "counterexamples": len(self.counterexamples),
            "counterexample_classes": [
                {"columns": [list(c) for c in form], "raw_count": n}
                for form, n in sorted(self.canonical.items())
            ],
        }
        if with_positives:
            out["positives"] = {str(m): indices(f) for m, f in sorted(self.positives.items())}
        return out


def _census_chunk(args):
    r, k, lo, hi = args
    P = pg(r - 1, 2)
    counts: Counter = Counter()
    bad, good = [], {}
    for m in range(lo, hi):
        if P.rank_of(m) != r:
            continue
        res = unavoidable_search(P.restrict(m), k, "direct")
        if res.flat is None:
            counts["none"] += 1
            bad.append(m)
        else:
            counts["+".join(sorted(res.flat.tags))] += 1
            good[m] = _lift_local(res.flat.elements, m)
    return counts, bad, good


def _lift_local(local: int, m: int) -> int:
    keep = indices(m)
    return mask_of(keep[i] for i in indices(local))


def theorem_census(r: int, k: int, threads: int = 1, samples: int | None = None,
                   seed: int = 0) -> EnumerationReport:
    """Run the direct unavoidable-flat search on every simple rank-r binary
    matroid; counterexamples are grouped by canonical form.

    Rank 5 is sampled: ``samples`` seeded spanning subsets of PG(4, 2).
    """
    if r == 5:
        return _sampled_census(k, samples, seed)
    if samples is not None:
        raise UsageError("sampling is for rank 5")
    if not 1 <= r <= 4:
        raise ScaleRefusal("the exhaustive census supports 1 <= r <= 4")
    P = pg(r - 1, 2)
    total_masks = 1 << P.n
    nchunks = max(1, threads) * 8
    step = -(-total_masks // nchunks)
    jobs = [(r, k, lo, min(lo + step, total_masks)) for lo in range(1, total_masks, step)]
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as ex:
            parts = list(ex.map(_census_chunk, jobs))
    else:
        parts = [_census_chunk(j) for j in jobs]
    counts: Counter = Counter()
    bad: list = []
    good: dict = {}
    for c, b, g in parts:
        counts.update(c)
        bad.extend(b)
        good.update(g)
    canon: Counter = Counter()
    if bad:
        orbit = _orbits(r, bad)
        forms = {rep: canonical_form(P.restrict(rep)) for rep in set(orbit.values())}
        for m in bad:
            canon[forms[orbit[m]]] += 1
    total = sum(counts.values())
    return EnumerationReport(r, k, 2, "exhaustive", total, dict(counts), bad, dict(canon), good)


def _sampled_census(k: int, samples: int | None, seed: int) -> EnumerationReport:
    if samples is None:
        raise ScaleRefusal("rank 5 supports sampling mode only")
    P = pg(4, 2)
    rng = random.Random(seed)
    counts: Counter = Counter()
    bad, good = [], {}
    while sum(counts.values()) < samples:
        m = rng.getrandbits(P.n)
        if P.rank_of(m) != 5:
            continue
        res = unavoidable_search(P.restrict(m), k, "direct")
        if res.flat is None:
            counts["none"] += 1
            bad.append(m)
        else:
            counts["+".join(sorted(res.flat.tags))] += 1
            good[m] = _lift_local(res.flat.elements, m)
    return EnumerationReport(5, k, 2, "sampled", samples, dict(counts), bad, {}, good)


def cap_certificate(M: Matroid, k: int, backend: str | None = None) -> dict:
    size, X = max_flatfree_set(M, k, backend)
    return envelope("cap", M, {"k": k, "size": size, "witness": indices(X)},
                    {"maximum": "exhaustive branch and bound"})

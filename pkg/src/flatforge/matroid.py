"""Represented matroids over GF(p).

Subsets of the ground set are int bitmasks (bit ``i`` is element ``i``);
methods also accept iterables of indices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from . import kernels
from .errors import UsageError
from .gf import MatGF, canonical_point, field_of, rref


def mask_of(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


def indices(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def lex_key(mask: int) -> tuple:
    """Sort key: lexicographic order of the sorted element indices."""
    return tuple(indices(mask))


def _as_mask(S) -> int:
    if isinstance(S, int):
        return S
    return mask_of(S)


@dataclass(frozen=True)
class MinorRecipe:
    """How a minor was obtained; masks refer to the parent's ground set."""

    contracted: int
    deleted: int
    parent: "Matroid"


@dataclass(frozen=True)
class PointMap:
    """Parallel classes of a matroid and the representative kept for each."""

    classes: tuple  # masks, ordered by least element
    representatives: tuple  # least element of each class

    def representative(self, e: int) -> int | None:
        for cls, rep in zip(self.classes, self.representatives):
            if cls >> e & 1:
                return rep
        return None


class Matroid:
    """A matroid given by labeled column vectors over GF(p)."""

    def __init__(self, p: int, vectors: Sequence[Sequence[int]], labels=None, dim: int | None = None,
                 recipe: MinorRecipe | None = None, origin: Sequence[int] | None = None):
        self.field = field_of(p)
        self.p = p
        vectors = [tuple(int(c) % p for c in v) for v in vectors]
        if dim is None:
            if not vectors:
                raise UsageError("ambient dimension required for an empty matroid")
            dim = len(vectors[0])
        if any(len(v) != dim for v in vectors):
            raise UsageError("all vectors must have the ambient dimension")
        self.dim = dim
        self.vectors = tuple(vectors)
        if labels is None:
            labels = [str(i) for i in range(len(vectors))]
        labels = tuple(str(x) for x in labels)
        if len(labels) != len(vectors):
            raise UsageError("one label per element required")
        if len(set(labels)) != len(labels):
            raise UsageError("labels must be unique")
        self.labels = labels
        self.recipe = recipe
        self.origin = tuple(origin) if origin is not None else tuple(range(len(vectors)))
        self.kernel = kernels.rank_kernel(p, dim, self.vectors)
        self.points_index = tuple(canonical_point(v, p) if any(v) else None for v in self.vectors)
        self.rank = self.kernel.rank(self.full)

    def __repr__(self):
        return f"Matroid(p={self.p}, rank={self.rank}, n={self.n})"

    @property
    def n(self) -> int:
        return len(self.vectors)

    @property
    def full(self) -> int:
        return (1 << len(self.vectors)) - 1

    @property
    def loops(self) -> int:
        return self.kernel.loops

    def _check(self, S) -> int:
        m = _as_mask(S)
        if m < 0 or m >> self.n:
            raise UsageError("subset outside the ground set")
        return m

    def rank_of(self, S) -> int:
        return self.kernel.rank(self._check(S))

    def closure(self, S) -> int:
        return self.kernel.closure(self._check(S))

    def is_independent(self, S) -> bool:
        m = self._check(S)
        return self.kernel.rank(m) == popcount(m)

    def is_flat(self, S) -> bool:
        m = self._check(S)
        return self.kernel.closure(m) == m

    def is_simple(self) -> bool:
        pts = [q for q in self.points_index]
        return None not in pts and len(set(pts)) == len(pts)

    def is_coloop(self, e: int) -> bool:
        return self.kernel.rank(self.full & ~(1 << e)) == self.rank - 1

    # minors

    def restrict(self, S) -> "Matroid":
        m = self._check(S)
        keep = indices(m)
        return Matroid(self.p, [self.vectors[i] for i in keep], [self.labels[i] for i in keep],
                       dim=self.dim, recipe=MinorRecipe(0, self.full & ~m, self),
                       origin=[self.origin[i] for i in keep])

    def delete(self, S) -> "Matroid":
        return self.restrict(self.full & ~self._check(S))

    def contract(self, S) -> "Matroid":
        """M/S: project the remaining columns along span(S).

        Elements spanned by S stay in the ground set as zero columns.
        """
        m = self._check(S)
        p = self.p
        keep = [i for i in range(self.n) if not m >> i & 1]
        rows = [self.vectors[i] for i in indices(m)]
        red = rref(MatGF(p, tuple(rows))) if rows else None
        if red is None or red.rank == 0:
            vecs = [self.vectors[i] for i in keep]
            dim = self.dim
        else:
            basis = red.matrix.data[:red.rank]
            pivots = red.pivots
            other = [j for j in range(self.dim) if j not in pivots]
            vecs = []
            for i in keep:
                v = list(self.vectors[i])
                for row, c in zip(basis, pivots):
                    a = v[c]
                    if a:
                        v = [(x - a * y) % p for x, y in zip(v, row)]
                vecs.append(tuple(v[j] for j in other))
            dim = len(other)
        return Matroid(p, vecs, [self.labels[i] for i in keep], dim=dim,
                       recipe=MinorRecipe(m, 0, self), origin=[self.origin[i] for i in keep])

    def parallel_classes(self) -> list[int]:
        """Rank-1 flats' non-loop parts (the points), ordered by least element."""
        groups: dict = {}
        for i, q in enumerate(self.points_index):
            if q is not None:
                groups[q] = groups.get(q, 0) | (1 << i)
        return sorted(groups.values(), key=lambda m: (m & -m))

    def point_count(self, S=None) -> int:
        """Number of points (rank-1 flats) meeting ``S``."""
        m = self.full if S is None else self._check(S)
        return len({self.points_index[i] for i in indices(m & ~self.loops)})

    def simplify(self) -> tuple["Matroid", PointMap]:
        classes = self.parallel_classes()
        reps = tuple((c & -c).bit_length() - 1 for c in classes)
        si = self.restrict(mask_of(reps))
        return si, PointMap(tuple(classes), reps)

    # structure

    def connected_components(self) -> list[int]:
        """Connectivity classes of the non-loop elements, as masks.

        Merges every fundamental circuit of the lexicographically first
        basis; two elements share a component iff they are linked through
        such circuits.
        """
        if self.n == 0:
            return []
        red = rref(MatGF.from_columns(self.p, self.vectors, self.dim))
        parent = list(range(self.n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        piv = set(red.pivots)
        for e in range(self.n):
            if e in piv or self.loops >> e & 1:
                continue
            for r, b in enumerate(red.pivots):
                if red.matrix.data[r][e]:
                    parent[find(b)] = find(e)
        comps: dict = {}
        for e in range(self.n):
            if not self.loops >> e & 1:
                comps[find(e)] = comps.get(find(e), 0) | (1 << e)
        return sorted(comps.values(), key=lambda m: (m & -m))

    def is_connected(self) -> bool:
        return len(self.connected_components()) <= 1

    def girth(self) -> float:
        """Size of a smallest circuit; ``math.inf`` when there is none."""
        if self.loops:
            return 1
        if len(set(self.points_index)) < self.n:
            return 2
        if self.rank == self.n:
            return math.inf
        for s in range(3, self.rank + 2):
            for combo in combinations(range(self.n), s):
                if self.kernel.rank(mask_of(combo)) < s:
                    return s
        return math.inf  # pragma: no cover

    def lines_through(self, e: int) -> list[int]:
        if self.loops >> e & 1:
            raise UsageError("lines through a loop are undefined")
        lines = set()
        rest = self.full & ~self.closure(1 << e)
        while rest:
            low = rest & -rest
            line = self.closure((1 << e) | low)
            lines.add(line)
            rest &= ~line
        return sorted(lines, key=lex_key)


def points(M: Matroid) -> list[int]:
    return M.parallel_classes()


def lines_through(M: Matroid, e: int) -> list[int]:
    return M.lines_through(e)

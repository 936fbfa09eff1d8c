"""Pure-Python kernels.

Same API as the compiled ``_ckernels`` module; used when the extension is
not built or when ``FLATFORGE_PURE_PYTHON=1``.

Ground-set subsets are Python int bitmasks (bit ``i`` = element ``i``).
"""

from __future__ import annotations


def _bits(mask):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class RankKernel:
    """Rank and closure oracle for a list of column vectors over GF(p)."""

    def __init__(self, p, dim, vectors):
        self.p = p
        self.dim = dim
        self.n = len(vectors)
        self._inv = [0] + [pow(a, p - 2, p) for a in range(1, p)]
        if p == 2:
            self._packed = [sum(1 << i for i, c in enumerate(v) if c) for v in vectors]
        else:
            self._packed = [tuple(int(c) % p for c in v) for v in vectors]
        self._levels = None
        self.loops = 0
        for i, v in enumerate(self._packed):
            if (v == 0) if p == 2 else not any(v):
                self.loops |= 1 << i

    # echelon bases are dicts pivot -> reduced row
    def _reduce2(self, basis, v):
        for piv, row in basis.items():
            if v >> piv & 1:
                v ^= row
        return v

    def _insert2(self, basis, v):
        v = self._reduce2(basis, v)
        if not v:
            return False
        piv = (v & -v).bit_length() - 1
        for q, row in basis.items():
            if row >> piv & 1:
                basis[q] = row ^ v
        basis[piv] = v
        return True

    def _reducep(self, basis, v):
        p = self.p
        v = list(v)
        for piv, row in basis.items():
            c = v[piv]
            if c:
                for j in range(self.dim):
                    if row[j]:
                        v[j] = (v[j] - c * row[j]) % p
        return v

    def _insertp(self, basis, v):
        p = self.p
        v = self._reducep(basis, v)
        for piv in range(self.dim):
            if v[piv]:
                break
        else:
            return False
        inv = self._inv[v[piv]]
        v = [(c * inv) % p for c in v]
        for q, row in list(basis.items()):
            c = row[piv]
            if c:
                basis[q] = [(row[j] - c * v[j]) % p for j in range(self.dim)]
        basis[piv] = v
        return True

    def _basis(self, mask):
        basis = {}
        insert = self._insert2 if self.p == 2 else self._insertp
        for i in _bits(mask):
            insert(basis, self._packed[i])
            if len(basis) == self.dim:
                break
        return basis

    def rank(self, mask):
        return len(self._basis(mask))

    def closure(self, mask):
        basis = self._basis(mask)
        if len(basis) == self.dim:
            return (1 << self.n) - 1
        out = mask | self.loops
        if self.p == 2:
            red = self._reduce2
            for i, v in enumerate(self._packed):
                if not (out >> i & 1) and red(basis, v) == 0:
                    out |= 1 << i
        else:
            red = self._reducep
            for i, v in enumerate(self._packed):
                if not (out >> i & 1) and not any(red(basis, v)):
                    out |= 1 << i
        return out

    def flats(self, k):
        """All rank-``k`` flats as bitmasks (unordered).

        Levels of the lattice are built upward once and kept.
        """
        full = (1 << self.n) - 1
        top = self.rank(full)
        if k > top:
            return []
        if k == top:
            return [full]
        if self._levels is None:
            self._levels = [{self.closure(0)}]
        levels = self._levels
        while len(levels) <= k:
            nxt = set()
            for f in levels[-1]:
                rest = full & ~f
                while rest:
                    low = rest & -rest
                    g = self.closure(f | low)
                    nxt.add(g)
                    rest &= ~g
            levels.append(nxt)
        return list(levels[k])


def max_flatfree(n, flats):
    """Largest subset of range(n) containing no mask in ``flats``.

    Include-first depth-first search in index order, so the first optimum
    found is the lexicographically least one.
    """
    by_top = [[] for _ in range(n)]
    for f in flats:
        if f == 0:
            return 0, 0
        by_top[f.bit_length() - 1].append(f)
    best = [-1, 0]

    def go(i, cur, size):
        if size + (n - i) <= best[0]:
            return
        if i == n:
            best[0], best[1] = size, cur
            return
        nxt = cur | (1 << i)
        for f in by_top[i]:
            if f & nxt == f:
                break
        else:
            go(i + 1, nxt, size + 1)
        go(i + 1, cur, size)

    go(0, 0, 0)
    return best[0], best[1]


def free_coloring(n, flats, palette):
    """Lexicographically first coloring of range(n) with no monochromatic
    mask from ``flats``; ``None`` if every coloring has one."""
    by_top = [[] for _ in range(n)]
    for f in flats:
        if f == 0:
            return None
        by_top[f.bit_length() - 1].append(f)
    classes = [0] * palette
    colors = [0] * n

    def go(i, used):
        if i == n:
            return True
        bit = 1 << i
        # colors beyond the first unused one are symmetric to it
        for c in range(min(palette, used + 1)):
            cls = classes[c] | bit
            for f in by_top[i]:
                if f & cls == f:
                    break
            else:
                classes[c] = cls
                colors[i] = c
                if go(i + 1, max(used, c + 1)):
                    return True
                classes[c] ^= bit
        return False

    if go(0, 0):
        return list(colors)
    return None


def flatfree_sets(n, flats, min_size):
    """All flat-free subsets of range(n) with at least ``min_size`` elements."""
    by_top = [[] for _ in range(n)]
    for f in flats:
        if f == 0:
            return []
        by_top[f.bit_length() - 1].append(f)
    out = []

    def go(i, cur, size):
        if size + (n - i) < min_size:
            return
        if i == n:
            out.append(cur)
            return
        nxt = cur | (1 << i)
        for f in by_top[i]:
            if f & nxt == f:
                break
        else:
            go(i + 1, nxt, size + 1)
        go(i + 1, cur, size)

    go(0, 0, 0)
    return out

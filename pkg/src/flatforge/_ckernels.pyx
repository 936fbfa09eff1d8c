# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels (ground sets of at most 64 elements, dimension at most 32).

Mirrors ``flatforge._pykernels`` exactly; masks cross the boundary as
Python ints.
"""

from libc.stdint cimport uint64_t, uint8_t
from libc.string cimport memset, memcpy

cdef enum:
    MAXN = 64
    MAXD = 32

MAX_ELEMENTS = MAXN
MAX_DIM = MAXD


cdef inline int _ctz(uint64_t x) nogil:
    return __builtin_ctzll(x)

cdef extern from *:
    int __builtin_ctzll(unsigned long long) nogil
    int __builtin_popcountll(unsigned long long) nogil


cdef class RankKernel:
    cdef public int p, dim, n
    cdef uint64_t packed[MAXN]
    cdef uint8_t vec[MAXN][MAXD]
    cdef uint8_t inv[16]
    cdef uint64_t _loops
    cdef uint64_t _full
    cdef list _levels

    def __init__(self, int p, int dim, vectors):
        cdef int i, j, c
        if len(vectors) > MAXN or dim > MAXD or p > 13:
            raise ValueError("outside compiled kernel limits")
        self.p = p
        self.dim = dim
        self.n = len(vectors)
        memset(self.inv, 0, sizeof(self.inv))
        for c in range(1, p):
            self.inv[c] = pow(c, p - 2, p)
        self._levels = None
        self._loops = 0
        for i in range(self.n):
            self.packed[i] = 0
            memset(self.vec[i], 0, MAXD)
            v = vectors[i]
            for j in range(dim):
                c = int(v[j]) % p
                self.vec[i][j] = c
                if c:
                    self.packed[i] |= (<uint64_t>1) << j
            if self.packed[i] == 0:
                self._loops |= (<uint64_t>1) << i
        self._full = (<uint64_t>0xFFFFFFFFFFFFFFFF) if self.n == 64 else (((<uint64_t>1) << self.n) - 1)

    @property
    def loops(self):
        return int(self._loops)

    # GF(2): rows[piv] holds a fully reduced row with pivot bit piv
    cdef int _basis2(self, uint64_t mask, uint64_t *rows, uint64_t *pivmask) nogil:
        cdef int r = 0, i, q
        cdef uint64_t v, low, pm = 0, t
        while mask:
            i = _ctz(mask)
            mask &= mask - 1
            v = self.packed[i]
            t = pm
            while t:
                q = _ctz(t)
                t &= t - 1
                if (v >> q) & 1:
                    v ^= rows[q]
            if v == 0:
                continue
            low = v & (~v + 1)
            q = _ctz(low)
            t = pm
            while t:
                i = _ctz(t)
                t &= t - 1
                if (rows[i] >> q) & 1:
                    rows[i] ^= v
            rows[q] = v
            pm |= low
            r += 1
            if r == self.dim:
                break
        pivmask[0] = pm
        return r

    cdef inline bint _in2(self, uint64_t v, uint64_t *rows, uint64_t pm) nogil:
        cdef int q
        while pm:
            q = _ctz(pm)
            pm &= pm - 1
            if (v >> q) & 1:
                v ^= rows[q]
        return v == 0

    # GF(p): rows[piv] is a normalized, fully reduced row
    cdef int _basisp(self, uint64_t mask, uint8_t rows[MAXD][MAXD], uint64_t *pivmask) nogil:
        cdef int r = 0, i, j, q, piv, c, p = self.p, d = self.dim
        cdef uint64_t pm = 0, t
        cdef uint8_t v[MAXD]
        while mask:
            i = _ctz(mask)
            mask &= mask - 1
            memcpy(v, self.vec[i], d)
            t = pm
            while t:
                q = _ctz(t)
                t &= t - 1
                c = v[q]
                if c:
                    for j in range(d):
                        if rows[q][j]:
                            v[j] = (v[j] + (p - c) * rows[q][j]) % p
            piv = -1
            for j in range(d):
                if v[j]:
                    piv = j
                    break
            if piv < 0:
                continue
            c = self.inv[v[piv]]
            for j in range(d):
                v[j] = (v[j] * c) % p
            t = pm
            while t:
                q = _ctz(t)
                t &= t - 1
                c = rows[q][piv]
                if c:
                    for j in range(d):
                        rows[q][j] = (rows[q][j] + (p - c) * v[j]) % p
            memcpy(rows[piv], v, d)
            pm |= (<uint64_t>1) << piv
            r += 1
            if r == d:
                break
        pivmask[0] = pm
        return r

    cdef bint _inp(self, int i, uint8_t rows[MAXD][MAXD], uint64_t pm) nogil:
        cdef int j, q, c, p = self.p, d = self.dim
        cdef uint8_t v[MAXD]
        memcpy(v, self.vec[i], d)
        while pm:
            q = _ctz(pm)
            pm &= pm - 1
            c = v[q]
            if c:
                for j in range(d):
                    if rows[q][j]:
                        v[j] = (v[j] + (p - c) * rows[q][j]) % p
        for j in range(d):
            if v[j]:
                return False
        return True

    cdef int _rank(self, uint64_t mask) nogil:
        cdef uint64_t rows2[MAXD]
        cdef uint8_t rowsp[MAXD][MAXD]
        cdef uint64_t pm
        if self.p == 2:
            return self._basis2(mask, rows2, &pm)
        return self._basisp(mask, rowsp, &pm)

    cdef uint64_t _closure(self, uint64_t mask) nogil:
        cdef uint64_t rows2[MAXD]
        cdef uint8_t rowsp[MAXD][MAXD]
        cdef uint64_t pm, out, rest
        cdef int r, i
        if self.p == 2:
            r = self._basis2(mask, rows2, &pm)
        else:
            r = self._basisp(mask, rowsp, &pm)
        if r == self.dim:
            return self._full
        out = mask | self._loops
        rest = self._full & ~out
        while rest:
            i = _ctz(rest)
            rest &= rest - 1
            if self.p == 2:
                if self._in2(self.packed[i], rows2, pm):
                    out |= (<uint64_t>1) << i
            elif self._inp(i, rowsp, pm):
                out |= (<uint64_t>1) << i
        return out

    def rank(self, mask):
        return self._rank(<uint64_t>mask)

    def closure(self, mask):
        return int(self._closure(<uint64_t>mask))

    def flats(self, int k):
        """All rank-``k`` flats as bitmasks (unordered); levels are cached."""
        cdef set nxt
        cdef uint64_t f, rest, low, g
        cdef int top = self._rank(self._full)
        if k > top:
            return []
        if k == top:
            return [int(self._full)]
        if self._levels is None:
            self._levels = [set([int(self._closure(0))])]
        while len(self._levels) <= k:
            nxt = set()
            for fo in self._levels[len(self._levels) - 1]:
                f = fo
                rest = self._full & ~f
                while rest:
                    low = rest & (~rest + 1)
                    g = self._closure(f | low)
                    nxt.add(g)
                    rest &= ~g
            self._levels.append(nxt)
        return [int(x) for x in self._levels[k]]


cdef class _Search:
    cdef int n
    cdef uint64_t *tops[MAXN]
    cdef int ntop[MAXN]
    cdef list _keep
    cdef int best
    cdef uint64_t best_mask
    cdef bint has_empty

    def __init__(self, int n, flats):
        import array
        cdef int i
        cdef uint64_t f
        if n > MAXN:
            raise ValueError("outside compiled kernel limits")
        self.n = n
        self.has_empty = False
        groups = [[] for _ in range(n)]
        for fo in flats:
            f = fo
            if f == 0:
                self.has_empty = True
                continue
            groups[63 - __builtin_clzll(f)].append(fo)
        self._keep = []
        for i in range(n):
            arr = array.array("Q", groups[i] or [0])
            self._keep.append(arr)
            self.ntop[i] = len(groups[i])
            self.tops[i] = <uint64_t *> (<size_t> arr.buffer_info()[0])

    cdef inline bint _ok(self, int i, uint64_t cls) nogil:
        cdef int j
        cdef uint64_t f
        for j in range(self.ntop[i]):
            f = self.tops[i][j]
            if f & cls == f:
                return False
        return True

    cdef void _maxff(self, int i, uint64_t cur, int size) nogil:
        cdef uint64_t nxt
        if size + (self.n - i) <= self.best:
            return
        if i == self.n:
            self.best = size
            self.best_mask = cur
            return
        nxt = cur | ((<uint64_t>1) << i)
        if self._ok(i, nxt):
            self._maxff(i + 1, nxt, size + 1)
        self._maxff(i + 1, cur, size)

    cdef bint _color(self, int i, int used, int palette, uint64_t *classes, int *colors) nogil:
        cdef int c, lim
        cdef uint64_t bit, cls
        if i == self.n:
            return True
        bit = (<uint64_t>1) << i
        lim = used + 1 if used + 1 < palette else palette
        for c in range(lim):
            cls = classes[c] | bit
            if self._ok(i, cls):
                classes[c] = cls
                colors[i] = c
                if self._color(i + 1, used if used > c + 1 else c + 1, palette, classes, colors):
                    return True
                classes[c] ^= bit
        return False

    cdef void _sets(self, int i, uint64_t cur, int size, int min_size, list out):
        cdef uint64_t nxt
        if size + (self.n - i) < min_size:
            return
        if i == self.n:
            out.append(int(cur))
            return
        nxt = cur | ((<uint64_t>1) << i)
        if self._ok(i, nxt):
            self._sets(i + 1, nxt, size + 1, min_size, out)
        self._sets(i + 1, cur, size, min_size, out)


cdef extern from *:
    int __builtin_clzll(unsigned long long) nogil


def max_flatfree(int n, flats):
    """Largest subset of range(n) containing no mask in ``flats``."""
    s = _Search(n, flats)
    if s.has_empty:
        return 0, 0
    s.best = -1
    s.best_mask = 0
    s._maxff(0, 0, 0)
    return s.best, int(s.best_mask)


def free_coloring(int n, flats, int palette):
    """Lexicographically first coloring with no monochromatic flat, or None."""
    cdef uint64_t classes[MAXN]
    cdef int colors[MAXN]
    cdef bint ok
    s = _Search(n, flats)
    if s.has_empty or palette < 1:
        return None
    if palette > MAXN:
        palette = MAXN
    memset(classes, 0, sizeof(classes))
    memset(colors, 0, sizeof(colors))
    ok = s._color(0, 0, palette, classes, colors)
    if not ok:
        return None
    return [colors[i] for i in range(n)]


def flatfree_sets(int n, flats, int min_size):
    """All flat-free subsets of range(n) with at least ``min_size`` elements."""
    s = _Search(n, flats)
    out = []
    if s.has_empty:
        return out
    s._sets(0, 0, 0, min_size, out)
    return out

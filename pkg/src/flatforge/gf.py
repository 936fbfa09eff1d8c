"""Exact arithmetic and linear algebra over GF(p) for small primes."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Sequence

from .errors import UsageError

SUPPORTED_PRIMES = (2, 3, 5, 7, 11, 13)


@dataclass(frozen=True)
class FieldPrime:
    p: int
    add: tuple = field(repr=False, compare=False, default=())
    mul: tuple = field(repr=False, compare=False, default=())
    inv: tuple = field(repr=False, compare=False, default=())

    def __post_init__(self):
        p = self.p
        if p not in SUPPORTED_PRIMES:
            raise UsageError(f"unsupported prime {p}; expected one of {SUPPORTED_PRIMES}")
        object.__setattr__(self, "add", tuple(tuple((a + b) % p for b in range(p)) for a in range(p)))
        object.__setattr__(self, "mul", tuple(tuple((a * b) % p for b in range(p)) for a in range(p)))
        object.__setattr__(self, "inv", (0,) + tuple(pow(a, p - 2, p) for a in range(1, p)))


@lru_cache(maxsize=None)
def field_of(p: int) -> FieldPrime:
    return FieldPrime(p)


@dataclass(frozen=True)
class VecGF:
    p: int
    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(int(c) % self.p for c in self.coords))

    def __len__(self):
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)


@dataclass(frozen=True)
class MatGF:
    """Dense matrix over GF(p); ``data`` is a tuple of row tuples."""

    p: int
    data: tuple

    def __post_init__(self):
        rows = tuple(tuple(int(c) % self.p for c in r) for r in self.data)
        if rows and len({len(r) for r in rows}) != 1:
            raise UsageError("ragged matrix rows")
        object.__setattr__(self, "data", rows)

    @property
    def rows(self) -> int:
        return len(self.data)

    @property
    def cols(self) -> int:
        return len(self.data[0]) if self.data else 0

    @classmethod
    def from_columns(cls, p: int, columns: Sequence[Sequence[int]], dim: int | None = None) -> "MatGF":
        if dim is None:
            dim = len(columns[0]) if columns else 0
        return cls(p, tuple(tuple(col[i] for col in columns) for i in range(dim)))

    def columns(self) -> list[tuple]:
        return [tuple(r[j] for r in self.data) for j in range(self.cols)]

    @classmethod
    def identity(cls, p: int, n: int) -> "MatGF":
        return cls(p, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))


@dataclass(frozen=True)
class RrefResult:
    matrix: MatGF
    pivots: tuple
    rank: int


def _rref_gf2(m: MatGF) -> RrefResult:
    ncols = m.cols
    # column j -> bit j
    rows = [sum(1 << j for j, c in enumerate(r) if c) for r in m.data]
    pivots = []
    top = 0
    for col in range(ncols):
        bit = 1 << col
        for i in range(top, len(rows)):
            if rows[i] & bit:
                break
        else:
            continue
        rows[top], rows[i] = rows[i], rows[top]
        for i in range(len(rows)):
            if i != top and rows[i] & bit:
                rows[i] ^= rows[top]
        pivots.append(col)
        top += 1
        if top == len(rows):
            break
    data = tuple(tuple((r >> j) & 1 for j in range(ncols)) for r in rows)
    return RrefResult(MatGF(2, data), tuple(pivots), len(pivots))


def rref(m: MatGF) -> RrefResult:
    """Reduced row echelon form with pivot columns and rank."""
    if m.p == 2:
        return _rref_gf2(m)
    p = m.p
    inv = field_of(p).inv
    rows = [list(r) for r in m.data]
    pivots = []
    top = 0
    for col in range(m.cols):
        piv = next((i for i in range(top, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[top], rows[piv] = rows[piv], rows[top]
        s = inv[rows[top][col]]
        rows[top] = [(c * s) % p for c in rows[top]]
        for i in range(len(rows)):
            c = rows[i][col]
            if i != top and c:
                rows[i] = [(a - c * b) % p for a, b in zip(rows[i], rows[top])]
        pivots.append(col)
        top += 1
        if top == len(rows):
            break
    return RrefResult(MatGF(p, tuple(map(tuple, rows))), tuple(pivots), len(pivots))


def rank(m: MatGF) -> int:
    return rref(m).rank


def in_span(basis_mat: MatGF, v: VecGF | Sequence[int]) -> tuple | None:
    """Coefficients ``c`` with ``basis_mat @ c == v`` or ``None`` when ``v``
    is outside the column span."""
    coords = tuple(v.coords) if isinstance(v, VecGF) else tuple(v)
    if isinstance(v, VecGF) and v.p != basis_mat.p:
        raise UsageError("field mismatch")
    if basis_mat.rows != len(coords):
        raise UsageError(f"dimension mismatch: basis has {basis_mat.rows} rows, vector has {len(coords)}")
    p = basis_mat.p
    k = basis_mat.cols
    aug = MatGF(p, tuple(row + (coords[i],) for i, row in enumerate(basis_mat.data)))
    red = rref(aug)
    if k in red.pivots:
        return None
    coef = [0] * k
    for r, col in enumerate(red.pivots):
        coef[col] = red.matrix.data[r][k]
    return tuple(coef)


def canonical_point(v: VecGF | Sequence[int], p: int | None = None) -> tuple:
    """Scale ``v`` so its first nonzero coordinate is 1."""
    if isinstance(v, VecGF):
        p, coords = v.p, v.coords
    else:
        if p is None:
            raise UsageError("prime required for a plain sequence")
        coords = tuple(int(c) % p for c in v)
    for c in coords:
        if c:
            s = field_of(p).inv[c]
            return tuple((x * s) % p for x in coords)
    raise UsageError("zero vector has no canonical point")


def canonical_vectors(dim: int, p: int) -> Iterator[tuple]:
    """Canonical representatives of the points of PG(dim-1, p).

    Order: increasing value of sum(c_i * p**i), so coordinate 0 is least
    significant; for p = 2 this is the order of the binary integers.
    """
    for x in range(1, p**dim):
        v = []
        for _ in range(dim):
            x, d = divmod(x, p)
            v.append(d)
        for c in v:
            if c:
                break
        if c == 1:
            yield tuple(v)


def hyperplanes_of(dim: int, p: int) -> Iterator[tuple]:
    """One canonical nonzero functional per hyperplane of GF(p)^dim."""
    if not 1 <= dim <= 16:
        raise UsageError(f"dimension {dim} outside supported range 1..16")
    field_of(p)
    return canonical_vectors(dim, p)


def dot(a: Sequence[int], b: Sequence[int], p: int) -> int:
    return sum(x * y for x, y in zip(a, b)) % p


def mat_vec(m: Sequence[Sequence[int]], v: Sequence[int], p: int) -> tuple:
    return tuple(sum(a * b for a, b in zip(row, v)) % p for row in m)


def mat_mul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]], p: int) -> tuple:
    bt = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) % p for col in bt) for row in a)


def mat_inverse(m: Sequence[Sequence[int]], p: int) -> tuple | None:
    """Inverse of a square matrix, or ``None`` when singular."""
    n = len(m)
    aug = MatGF(p, tuple(tuple(row) + tuple(int(i == j) for j in range(n)) for i, row in enumerate(m)))
    red = rref(aug)
    if red.pivots[:n] != tuple(range(n)) or red.rank < n:
        return None
    return tuple(tuple(r[n:]) for r in red.matrix.data)


def complete_basis(vectors: Sequence[Sequence[int]], dim: int, p: int) -> list[tuple]:
    """Extend independent ``vectors`` by unit vectors to a basis of GF(p)^dim."""
    out = [tuple(v) for v in vectors]
    for i in range(dim):
        e = tuple(int(i == j) for j in range(dim))
        trial = MatGF.from_columns(p, out + [e], dim)
        if rank(trial) == len(out) + 1:
            out.append(e)
        if len(out) == dim:
            break
    return out

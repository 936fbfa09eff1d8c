"""Named geometries used as fixtures.

Spec strings: ``pg:n,p`` ``ag:n,p`` ``reid:p`` ``free:r,p``
``sum:<spec>+<spec>[+...]`` ``random:r,n,p,seed``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import UsageError
from .gf import SUPPORTED_PRIMES, canonical_vectors
from .matroid import Matroid


@dataclass(frozen=True)
class CatalogSpec:
    name: str
    params: tuple

    def __str__(self):
        if self.name == "sum":
            return "sum:" + "+".join(str(s) for s in self.params)
        return f"{self.name}:" + ",".join(str(x) for x in self.params)


_ARITY = {"pg": 2, "ag": 2, "reid": 1, "free": 2, "random": 4}


def parse_spec(text: str) -> CatalogSpec:
    text = text.strip()
    name, sep, rest = text.partition(":")
    if not sep:
        raise UsageError(f"catalog spec {text!r} lacks ':'")
    if name == "sum":
        parts = [parse_spec(s) for s in _split_sum(rest)]
        if len(parts) < 2:
            raise UsageError("sum needs at least two summands")
        return CatalogSpec("sum", tuple(parts))
    if name not in _ARITY:
        raise UsageError(f"unknown catalog family {name!r}")
    try:
        params = tuple(int(x) for x in rest.split(","))
    except ValueError:
        raise UsageError(f"non-integer parameter in {text!r}") from None
    if len(params) != _ARITY[name]:
        raise UsageError(f"{name} takes {_ARITY[name]} parameters")
    return CatalogSpec(name, params)


def _split_sum(rest: str) -> list[str]:
    # summands are themselves non-sum specs, so '+' always separates
    return [s for s in rest.split("+") if s]


def _prime(p: int) -> int:
    if p not in SUPPORTED_PRIMES:
        raise UsageError(f"unsupported prime {p}")
    return p


def pg(n: int, p: int) -> Matroid:
    """PG(n, p): every point of GF(p)^(n+1)."""
    _prime(p)
    if not 0 <= n <= 15:
        raise UsageError("pg dimension out of range")
    return Matroid(p, list(canonical_vectors(n + 1, p)), dim=n + 1)


def ag(n: int, p: int) -> Matroid:
    """AG(n, p): points of GF(p)^(n+1) with first coordinate 1."""
    _prime(p)
    if not 0 <= n <= 15:
        raise UsageError("ag dimension out of range")
    return Matroid(p, [v for v in canonical_vectors(n + 1, p) if v[0] == 1], dim=n + 1)


def reid(p: int) -> Matroid:
    """Three concurrent full lines of PG(2, p) through the apex (0,0,1).

    The lines are spanned by the apex together with (1,0,0), (0,1,0) and
    (1,1,0); there are 3p + 1 elements.
    """
    _prime(p)
    dirs = [(1, 0, 0), (0, 1, 0), (1, 1, 0)]
    vecs = []
    for v in canonical_vectors(3, p):
        if v == (0, 0, 1):
            vecs.append(v)
            continue
        for d in dirs:
            # v in span(d, apex) iff its first two coordinates are parallel to d
            if (v[0] * d[1] - v[1] * d[0]) % p == 0 and (v[0], v[1]) != (0, 0):
                vecs.append(v)
                break
    return Matroid(p, vecs, dim=3)


def free(r: int, p: int) -> Matroid:
    _prime(p)
    if not 0 <= r <= 16:
        raise UsageError("free rank out of range")
    return Matroid(p, [tuple(int(i == j) for j in range(r)) for i in range(r)], dim=r)


def direct_sum(*parts: Matroid) -> Matroid:
    if not parts:
        raise UsageError("empty direct sum")
    p = parts[0].p
    if any(m.p != p for m in parts):
        raise UsageError("direct sum of matroids over different fields")
    dim = sum(m.dim for m in parts)
    vecs, labels = [], []
    off = 0
    for idx, m in enumerate(parts):
        for v, lab in zip(m.vectors, m.labels):
            vecs.append((0,) * off + v + (0,) * (dim - off - m.dim))
            labels.append(f"{idx}.{lab}")
        off += m.dim
    return Matroid(p, vecs, labels, dim=dim)


def random_matroid(r: int, n: int, p: int, seed: int) -> Matroid:
    """``n`` distinct points of PG(r-1, p) spanning rank ``r``, seeded."""
    _prime(p)
    if r < 1 or r > 8:
        raise UsageError("random rank out of range 1..8")
    pts = list(canonical_vectors(r, p))
    if not r <= n <= len(pts):
        raise UsageError(f"need {r} <= n <= {len(pts)}")
    rng = random.Random(seed)
    for _ in range(1000):
        chosen = sorted(rng.sample(range(len(pts)), n))
        M = Matroid(p, [pts[i] for i in chosen], dim=r)
        if M.rank == r:
            return M
    raise UsageError("could not draw a spanning point set")  # pragma: no cover


def build_catalog(spec: CatalogSpec | str) -> Matroid:
    if isinstance(spec, str):
        spec = parse_spec(spec)
    name, a = spec.name, spec.params
    if name == "pg":
        return pg(*a)
    if name == "ag":
        return ag(*a)
    if name == "reid":
        return reid(*a)
    if name == "free":
        return free(*a)
    if name == "random":
        return random_matroid(*a)
    if name == "sum":
        return direct_sum(*(build_catalog(s) for s in a))
    raise UsageError(f"unknown catalog family {name!r}")  # pragma: no cover

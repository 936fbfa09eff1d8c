"""MatroidText format and certificate JSON envelopes.

MatroidText::

    p r n
    <r rows of n base-p digits, no separators>
    [optional line of n whitespace-separated labels]

Digits above 9 are written ``a``, ``b``, ``c`` (for p = 11, 13).
"""

from __future__ import annotations

import hashlib
import json
from typing import Any

from .errors import UsageError
from .gf import SUPPORTED_PRIMES
from .matroid import Matroid

SCHEMA_VERSION = 1
_DIGITS = "0123456789abc"


class MatroidParseError(UsageError):
    def __init__(self, message, line=None, column=None):
        loc = f"line {line}" + (f", column {column}" if column is not None else "") if line else ""
        super().__init__(f"{loc}: {message}" if loc else message)
        self.line = line
        self.column = column


def emit_matroid(M: Matroid) -> str:
    lines = [f"{M.p} {M.dim} {M.n}"]
    for i in range(M.dim):
        lines.append("".join(_DIGITS[v[i]] for v in M.vectors))
    if M.labels != tuple(str(i) for i in range(M.n)):
        lines.append(" ".join(M.labels))
    return "\n".join(lines) + "\n"


def parse_matroid(text: str) -> Matroid:
    raw = text.replace("\r\n", "\n").replace("\r", "\n").split("\n")
    while raw and not raw[-1].strip():
        raw.pop()
    if not raw:
        raise MatroidParseError("empty input", 1)
    head = raw[0].split()
    if len(head) != 3:
        raise MatroidParseError("header must be 'p r n'", 1)
    try:
        p, r, n = (int(x) for x in head)
    except ValueError:
        raise MatroidParseError("non-integer header field", 1) from None
    if p not in SUPPORTED_PRIMES:
        raise MatroidParseError(f"unsupported prime {p}", 1)
    if r < 0 or n < 0:
        raise MatroidParseError("negative dimension or size", 1)
    if n == 0:
        raw += [""] * max(0, 1 + r - len(raw))
    if len(raw) < 1 + r:
        raise MatroidParseError(f"expected {r} matrix rows, found {len(raw) - 1}", len(raw) + 1)
    rows = []
    for i in range(r):
        lineno = i + 2
        row = raw[1 + i].rstrip()
        if len(row) != n:
            raise MatroidParseError(f"row has {len(row)} digits, expected {n}", lineno,
                                    min(len(row), n) + 1)
        vals = []
        for j, ch in enumerate(row):
            d = _DIGITS.find(ch.lower())
            if d < 0:
                raise MatroidParseError(f"invalid character {ch!r}", lineno, j + 1)
            if d >= p:
                raise MatroidParseError(f"digit {ch!r} is not below p={p}", lineno, j + 1)
            vals.append(d)
        rows.append(vals)
    labels = None
    rest = [x for x in raw[1 + r:] if x.strip()]
    if len(rest) > 1:
        raise MatroidParseError("unexpected trailing lines", r + 3)
    if rest:
        labels = rest[0].split()
        if len(labels) != n:
            raise MatroidParseError(f"label line has {len(labels)} labels, expected {n}", r + 2)
        if len(set(labels)) != n:
            raise MatroidParseError("duplicate labels", r + 2)
    vectors = [tuple(rows[i][j] for i in range(r)) for j in range(n)]
    return Matroid(p, vectors, labels, dim=r)


def matroid_digest(M: Matroid) -> str:
    return "sha256:" + hashlib.sha256(emit_matroid(M).encode()).hexdigest()


def envelope(kind: str, M: Matroid, claims: dict, notes: dict | None = None) -> dict:
    """Certificate JSON object binding ``claims`` to the exact matroid."""
    return {
        "schema": SCHEMA_VERSION,
        "kind": kind,
        "matroid_hash": matroid_digest(M),
        "claims": claims,
        "notes": notes or {},
    }


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def loads(text: str) -> Any:
    return json.loads(text)

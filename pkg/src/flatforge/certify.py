"""Independent re-checking of certificates.

The checks here use linear algebra and the matroid primitives only. None
of the search procedures that produced a certificate is re-run; the one
exception is a negative claim ("no such flat exists"), which can only be
confirmed by enumerating the flats it quantifies over.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import UsageError
from .gf import (MatGF, canonical_point, canonical_vectors, complete_basis, dot, mat_inverse,
                 mat_vec, rank)
from .io import SCHEMA_VERSION, matroid_digest
from .matroid import Matroid, indices, lex_key, mask_of, popcount

TAG_NAMES = ("AffineGeometry", "Independent", "Neither", "ProjectiveGeometry")
_UNAVOIDABLE = {"AffineGeometry", "Independent", "ProjectiveGeometry"}
_ENVELOPE_KEYS = {"schema", "kind", "matroid_hash", "claims", "notes"}


class Invalid(Exception):
    pass


@dataclass(frozen=True)
class Validation:
    ok: bool
    detail: str = ""

    def __bool__(self):
        return self.ok


def _same(a, b) -> bool:
    """Equality of JSON values that also distinguishes bool, int and float."""
    if type(a) is not type(b):
        return False
    if type(a) is list:
        return len(a) == len(b) and all(map(_same, a, b))
    if type(a) is dict:
        return a.keys() == b.keys() and all(_same(a[k], b[k]) for k in a)
    return a == b


def _need(cond, msg):
    if not cond:
        raise Invalid(msg)


# ---------------------------------------------------------------- strict field readers


def _int(v, what, lo=None, hi=None) -> int:
    _need(type(v) is int, f"{what}: expected an integer")
    _need(lo is None or v >= lo, f"{what}: {v} below {lo}")
    _need(hi is None or v <= hi, f"{what}: {v} above {hi}")
    return v


def _bool(v, what) -> bool:
    _need(type(v) is bool, f"{what}: expected a boolean")
    return v


def _subset(M: Matroid, v, what) -> int:
    """Strictly increasing list of element indices, as a mask."""
    _need(type(v) is list, f"{what}: expected a list of elements")
    for x in v:
        _int(x, what, 0, M.n - 1)
    _need(all(a < b for a, b in zip(v, v[1:])), f"{what}: elements not strictly increasing")
    return mask_of(v)


def _vector(v, what, p, length) -> tuple:
    _need(type(v) is list and len(v) == length, f"{what}: expected {length} coordinates")
    for x in v:
        _int(x, what, 0, p - 1)
    return tuple(v)


def _keys(d, required, optional=(), what="claims"):
    _need(type(d) is dict, f"{what}: expected an object")
    keys = set(d)
    missing = set(required) - keys
    extra = keys - set(required) - set(optional)
    _need(not missing, f"{what}: missing {sorted(missing)}")
    _need(not extra, f"{what}: unexpected {sorted(extra)}")


# ---------------------------------------------------------------- geometric checks


def greedy_basis(M: Matroid, S: int) -> list[int]:
    basis, cur = [], 0
    for i in indices(S):
        if M.rank_of(cur | 1 << i) > len(basis):
            basis.append(i)
            cur |= 1 << i
    return basis


def _flat(M: Matroid, S: int, r: int, what: str):
    _need(M.closure(S) == S, f"{what}: not a flat")
    _need(M.rank_of(S) == r, f"{what}: rank {M.rank_of(S)}, expected {r}")


def _is_simple_set(M: Matroid, S: int) -> bool:
    pts = [M.points_index[i] for i in indices(S)]
    return None not in pts and len(set(pts)) == len(pts)


def affine_functional(M: Matroid, S: int) -> tuple | None:
    """Canonical ambient functional certifying M|S = AG(r-1, p), else None.

    M|S is affine exactly when the points of span(S) missing from S form a
    hyperplane of span(S). The functional is the one cutting that
    hyperplane, extended by zero on the unit vectors completing the greedy
    basis of S.
    """
    p = M.p
    r = M.rank_of(S)
    if r == 0 or not _is_simple_set(M, S) or popcount(S) != p ** (r - 1):
        return None
    basis = greedy_basis(M, S)
    cols = complete_basis([M.vectors[b] for b in basis], M.dim, p)
    inv = mat_inverse(MatGF.from_columns(p, cols, M.dim).data, p)
    present = {canonical_point(mat_vec(inv[:r], M.vectors[x], p), p) for x in indices(S)}
    missing = [c for c in canonical_vectors(r, p) if c not in present]
    if len(missing) != (p ** (r - 1) - 1) // (p - 1):
        return None
    if r == 1:
        psi = (1,)
    else:
        if rank(MatGF.from_columns(p, missing, r)) != r - 1:
            return None
        psi = next(c for c in canonical_vectors(r, p) if all(dot(c, m, p) == 0 for m in missing))
    phi = tuple(sum(psi[i] * inv[i][j] for i in range(r)) % p for j in range(M.dim))
    return canonical_point(phi, p)


def flat_tags(M: Matroid, F: int) -> tuple[list[str], tuple | None]:
    p = M.p
    r = M.rank_of(F)
    size = popcount(F)
    tags = set()
    if size == r:
        tags.add("Independent")
    if _is_simple_set(M, F) and size == (p ** r - 1) // (p - 1):
        tags.add("ProjectiveGeometry")
    phi = affine_functional(M, F)
    if phi is not None:
        tags.add("AffineGeometry")
    return sorted(tags or {"Neither"}), phi


def _check_flat_record(M, rec, k, what):
    _keys(rec, ("elements", "tags", "functional"), what=what)
    F = _subset(M, rec["elements"], f"{what}.elements")
    _flat(M, F, k, f"{what}.elements")
    tags, phi = flat_tags(M, F)
    _need(_same(rec["tags"], tags), f"{what}.tags: expected {tags}")
    if phi is None:
        _need(rec["functional"] is None, f"{what}.functional: present without an affine tag")
    else:
        _need(_same(rec["functional"], list(phi)), f"{what}.functional: expected {list(phi)}")
    return F, tags


def _components(M: Matroid, F: int) -> list[int]:
    keep = indices(F)
    return [mask_of(keep[i] for i in indices(c)) for c in M.restrict(F).connected_components()]


def _two_point_lines(M: Matroid) -> int | None:
    for a in range(M.n):
        for b in range(a + 1, M.n):
            L = M.closure((1 << a) | (1 << b))
            if popcount(L) == 2:
                return L
    return None


# ---------------------------------------------------------------- per-kind validators


def _v_unavoidable(M, c):
    _keys(c, ("k", "found"), ("elements", "tags", "functional", "flats"))
    k = _int(c["k"], "k", 1)
    _need(M.is_simple(), "matroid is not simple")
    if _bool(c["found"], "found"):
        _keys(c, ("k", "found", "elements", "tags", "functional"))
        _, tags = _check_flat_record(M, {x: c[x] for x in ("elements", "tags", "functional")}, k, "flat")
        _need(set(tags) & _UNAVOIDABLE, "flat is neither independent, affine nor projective")
    else:
        # a negative claim lists every rank-k flat with its tags
        _keys(c, ("k", "found", "flats"))
        _need(type(c["flats"]) is list, "flats: expected a list")
        got = []
        for i, rec in enumerate(c["flats"]):
            _keys(rec, ("elements", "tags"), what=f"flats[{i}]")
            F = _subset(M, rec["elements"], f"flats[{i}].elements")
            _flat(M, F, k, f"flats[{i}].elements")
            tags, _ = flat_tags(M, F)
            _need(_same(rec["tags"], tags), f"flats[{i}].tags: expected {tags}")
            _need(not set(tags) & _UNAVOIDABLE, f"found=false but {indices(F)} is {tags}")
            got.append(F)
        expected = sorted(M.kernel.flats(k), key=lex_key) if k <= M.rank else []
        _need(got == expected, f"flats: expected all {len(expected)} rank-{k} flats in order")


def _v_atlas(M, c):
    _keys(c, ("k", "flats"))
    k = _int(c["k"], "k", 0)
    _need(type(c["flats"]) is list, "flats: expected a list")
    got = [_check_flat_record(M, rec, k, f"flats[{i}]")[0] for i, rec in enumerate(c["flats"])]
    expected = sorted(M.kernel.flats(k), key=lex_key) if k <= M.rank else []
    _need(got == expected, f"flats: expected all {len(expected)} rank-{k} flats in order")


def _copunctual(M, c):
    e = _int(c["apex"], "apex", 0, M.n - 1)
    _need(type(c["lines"]) is list and len(c["lines"]) == 3, "lines: expected three lines")
    L = [_subset(M, x, f"lines[{i}]") for i, x in enumerate(c["lines"])]
    _need(M.rank == 3 and M.is_simple(), "matroid is not a simple rank-3 matroid")
    _need(L[0] | L[1] | L[2] == M.full, "lines do not cover the ground set")
    for i, x in enumerate(L):
        _flat(M, x, 2, f"lines[{i}]")
    for i in range(3):
        for j in range(i + 1, 3):
            _need(L[i] & L[j] == 1 << e, f"lines {i} and {j} do not meet exactly at the apex")
    _need(_same(c["sizes"], [popcount(x) for x in L]), "sizes: wrong cardinality")
    return e, L


def _v_reid(M, c):
    _keys(c, ("apex", "lines", "two_point_line", "a", "b", "edges", "cycles", "half_lengths",
              "sizes", "divisible"))
    e, L = _copunctual(M, c)
    if c["two_point_line"] is not None:
        T = _subset(M, c["two_point_line"], "two_point_line")
        _flat(M, T, 2, "two_point_line")
        _need(popcount(T) == 2, "two_point_line: wrong cardinality")
        _need(c["a"] is None and c["b"] is None and _same(c["edges"], []) and _same(c["cycles"], [])
              and _same(c["half_lengths"], []) and c["divisible"] is None,
              "short-circuit certificate carries graph data")
        return
    _need(_two_point_lines(M) is None, "a two-point line exists")
    apex = 1 << e
    left, mid, right = (indices(x & ~apex) for x in L)
    a, b = mid[0], mid[1]
    _need(_same(c["a"], a) and _same(c["b"], b), f"pair: expected the first two points {a}, {b}")
    edges, adj = [], {}
    for x in left:
        for w in (a, b):
            hit = [y for y in right if M.rank_of((1 << x) | (1 << w) | (1 << y)) == 2]
            _need(len(hit) == 1, f"line through {x},{w} meets the third line in {hit}")
            edges.append([x, hit[0], w])
            adj[("L", x, w)] = hit[0]
            adj[("R", hit[0], w)] = x
    _need(_same(c["edges"], edges), "edges do not match the triangles")
    _need(type(c["cycles"]) is list, "cycles: expected a list")
    seen = []
    for cyc in c["cycles"]:
        _need(type(cyc) is list and len(cyc) >= 2 and len(cyc) % 2 == 0, "cycle: malformed")
        for x in cyc:
            _int(x, "cycle", 0, M.n - 1)
        for i in range(0, len(cyc), 2):
            x, y = cyc[i], cyc[i + 1]
            nxt = cyc[(i + 2) % len(cyc)]
            _need(adj.get(("L", x, a)) == y, f"cycle: {x}-{y} is not an edge via {a}")
            _need(adj.get(("R", y, b)) == nxt, f"cycle: {y}-{nxt} is not an edge via {b}")
        seen.extend(cyc)
    _need(sorted(seen) == sorted(left + right), "cycles do not partition the graph's vertices")
    _need(c["cycles"] == sorted(c["cycles"], key=lambda cy: left.index(cy[0])) and
          all(cy[0] == min(cy[0::2], key=left.index) for cy in c["cycles"]), "cycles not in canonical order")
    halves = [len(cy) // 2 for cy in c["cycles"]]
    _need(_same(c["half_lengths"], halves), "half_lengths do not match the cycles")
    p = M.p
    div = all(h % p == 0 for h in halves) and (popcount(L[0]) - 1) % p == 0
    _need(c["divisible"] is div, f"divisible: expected {div}")


def _v_reid1(M, c):
    _keys(c, ("apex", "lines", "two_point_line", "sizes", "holds"))
    _copunctual(M, c)
    holds = _bool(c["holds"], "holds")
    if c["two_point_line"] is not None:
        T = _subset(M, c["two_point_line"], "two_point_line")
        _flat(M, T, 2, "two_point_line")
        _need(popcount(T) == 2, "two_point_line: wrong cardinality")
        _need(holds, "holds must be true when a two-point line exists")
    else:
        _need(_two_point_lines(M) is None, "a two-point line exists")
        _need(holds is all(s == M.p + 1 for s in c["sizes"]), "holds: wrong verdict")


def _v_reid2(M, c):
    _keys(c, ("element", "hypotheses", "m", "holds", "line_sizes"))
    e = _int(c["element"], "element", 0, M.n - 1)
    _need(not M.loops >> e & 1, "element is a loop")
    si, _ = M.contract(1 << e).simplify()
    m = si.n
    hyp = {
        "simple": M.is_simple(),
        "si_contraction_connected": si.is_connected() and m > 0,
        "m_at_least_3": m >= 3,
        "not_coloop": M.kernel.rank(M.full & ~(1 << e)) == M.rank,
        "no_small_disjoint_hyperplane": not any(
            not H >> e & 1 and M.point_count(H) < m for H in M.kernel.flats(M.rank - 1)),
    }
    _need(_same(c["hypotheses"], hyp), f"hypotheses: expected {hyp}")
    _need(_same(c["m"], m), f"m: expected {m}")
    sizes = [M.point_count(L) for L in M.lines_through(e)]
    _need(_same(c["line_sizes"], sizes), "line_sizes: wrong cardinality")
    holds = all(s == M.p + 1 for s in sizes) if all(hyp.values()) else None
    _need(c["holds"] is holds, f"holds: expected {holds}")


def _params(M, c):
    _keys(c["params"], ("p", "k", "t", "n"), what="params")
    pr = c["params"]
    _need(_int(pr["p"], "params.p") == M.p, "params.p differs from the matroid's field")
    k = _int(pr["k"], "params.k", 1)
    t = _int(pr["t"], "params.t", 1)
    n = _int(pr["n"], "params.n", t)
    return k, t, n


def _disconnected(M, c, t):
    W = _subset(M, c["witness"], "witness")
    _flat(M, W, t, "witness")
    _need(type(c["components"]) is list, "components: expected a list")
    comps = [_subset(M, x, "components") for x in c["components"]]
    _need(len(comps) >= 2, "witness is connected")
    acc = 0
    for x in comps:
        _need(x and not acc & x, "components overlap")
        acc |= x
    _need(acc == W & ~M.loops, "components do not partition the witness")
    _need(sum(M.rank_of(x) for x in comps) == M.rank_of(W), "components: rank is not additive")
    _need(comps == _components(M, W), "components are not the connected components")


def _v_trichotomy(M, c):
    branch = c.get("branch")
    base = ("params", "branch", "witness")
    extra = {"disconnected_flat": ("components",), "lifted_flat": ("min_points",),
             "ag_restriction": ("functional", "contracted", "f", "basis", "chain")}
    _need(branch in extra, f"branch: unknown {branch!r}")
    _keys(c, base + extra[branch])
    k, t, n = _params(M, c)
    _need(k >= 2 and t >= 2, "params: need k >= 2 and t >= 2")
    _need(M.rank >= t + k - 1, "rank below t + k - 1")
    if branch == "disconnected_flat":
        _disconnected(M, c, t)
    elif branch == "lifted_flat":
        C = _subset(M, c["witness"], "witness")
        _flat(M, C, k - 1, "witness")
        MC = M.contract(C)
        low = min(MC.point_count(T) for T in MC.kernel.flats(t))
        _need(_same(c["min_points"], low), f"min_points: expected {low}")
        _need(low >= n + 1, f"a rank-{t} flat of the contraction has {low} < {n + 1} points")
    else:
        S = _subset(M, c["witness"], "witness")
        C = _subset(M, c["contracted"], "contracted")
        _flat(M, C, k - 1, "contracted")
        f = _int(c["f"], "f", 0, M.n - 1)
        _need(not M.closure(C) >> f & 1, "f lies in the span of the contracted flat")
        _need(_same(c["basis"], greedy_basis(M, C)), "basis: expected the greedy basis of the contracted flat")
        chain, T = [], 0
        for i in range(1, k):
            T = M.closure(mask_of([f] + c["basis"][:i])) & ~C
            chain.append(popcount(T))
        _need(_same(c["chain"], chain), f"chain: expected {chain}")
        _need(chain[0] == M.p and all(b == M.p * a for a, b in zip(chain, chain[1:])),
              "size chain is not geometric")
        _need(S == T, "witness is not the last set of the chain")
        _ag_witness(M, S, k, c["functional"])


def _ag_witness(M, S, k, functional):
    _need(M.rank_of(S) == k, f"witness has rank {M.rank_of(S)}, expected {k}")
    phi = affine_functional(M, S)
    _need(phi is not None, "witness is not an affine geometry")
    _need(_same(functional, list(phi)), f"functional: expected {list(phi)}")


def _v_restriction(M, c):
    branch = c.get("branch")
    extra = {"disconnected_flat": ("components",), "small_flat": ("components",), "ag_restriction": ("functional",),
             "exhausted": ()}
    _need(branch in extra, f"branch: unknown {branch!r}")
    _keys(c, ("params", "branch", "witness") + extra[branch])
    k, t, n = _params(M, c)
    if branch == "disconnected_flat":
        _disconnected(M, c, t)
    elif branch == "small_flat":
        W = _subset(M, c["witness"], "witness")
        _flat(M, W, t, "witness")
        _need(M.point_count(W) <= n, f"witness has {M.point_count(W)} > {n} points")
        _need(type(c["components"]) is list and
              [_subset(M, x, "components") for x in c["components"]] == _components(M, W),
              "components are not the connected components")
    elif branch == "ag_restriction":
        _ag_witness(M, _subset(M, c["witness"], "witness"), k, c["functional"])
    else:
        _need(_same(c["witness"], []), "exhausted outcome carries a witness")
        if t <= M.rank:
            for W in M.kernel.flats(t):
                _need(len(_components(M, W)) < 2 and M.point_count(W) > n,
                      f"rank-{t} flat {indices(W)} is disconnected or small")
        from .flats import find_affine_restrictions
        A = next(find_affine_restrictions(M, k), None)
        _need(A is None, f"{indices(A) if A else ''} is an affine restriction")


def _v_lift(M, c):
    common = ("k", "J", "A", "affine_rank", "transform", "scales", "blocks", "colors", "success")
    if c.get("success") is True:
        _keys(c, common + ("flat", "color", "functional"))
    else:
        _keys(c, common + ("classes",))
    p, dim = M.p, M.dim
    k = _int(c["k"], "k", 1)
    J = _subset(M, c["J"], "J")
    A = _subset(M, c["A"], "A")
    _need(M.is_independent(J), "J is dependent")
    _need(not J & A and A, "A is empty or meets J")
    m = popcount(J)
    nA = _int(c["affine_rank"], "affine_rank", 1)
    _need(M.rank_of(J | A) - m == nA, f"affine_rank: expected {M.rank_of(J | A) - m}")
    _need(nA >= k, "affine rank below k")
    _need(type(c["transform"]) is list and len(c["transform"]) == dim, "transform: wrong shape")
    T = tuple(_vector(r, "transform", p, dim) for r in c["transform"])
    _need(mat_inverse(T, p) is not None, "transform is singular")
    elems = indices(J | A)
    keys = sorted(str(x) for x in elems)
    for name in ("scales", "blocks"):
        _need(type(c[name]) is dict and sorted(c[name]) == keys, f"{name}: wrong element set")
    _need(type(c["colors"]) is dict and sorted(c["colors"]) == sorted(str(x) for x in indices(A)),
          "colors: wrong element set")
    blocks = {}
    for pos, x in enumerate(elems):
        s = _int(c["scales"][str(x)], "scales", 1, p - 1)
        blk = _vector(c["blocks"][str(x)], "blocks", p, dim)
        _need(mat_vec(T, [(s * v) % p for v in M.vectors[x]], p) == blk,
              f"block of {x} does not re-multiply")
        blocks[x] = blk
    for i, x in enumerate(indices(J)):
        _need(_same(c["scales"][str(x)], 1), "J columns must be unscaled")
        _need(blocks[x] == tuple(int(j == i) for j in range(dim)), f"column of {x} is not a unit vector")
    Apts = []
    for x in indices(A):
        blk = blocks[x]
        _need(all(v == 0 for v in blk[m + nA:]), f"block of {x} leaves the affine rows")
        _need(blk[m] == 1, f"first row of D is not 1 at {x}")
        _need(_same(c["colors"][str(x)], list(blk[:m])), f"colour of {x} differs from its B column")
        Apts.append(blk[m:m + nA])
    _need(len(set(Apts)) == len(Apts) == p ** (nA - 1), "A is not an affine geometry in M/J")
    aff_elems = indices(A)
    if c["success"] is True:
        F = _subset(M, c["flat"], "flat")
        _need(popcount(F) == p ** (k - 1), "flat: wrong cardinality")
        _need(F & A == F, "flat is not inside A")
        col = c["color"]
        _need(all(_same(c["colors"][str(x)], col) for x in indices(F)), "flat is not monochromatic")
        D = Matroid(p, Apts, dim=nA)
        local = mask_of(aff_elems.index(x) for x in indices(F))
        _need(D.closure(local) == local and D.rank_of(local) == k, "flat is not a rank-k flat of the affine part")
        _ag_witness(M, F, k, c["functional"])
    else:
        _need(c["success"] is False, "success: expected a boolean")
        _need(type(c["classes"]) is list, "classes: expected a list")
        classes = [_subset(M, x, "classes") for x in c["classes"]]
        groups = {}
        for x in aff_elems:
            groups.setdefault(tuple(c["colors"][str(x)]), []).append(x)
        expected = sorted((mask_of(g) for g in groups.values()), key=lex_key)
        _need(classes == expected, "classes do not match the colouring")
        D = Matroid(p, Apts, dim=nA)
        for F in D.kernel.flats(k):
            lifted = mask_of(aff_elems[i] for i in indices(F))
            _need(not any(lifted & cl == lifted for cl in classes),
                  f"colour class contains the rank-{k} flat {indices(lifted)}")


def _v_cap(M, c):
    _keys(c, ("k", "size", "witness"))
    k = _int(c["k"], "k", 0)
    X = _subset(M, c["witness"], "witness")
    _need(_same(c["size"], popcount(X)), "size: wrong cardinality")
    flats = list(M.kernel.flats(k)) if k <= M.rank else []
    _need(not any(F & X == F for F in flats), "witness contains a rank-k flat")
    for x in indices(M.full & ~X):
        Y = X | 1 << x
        _need(any(F & Y == F for F in flats), f"witness extends by {x}")


_VALIDATORS = {
    "unavoidable_flat": _v_unavoidable,
    "flat_atlas": _v_atlas,
    "reid": _v_reid,
    "reid1": _v_reid1,
    "reid2": _v_reid2,
    "trichotomy": _v_trichotomy,
    "restriction": _v_restriction,
    "lift": _v_lift,
    "cap": _v_cap,
}
KINDS = tuple(sorted(_VALIDATORS))


def validate_certificate(M: Matroid, cert) -> Validation:
    """Re-verify ``cert`` against ``M``; the result is falsy with a reason
    when any claim fails. Raises UsageError for an unknown kind."""
    if type(cert) is not dict or set(cert) != _ENVELOPE_KEYS:
        return Validation(False, "malformed envelope")
    kind = cert["kind"]
    if kind not in _VALIDATORS:
        raise UsageError(f"unknown certificate kind {kind!r}")
    if type(cert["schema"]) is not int or cert["schema"] != SCHEMA_VERSION:
        return Validation(False, f"unsupported schema {cert['schema']!r}")
    if cert["matroid_hash"] != matroid_digest(M):
        return Validation(False, "matroid hash mismatch")
    if type(cert["notes"]) is not dict:
        return Validation(False, "notes: expected an object")
    if type(cert["claims"]) is not dict:
        return Validation(False, "claims: expected an object")
    try:
        _VALIDATORS[kind](M, cert["claims"])
    except Invalid as exc:
        return Validation(False, str(exc))
    except (KeyError, TypeError, IndexError, ValueError, AttributeError) as exc:
        return Validation(False, f"malformed claims: {exc!r}")
    return Validation(True)

"""Certificate-producing procedures for the unavoidable-flat lemmas.

Every procedure returns a result object whose ``certificate(M)`` method
gives a JSON-ready dict; :func:`flatforge.certify.validate_certificate`
re-checks it from scratch.
"""

from __future__ import annotations

import logging
from itertools import combinations
from dataclasses import dataclass, field

from .errors import HypothesisError, LemmaViolation, PreconditionError, UsageError
from .flats import (AFFINE, INDEPENDENT, PROJECTIVE, UNAVOIDABLE, Flat, classify_flat,
                    enumerate_flats, find_affine_restrictions, find_two_point_line,
                    is_affine_restriction)
from .gf import (MatGF, canonical_point, canonical_vectors, complete_basis, dot, hyperplanes_of,
                 in_span, mat_inverse, mat_vec, rank)
from .io import envelope
from .matroid import Matroid, indices, lex_key, mask_of, popcount

log = logging.getLogger(__name__)


def _lift(mask: int, keep: list[int]) -> int:
    """Map a mask on a minor's ground set back to the parent's indices."""
    return mask_of(keep[i] for i in indices(mask))


def _greedy_basis(M: Matroid, S: int) -> list[int]:
    basis, cur = [], 0
    for i in indices(S):
        if M.rank_of(cur | 1 << i) > len(basis):
            basis.append(i)
            cur |= 1 << i
    return basis


def _components_of(M: Matroid, F: int) -> list[int]:
    """Components of M|F in M's indices."""
    keep = indices(F)
    return [_lift(c, keep) for c in M.restrict(F).connected_components()]


# ---------------------------------------------------------------- Reid configurations


def _check_copunctual(N: Matroid, e: int, lines) -> list[int]:
    L = [N._check(x) for x in lines]
    if len(L) != 3:
        raise HypothesisError("exactly three lines required")
    if N.rank != 3:
        raise HypothesisError(f"matroid has rank {N.rank}, expected 3")
    if not N.is_simple():
        raise HypothesisError("matroid is not simple")
    if (L[0] | L[1] | L[2]) != N.full:
        raise HypothesisError("lines do not cover the ground set", N.full & ~(L[0] | L[1] | L[2]))
    for x in L:
        if not (x >> e & 1):
            raise HypothesisError("line misses the apex", indices(x))
        if N.rank_of(x) != 2 or not N.is_flat(x):
            raise HypothesisError("set is not a rank-2 flat", indices(x))
    for i in range(3):
        for j in range(i + 1, 3):
            if L[i] & L[j] != 1 << e:
                raise HypothesisError("lines meet outside the apex", indices(L[i] & L[j]))
    return L


@dataclass
class ReidCertificate:
    apex: int
    lines: tuple
    two_point_line: int | None = None
    a: int | None = None
    b: int | None = None
    edges: list = field(default_factory=list)  # (x, y, via)
    cycles: list = field(default_factory=list)
    half_lengths: list = field(default_factory=list)
    sizes: tuple = ()
    divisible: bool | None = None

    def certificate(self, M: Matroid) -> dict:
        claims = {
            "apex": self.apex,
            "lines": [indices(x) for x in self.lines],
            "two_point_line": indices(self.two_point_line) if self.two_point_line is not None else None,
            "a": self.a,
            "b": self.b,
            "edges": [list(x) for x in self.edges],
            "cycles": [list(c) for c in self.cycles],
            "half_lengths": list(self.half_lengths),
            "sizes": list(self.sizes),
            "divisible": self.divisible,
        }
        return envelope("reid", M, claims)


def verify_reid_characteristic(N: Matroid, e: int, L1, L2, L3) -> ReidCertificate:
    """Three copunctual lines with no two-point line: build the 2-regular
    bipartite graph between L1 and L3 determined by two points of L2 and
    check the field characteristic divides every cycle's half-length."""
    L = _check_copunctual(N, e, (L1, L2, L3))
    cert = ReidCertificate(e, tuple(L), sizes=tuple(popcount(x) for x in L))
    two = find_two_point_line(N)
    if two.line is not None:
        cert.two_point_line = two.line
        return cert
    p = N.p
    if len(set(cert.sizes)) != 1:
        raise LemmaViolation(f"line sizes {cert.sizes} differ without a two-point line")
    apex = 1 << e
    left, mid, right = (indices(x & ~apex) for x in L)
    a, b = mid[0], mid[1]
    cert.a, cert.b = a, b
    right_mask = mask_of(right)
    adj: dict = {}
    for x in left:
        for w in (a, b):
            hit = indices(N.closure((1 << x) | (1 << w)) & right_mask)
            if len(hit) != 1:
                raise LemmaViolation(f"line through {x},{w} meets L3 in {hit}")
            y = hit[0]
            cert.edges.append((x, y, w))
            adj.setdefault(("L", x), {})[w] = y
            adj.setdefault(("R", y), {})[w] = x
    for key, nbrs in adj.items():
        if len(nbrs) != 2 or len(set(nbrs.values())) != 2:
            raise LemmaViolation(f"vertex {key} does not have degree 2")
    seen = set()
    for x in left:
        if x in seen:
            continue
        cycle = []
        cur = x
        while True:
            seen.add(cur)
            y = adj[("L", cur)][a]
            cycle += [cur, y]
            cur = adj[("R", y)][b]
            if cur == x:
                break
        cert.cycles.append(cycle)
        cert.half_lengths.append(len(cycle) // 2)
    cert.divisible = all(h % p == 0 for h in cert.half_lengths) and (cert.sizes[0] - 1) % p == 0
    if not cert.divisible:
        raise LemmaViolation("characteristic does not divide the cycle half-lengths")
    return cert


@dataclass
class Reid1Verdict:
    holds: bool
    two_point_line: int | None
    sizes: tuple

    def certificate(self, M: Matroid, e: int, lines) -> dict:
        return envelope("reid1", M, {
            "apex": e,
            "lines": [indices(x) for x in lines],
            "two_point_line": indices(self.two_point_line) if self.two_point_line is not None else None,
            "sizes": list(self.sizes),
            "holds": self.holds,
        })


def verify_reid1(N: Matroid, e: int, L1, L2, L3) -> Reid1Verdict:
    """Without a two-point line, all three copunctual lines have p+1 points."""
    L = _check_copunctual(N, e, (L1, L2, L3))
    sizes = tuple(popcount(x) for x in L)
    two = find_two_point_line(N)
    if two.line is not None:
        return Reid1Verdict(True, two.line, sizes)
    return Reid1Verdict(all(s == N.p + 1 for s in sizes), None, sizes)


@dataclass
class CopunctualCensus:
    p: int
    configurations: int = 0
    with_two_point_line: int = 0
    all_full: int = 0
    exceptions: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"p": self.p, "configurations": self.configurations,
                "with_two_point_line": self.with_two_point_line, "all_full": self.all_full,
                "exceptions": [indices(x) for x in self.exceptions]}


def copunctual_census(p: int) -> CopunctualCensus:
    """Run verify_reid1 on every configuration of three copunctual lines
    inside PG(2, p): each line keeps the apex and a nonempty subset of its
    other p points."""
    from .catalog import reid

    full = reid(p)
    e = full.vectors.index((0, 0, 1))
    tails = [indices(L & ~(1 << e)) for L in full.lines_through(e)]
    out = CopunctualCensus(p)
    choices = [[mask_of(c) for r in range(1, p + 1) for c in combinations(t, r)] for t in tails]
    for a in choices[0]:
        for b in choices[1]:
            for c in choices[2]:
                S = a | b | c | (1 << e)
                keep = indices(S)
                N = full.restrict(S)
                loc = [mask_of(keep.index(x) for x in indices(part | (1 << e))) for part in (a, b, c)]
                v = verify_reid1(N, keep.index(e), *loc)
                out.configurations += 1
                if v.two_point_line is not None:
                    out.with_two_point_line += 1
                elif v.holds:
                    out.all_full += 1
                if not v.holds:
                    out.exceptions.append(S)
    return out


@dataclass
class Reid2Report:
    element: int
    hypotheses: dict
    m: int
    holds: bool | None
    line_sizes: list

    @property
    def hypotheses_hold(self) -> bool:
        return all(self.hypotheses.values())

    def certificate(self, M: Matroid) -> dict:
        return envelope("reid2", M, {
            "element": self.element,
            "hypotheses": dict(self.hypotheses),
            "m": self.m,
            "holds": self.holds,
            "line_sizes": list(self.line_sizes),
        })


def verify_reid2(M: Matroid, e: int) -> Reid2Report:
    """Check the hypotheses around ``e`` and, if they hold, that every line
    through ``e`` has p + 1 points."""
    if M.loops >> e & 1:
        raise UsageError("element is a loop")
    si, _ = M.contract(1 << e).simplify()
    m = si.n
    hyp = {
        "simple": M.is_simple(),
        "si_contraction_connected": si.is_connected() and m > 0,
        "m_at_least_3": m >= 3,
        "not_coloop": not M.is_coloop(e),
    }
    small = [H for H in enumerate_flats(M, M.rank - 1) if not H >> e & 1 and M.point_count(H) < m]
    hyp["no_small_disjoint_hyperplane"] = not small
    sizes = [M.point_count(L) for L in M.lines_through(e)]
    holds = None
    if all(hyp.values()):
        holds = all(s == M.p + 1 for s in sizes)
    return Reid2Report(e, hyp, m, holds, sizes)


# ---------------------------------------------------------------- trichotomies


@dataclass(frozen=True)
class SearchParams:
    p: int
    k: int
    t: int
    n: int
    depth: int = 8

    def __post_init__(self):
        if self.k < 1 or self.t < 1 or self.n < self.t:
            raise UsageError("need k >= 1 and n >= t >= 1")


AG_BRANCH = "ag_restriction"
LIFTED_BRANCH = "lifted_flat"
DISCONNECTED_BRANCH = "disconnected_flat"
SMALL_BRANCH = "small_flat"
EXHAUSTED = "exhausted"


@dataclass
class TrichotomyOutcome:
    branch: str
    params: SearchParams
    witness: int
    components: list = field(default_factory=list)
    functional: tuple | None = None
    contracted: int = 0  # C for the AG and lifted branches
    f: int | None = None
    basis: list = field(default_factory=list)
    chain: list = field(default_factory=list)
    min_points: int | None = None

    def certificate(self, M: Matroid) -> dict:
        pr = self.params
        claims = {
            "params": {"p": pr.p, "k": pr.k, "t": pr.t, "n": pr.n},
            "branch": self.branch,
            "witness": indices(self.witness),
        }
        if self.branch == DISCONNECTED_BRANCH:
            claims["components"] = [indices(c) for c in self.components]
        elif self.branch == LIFTED_BRANCH:
            claims["min_points"] = self.min_points
        elif self.branch == AG_BRANCH:
            claims.update(functional=list(self.functional), contracted=indices(self.contracted),
                          f=self.f, basis=list(self.basis), chain=list(self.chain))
        return envelope("trichotomy", M, claims)


def kelly2_trichotomy(M: Matroid, params: SearchParams) -> TrichotomyOutcome:
    """AG(k-1,p)-restriction, a rank-(k-1) flat lifting the point bound, or
    a disconnected rank-t flat.

    A disconnected rank-t flat found while checking the point-count
    precondition is returned directly; it is a valid outcome whatever the
    point counts are.
    """
    p, k, t, n = params.p, params.k, params.t, params.n
    if p != M.p:
        raise UsageError("params prime differs from the matroid's")
    if k < 2 or t < 2:
        raise UsageError("need k >= 2 and n >= t >= 2")
    if M.rank < t + k - 1:
        raise PreconditionError(f"rank {M.rank} < t + k - 1 = {t + k - 1}")
    rank_t = list(enumerate_flats(M, t))
    for T in rank_t:
        comps = _components_of(M, T)
        if len(comps) > 1:
            return TrichotomyOutcome(DISCONNECTED_BRANCH, params, T, components=comps)
    for T in rank_t:
        if M.point_count(T) < n:
            raise PreconditionError(f"rank-{t} flat with {M.point_count(T)} < {n} points", indices(T))

    for C in enumerate_flats(M, k - 1):
        keep = indices(M.full & ~C)
        MC = M.contract(C)
        counts = [(MC.point_count(T), T) for T in enumerate_flats(MC, t)]
        low = min(c for c, _ in counts)
        if low >= n + 1:
            return TrichotomyOutcome(LIFTED_BRANCH, params, C, contracted=C, min_points=low)
        if low < n:
            raise LemmaViolation(f"rank-{t} flat of M/C with {low} < {n} points")
        T = next(T for c, T in counts if c <= n)
        W = _lift(T, keep) | C
        f = indices(W & ~C)[0]
        ind = [f]
        for g in indices(W & ~C):
            if len(ind) == t:
                break
            if g != f and M.rank_of(mask_of(ind + [g]) | C) == len(ind) + 1 + (k - 1):
                ind.append(g)
        F = M.closure(mask_of(ind))
        comps = _components_of(M, F)
        if len(comps) > 1:
            return TrichotomyOutcome(DISCONNECTED_BRANCH, params, F, components=comps)
        for e in indices(C & ~M.loops):
            for g in indices(W & ~C):
                line = M.closure((1 << e) | (1 << g))
                if M.point_count(line) != p + 1:
                    raise LemmaViolation(f"line through {e},{g} has {M.point_count(line)} points")
        basis = _greedy_basis(M, C)
        chain = []
        S = 0
        for i in range(1, k):
            S = M.closure(mask_of([f] + basis[:i])) & ~C
            chain.append(popcount(S))
        if chain[0] != p or any(chain[i + 1] != p * chain[i] for i in range(len(chain) - 1)):
            raise LemmaViolation(f"size chain {chain} is not geometric with ratio {p}")
        functional = is_affine_restriction(M, S)
        if functional is None:
            raise LemmaViolation("constructed set is not an affine geometry")
        log.debug("kelly2: AG branch from C=%s f=%s chain=%s", indices(C), f, chain)
        return TrichotomyOutcome(AG_BRANCH, params, S, functional=functional, contracted=C,
                                 f=f, basis=basis, chain=chain)
    raise LemmaViolation("no rank-(k-1) flat")  # pragma: no cover


@dataclass
class RestrictionOutcome:
    branch: str
    params: SearchParams
    witness: int = 0
    components: list = field(default_factory=list)
    functional: tuple | None = None
    transcript: list = field(default_factory=list)

    def certificate(self, M: Matroid) -> dict:
        pr = self.params
        claims = {
            "params": {"p": pr.p, "k": pr.k, "t": pr.t, "n": pr.n},
            "branch": self.branch,
            "witness": indices(self.witness),
        }
        if self.branch in (DISCONNECTED_BRANCH, SMALL_BRANCH):
            claims["components"] = [indices(c) for c in self.components]
        elif self.branch == AG_BRANCH:
            claims["functional"] = list(self.functional)
        return envelope("restriction", M, claims, {"transcript": list(self.transcript)})


def restriction_trichotomy(M: Matroid, params: SearchParams, _depth: int = 0) -> RestrictionOutcome:
    """AG(k-1,p)-restriction, or a rank-t flat that is disconnected or has
    at most n points.

    Follows the inductive argument (lift the point bound with kelly2_trichotomy,
    recurse in the contraction, lift the affine geometry back); when that
    route stalls at desk scale the AG restriction is searched exhaustively.
    """
    p, k, t, n = params.p, params.k, params.t, params.n
    if p != M.p:
        raise UsageError("params prime differs from the matroid's")
    out = RestrictionOutcome(EXHAUSTED, params)
    tr = out.transcript
    if M.rank >= t:
        # first rank-t flat with either property; a small flat is reported
        # as such even when it is also disconnected
        for T in enumerate_flats(M, t):
            comps = _components_of(M, T)
            small = M.point_count(T) <= n
            if small or len(comps) > 1:
                out.branch = SMALL_BRANCH if small else DISCONNECTED_BRANCH
                out.witness, out.components = T, comps
                tr.append(f"depth {_depth}: rank-{t} flat with {M.point_count(T)} points, "
                          f"{len(comps)} component(s)")
                return out
    if k == 1 and M.n:
        out.branch, out.witness, out.functional = AG_BRANCH, 1, is_affine_restriction(M, 1)
        return out
    if k >= 2 and t >= 2 and M.rank >= t + k - 1 and _depth < params.depth:
        res = kelly2_trichotomy(M, SearchParams(p, k, t, n + 1))
        tr.append(f"depth {_depth}: kelly2 with n={n + 1} -> {res.branch}")
        if res.branch == AG_BRANCH:
            out.branch, out.witness, out.functional = AG_BRANCH, res.witness, res.functional
            return out
        if res.branch == LIFTED_BRANCH:
            F = res.witness
            keep = indices(M.full & ~F)
            si, pmap = M.contract(F).simplify()
            sub = restriction_trichotomy(si, SearchParams(p, k, t, n + 1, params.depth), _depth + 1)
            tr.extend(sub.transcript)
            if sub.branch == AG_BRANCH:
                A = _lift(_lift(sub.witness, list(pmap.representatives)), keep)
                J = mask_of(_greedy_basis(M, F))
                lift = lift_affine(M, J, k, A)
                tr.append(f"depth {_depth}: lift through |J|={popcount(J)} -> "
                          f"{'success' if lift.success else 'no monochromatic flat'}")
                if lift.success:
                    out.branch, out.witness, out.functional = AG_BRANCH, lift.flat, lift.functional
                    return out
            else:
                tr.append(f"depth {_depth}: contraction gave {sub.branch}")
    for A in find_affine_restrictions(M, k):
        out.branch, out.witness, out.functional = AG_BRANCH, A, is_affine_restriction(M, A)
        tr.append(f"depth {_depth}: AG({k - 1},{p}) found by exhaustive search")
        return out
    tr.append(f"depth {_depth}: exhausted")
    return out


# ---------------------------------------------------------------- affine lifting


@dataclass
class LiftResult:
    success: bool
    J: int
    A: int
    transform: tuple  # T with T @ (scale_x * v_x) = block column of x
    scales: dict
    blocks: dict  # element -> block column (length dim)
    colors: dict  # element -> B column
    k: int
    affine_rank: int
    flat: int = 0
    color: tuple | None = None
    functional: tuple | None = None
    classes: list = field(default_factory=list)

    def certificate(self, M: Matroid) -> dict:
        claims = {
            "k": self.k,
            "J": indices(self.J),
            "A": indices(self.A),
            "affine_rank": self.affine_rank,
            "transform": [list(r) for r in self.transform],
            "scales": {str(x): s for x, s in sorted(self.scales.items())},
            "blocks": {str(x): list(c) for x, c in sorted(self.blocks.items())},
            "colors": {str(x): list(c) for x, c in sorted(self.colors.items())},
            "success": self.success,
        }
        if self.success:
            claims.update(flat=indices(self.flat), color=list(self.color),
                          functional=list(self.functional))
        else:
            claims["classes"] = [indices(c) for c in self.classes]
        return envelope("lift", M, claims)


def lift_affine(M: Matroid, J, k: int, A=None) -> LiftResult:
    """Pass from an affine geometry in M/J to an AG(k-1,p)-restriction of M.

    Puts the representation of J ∪ A in the block form [[I, B], [0, D]]
    with the first row of D all ones, colours each affine element by its
    B column and searches for a monochromatic rank-k flat; subtracting
    multiples of D's first row from B then clears B on that flat.
    """
    J = M._check(J)
    if not M.is_independent(J):
        raise UsageError("J is not independent")
    p, dim = M.p, M.dim
    keep = indices(M.full & ~J)
    MJ = M.contract(J)
    if A is None:
        si, pmap = MJ.simplify()
        for rr in range(si.rank, k - 1, -1):
            found = next(find_affine_restrictions(si, rr), None)
            if found is not None:
                A = _lift(_lift(found, list(pmap.representatives)), keep)
                break
        else:
            raise UsageError(f"M/J has no AG restriction of rank >= {k}")
    A = M._check(A)
    if A & J:
        raise UsageError("affine set meets J")
    local = mask_of(keep.index(x) for x in indices(A))
    if is_affine_restriction(MJ, local) is None:
        raise UsageError("A is not an affine geometry in M/J")
    nA = MJ.rank_of(local)
    if nA < k:
        raise UsageError(f"affine geometry has rank {nA} < {k}")
    Jl, m = indices(J), popcount(J)
    abasis = [keep[i] for i in _greedy_basis(MJ, local)]
    cols = complete_basis([M.vectors[j] for j in Jl] + [M.vectors[a] for a in abasis], dim, p)
    P = mat_inverse(MatGF.from_columns(p, cols, dim).data, p)
    coords = {x: mat_vec(P, M.vectors[x], p) for x in Jl + indices(A)}
    psi = next(f for f in hyperplanes_of(nA, p)
               if all(dot(f, coords[x][m:m + nA], p) for x in indices(A)))
    # Q: invertible with first row psi
    Qrows = [tuple(psi)]
    for i in range(nA):
        e = tuple(int(i == j) for j in range(nA))
        if rank(MatGF(p, tuple(Qrows + [e]))) == len(Qrows) + 1:
            Qrows.append(e)
        if len(Qrows) == nA:
            break
    T = []
    for i in range(dim):
        if i < m or i >= m + nA:
            T.append(tuple(P[i]))
        else:
            r = Qrows[i - m]
            T.append(tuple(sum(r[j] * P[m + j][c] for j in range(nA)) % p for c in range(dim)))
    T = tuple(T)
    inv = M.field.inv
    scales, blocks, colors = {}, {}, {}
    for x in Jl:
        scales[x] = 1
        blocks[x] = mat_vec(T, M.vectors[x], p)
    for x in indices(A):
        s = inv[dot(psi, coords[x][m:m + nA], p)]
        scales[x] = s
        blocks[x] = mat_vec(T, [(s * c) % p for c in M.vectors[x]], p)
        colors[x] = blocks[x][:m]
    res = LiftResult(False, J, A, T, scales, blocks, colors, k, nA)
    aff_elems = indices(A)
    aff = Matroid(p, [blocks[x][m:m + nA] for x in aff_elems], dim=nA)
    by_color: dict = {}
    for i, x in enumerate(aff_elems):
        by_color[colors[x]] = by_color.get(colors[x], 0) | (1 << i)
    for F in enumerate_flats(aff, k):
        first = colors[aff_elems[(F & -F).bit_length() - 1]]
        if F & by_color[first] == F:
            flat = _lift(F, aff_elems)
            functional = is_affine_restriction(M, flat)
            if functional is None:
                raise LemmaViolation("monochromatic flat does not lift to an affine geometry")
            res.success, res.flat, res.color, res.functional = True, flat, first, functional
            return res
    res.classes = sorted((_lift(c, aff_elems) for c in by_color.values()), key=lex_key)
    return res


# ---------------------------------------------------------------- main theorem


@dataclass
class ExtendResult:
    flat: Flat | None
    infinity: list  # canonical vectors of the hyperplane at infinity
    in_matroid: list  # colour of each infinity point
    H: list = field(default_factory=list)  # indices into ``infinity``
    apex: int | None = None


def extend_affine_to_flat(M: Matroid, A, k: int) -> ExtendResult:
    """Rank-k affine or projective flat of M through an affine restriction.

    Colours the points at infinity of span(A) by membership in M, finds a
    monochromatic rank-(k-1) flat H there and returns M ∩ span(H ∪ {e}).
    """
    A = M._check(A)
    phi = is_affine_restriction(M, A)
    if phi is None:
        raise UsageError("A is not an affine geometry restriction")
    p = M.p
    mrank = M.rank_of(A)
    basis = [M.vectors[i] for i in _greedy_basis(M, A)]
    present = {q for q in M.points_index if q is not None}
    infinity = []
    for c in canonical_vectors(mrank, p):
        v = tuple(sum(c[i] * basis[i][j] for i in range(mrank)) % p for j in range(M.dim))
        if dot(phi, v, p) == 0:
            infinity.append(canonical_point(v, p))
    colours = [q in present for q in infinity]
    res = ExtendResult(None, infinity, colours)
    if k < 1 or k > mrank:
        return res
    e = indices(A)[0]
    res.apex = e
    if k == 1:
        H = []
    else:
        G = Matroid(p, infinity, dim=M.dim)
        yes = mask_of(i for i, c in enumerate(colours) if c)
        H = None
        for F in enumerate_flats(G, k - 1):
            if F & yes == F or F & yes == 0:
                H = indices(F)
                break
        if H is None:
            return res
    res.H = H
    span = MatGF.from_columns(p, [infinity[i] for i in H] + [M.vectors[e]], M.dim)
    F = mask_of(x for x in range(M.n) if in_span(span, M.vectors[x]) is not None)
    flat = classify_flat(M, F)
    if flat.rank != k or not flat.tags & {AFFINE, PROJECTIVE}:
        raise LemmaViolation(f"extension gave rank {flat.rank} with tags {sorted(flat.tags)}")
    res.flat = flat
    return res


@dataclass
class SearchResult:
    flat: Flat | None
    k: int
    strategy: str
    path: list = field(default_factory=list)

    @property
    def found(self) -> bool:
        return self.flat is not None

    def certificate(self, M: Matroid) -> dict:
        claims = {"k": self.k, "found": self.found}
        if self.flat is not None:
            claims.update(elements=self.flat.indices(), tags=sorted(self.flat.tags),
                          functional=list(self.flat.functional) if self.flat.functional else None)
        else:
            # evidence for the negative claim: every rank-k flat and its tags
            claims["flats"] = [{"elements": indices(F), "tags": sorted(classify_flat(M, F).tags)}
                               for F in enumerate_flats(M, self.k)]
        return envelope("unavoidable_flat", M, claims, {"strategy": self.strategy, "path": list(self.path)})


def unavoidable_search(M: Matroid, k: int, strategy: str = "direct") -> SearchResult:
    """Rank-k flat that is independent, affine or projective, if one exists."""
    if not M.is_simple():
        raise UsageError("unavoidable flat search needs a simple matroid")
    if k < 1:
        raise UsageError("k must be at least 1")
    strategy = {"proof": "proof_guided"}.get(strategy, strategy)
    if strategy not in ("direct", "proof_guided"):
        raise UsageError(f"unknown strategy {strategy!r}")
    res = SearchResult(None, k, strategy)
    if k > M.rank:
        res.path.append(f"rank {M.rank} < {k}")
        return res
    if strategy == "direct":
        for F in enumerate_flats(M, k):
            flat = classify_flat(M, F)
            if flat.tags & UNAVOIDABLE:
                res.flat = flat
                return res
        return res
    found = _guided(M, k, k, res.path, 0)
    if found is not None:
        res.flat = classify_flat(M, found)
    return res


def _guided(M: Matroid, k: int, t: int, path: list, depth: int) -> int | None:
    """Rank-t independent flat or rank-k affine/projective flat of M."""
    pre = "  " * depth
    if t == 1:
        path.append(f"{pre}t=1: single point")
        return 1 if M.n else None
    if M.rank < t:
        return None
    outcome = restriction_trichotomy(M, SearchParams(M.p, k, t, t))
    path.append(f"{pre}restriction(k={k}, t={t}, n={t}) -> {outcome.branch}")
    tried = set()
    if outcome.branch == AG_BRANCH:
        got = _case_affine(M, outcome.witness, k, path, pre)
        if got is not None:
            return got
        tried.add(("A", outcome.witness))
    elif outcome.branch in (DISCONNECTED_BRANCH, SMALL_BRANCH):
        got = _case_disconnected(M, outcome.witness, k, t, path, depth)
        if got is not None:
            return got
        tried.add(("F", outcome.witness))
    # the single branch above can stall below the Ramsey thresholds;
    # exhaust the remaining Case 1 and Case 2 candidates
    for mr in range(M.rank, k - 1, -1):
        for A in find_affine_restrictions(M, mr):
            if ("A", A) in tried:
                continue
            got = _case_affine(M, A, k, path, pre)
            if got is not None:
                return got
    for j in range(M.rank, t - 1, -1):
        for F in enumerate_flats(M, j):
            if ("F", F) in tried or len(M.restrict(F).connected_components()) < 2:
                continue
            got = _case_disconnected(M, F, k, t, path, depth)
            if got is not None:
                return got
    path.append(f"{pre}no case applies")
    return None


def _case_affine(M, A, k, path, pre):
    ext = extend_affine_to_flat(M, A, k)
    if ext.flat is None:
        path.append(f"{pre}case 1: AG of rank {M.rank_of(A)} has no monochromatic rank-{k - 1} flat at infinity")
        return None
    path.append(f"{pre}case 1: AG of rank {M.rank_of(A)} extends to {'+'.join(sorted(ext.flat.tags))}")
    return ext.flat.elements


def _case_disconnected(M, F, k, t, path, depth):
    pre = "  " * depth
    comps = _components_of(M, F)
    if len(comps) < 2:
        return None
    N = min(comps, key=lambda c: (popcount(c), lex_key(c)))
    Fp = F & ~N
    if M.rank_of(Fp) < t - 1:
        return None
    path.append(f"{pre}case 2: rank-{M.rank_of(F)} flat, drop component of size {popcount(N)}")
    keep = indices(Fp)
    sub = M.restrict(Fp)
    got = _guided(sub, k, t - 1, path, depth + 1)
    if got is None:
        return None
    got = _lift(got, keep)
    r = M.rank_of(got)
    if r == k and M.is_flat(got) and classify_flat(M, got).tags & {AFFINE, PROJECTIVE}:
        return got
    if r == t - 1 and M.is_independent(got):
        G = got | (N & -N)
        if M.is_flat(G) and M.is_independent(G) and M.rank_of(G) == t:
            return G
        raise LemmaViolation("adding a point of the dropped component did not give an independent flat")
    return None

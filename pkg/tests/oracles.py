"""Brute-force references written independently of the library code."""

from __future__ import annotations

import itertools
import random


def det_mod(m, p):
    """Leibniz expansion; only for tiny square matrices."""
    n = len(m)
    total = 0
    for perm in itertools.permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        prod = 1
        for i in range(n):
            prod *= m[i][perm[i]]
        total += -prod if inversions % 2 else prod
    return total % p


def rank_by_minors(rows, p):
    if not rows or not rows[0]:
        return 0
    nr, nc = len(rows), len(rows[0])
    for r in range(min(nr, nc), 0, -1):
        for ri in itertools.combinations(range(nr), r):
            for ci in itertools.combinations(range(nc), r):
                if det_mod([[rows[i][j] for j in ci] for i in ri], p):
                    return r
    return 0


def _reduce(basis, v, p):
    """Reduce ``v`` against an echelon ``basis`` {pivot: row with 1 at pivot}."""
    v = list(v)
    for piv, row in basis.items():
        c = v[piv]
        if c:
            v = [(a - c * b) % p for a, b in zip(v, row)]
    return v


def subset_ranks(vectors, p):
    """Rank of every subset, indexed by bitmask, by incremental elimination."""
    n = len(vectors)
    ranks = [0] * (1 << n)
    bases = [dict() for _ in range(1 << n)]
    for S in range(1, 1 << n):
        top = S.bit_length() - 1
        prev = S ^ (1 << top)
        v = _reduce(bases[prev], vectors[top], p)
        piv = next((i for i, c in enumerate(v) if c), None)
        if piv is None:
            ranks[S], bases[S] = ranks[prev], bases[prev]
            continue
        inv = pow(v[piv], p - 2, p)
        v = [(c * inv) % p for c in v]
        nb = {}
        for q, row in bases[prev].items():
            c = row[piv]
            nb[q] = [(a - c * b) % p for a, b in zip(row, v)] if c else row
        nb[piv] = v
        ranks[S], bases[S] = ranks[prev] + 1, nb
    return ranks


def closure_from_ranks(ranks, n, S):
    r = ranks[S]
    return S | sum(1 << e for e in range(n) if ranks[S | 1 << e] == r)


def flats_from_ranks(ranks, n, k):
    out = set()
    for S in range(1 << n):
        if ranks[S] == k and closure_from_ranks(ranks, n, S) == S:
            out.add(S)
    return out


def circuits_from_ranks(ranks, n):
    dep = [S for S in range(1, 1 << n) if ranks[S] < bin(S).count("1")]
    return [C for C in dep if all(ranks[C ^ (1 << e)] == bin(C).count("1") - 1
                                  for e in range(n) if C >> e & 1)]


def components_from_circuits(ranks, n):
    """Connected components of the non-loop elements via shared circuits."""
    loops = {e for e in range(n) if ranks[1 << e] == 0}
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for C in circuits_from_ranks(ranks, n):
        els = [e for e in range(n) if C >> e & 1]
        for a in els[1:]:
            parent[find(a)] = find(els[0])
    comps = {}
    for e in range(n):
        if e not in loops:
            comps[find(e)] = comps.get(find(e), 0) | (1 << e)
    return sorted(comps.values(), key=lambda m: m & -m)


def gaussian_binomial(n, k, q):
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def random_vectors(rng: random.Random, p, dim, n, zero_rate=0.05):
    out = []
    for _ in range(n):
        if rng.random() < zero_rate:
            out.append(tuple([0] * dim))
        else:
            out.append(tuple(rng.randrange(p) for _ in range(dim)))
    return out


def line_free(mask, flats):
    return not any(f & mask == f for f in flats)


def max_flatfree_brute(n, flats):
    """Largest flat-free set, lexicographically least index tuple among ties."""
    best, best_key = 0, None
    for S in range(1 << n):
        if line_free(S, flats):
            key = (-bin(S).count("1"), tuple(i for i in range(n) if S >> i & 1))
            if best_key is None or key < best_key:
                best, best_key = S, key
    return bin(best).count("1"), best

"""Matroid builders shared by several test modules."""

from flatforge.catalog import ag
from flatforge.matroid import Matroid, mask_of


def coextension(base, B, p=2):
    """Columns [I 0] for J followed by [B; base] for the affine part.

    ``B`` is a list of m rows, each with one entry per base element.
    Returns (M, J mask, A mask).
    """
    m = len(B)
    dim = m + base.dim
    vecs = [tuple(int(i == j) for j in range(m)) + (0,) * base.dim for i in range(m)]
    for x, v in enumerate(base.vectors):
        vecs.append(tuple(B[i][x] % p for i in range(m)) + tuple(v))
    M = Matroid(p, vecs, dim=dim)
    return M, mask_of(range(m)), mask_of(range(m, m + base.n))


def random_coextension(rng, max_j=2, base=None):
    base = base or ag(3, 2)
    m = rng.randint(1, max_j)
    B = [[rng.randrange(2) for _ in range(base.n)] for _ in range(m)]
    return coextension(base, B) + (B,)

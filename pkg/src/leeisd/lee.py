"""Lee weights over Z_m, the Gray isometry, counting and the two coding bounds.

Counting is exact (Python ints / Fractions); only reporting converts to floats.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from math import comb, log2

import numpy as np

from . import kernels

__all__ = [
    "lee_weight",
    "lee_distance",
    "hamming_weight",
    "gray_map",
    "gray_inverse",
    "count_lee",
    "count_lee_sum",
    "partial_binomial_sum",
    "partial_lee_sum",
    "enumerate_lee",
    "random_lee_vector",
    "WeightLevel",
    "weight_levels",
    "sums_over_level",
    "singleton_bound",
    "gv_rhs",
    "gv_dimension",
    "rate",
]

# Gray images of 0, 1, 2, 3
_GRAY = np.array([[0, 0], [0, 1], [1, 1], [1, 0]], dtype=np.int64)


def lee_weight(x, m=4):
    x = np.asarray(x, dtype=np.int64) % m
    return int(np.minimum(x, m - x).sum())


def lee_distance(x, y, m=4):
    x = np.asarray(x, dtype=np.int64)
    y = np.asarray(y, dtype=np.int64)
    if x.shape != y.shape:
        raise ValueError(f"length mismatch: {x.shape} vs {y.shape}")
    return lee_weight(x - y, m)


def hamming_weight(x):
    return int(np.count_nonzero(x))


def gray_map(x):
    """Z_4^n -> F_2^{2n}, coordinate-wise 0->00, 1->01, 2->11, 3->10."""
    x = np.asarray(x, dtype=np.int64)
    return _GRAY[x].reshape(*x.shape[:-1], 2 * x.shape[-1])


def gray_inverse(bits):
    bits = np.asarray(bits, dtype=np.int64)
    if bits.shape[-1] % 2:
        raise ValueError("Gray preimage needs an even number of bits")
    pairs = bits.reshape(*bits.shape[:-1], -1, 2)
    # 00->0, 01->1, 11->2, 10->3
    return (pairs[..., 0] * 3) ^ pairs[..., 1]


def count_lee_sum(n, w):
    """sum_i C(n, i) C(n-i, w-2i) 2^(w-2i): vectors with i twos and w-2i units."""
    if w < 0 or w > 2 * n:
        return 0
    return sum(
        comb(n, i) * comb(n - i, w - 2 * i) * 2 ** (w - 2 * i) for i in range(w // 2 + 1)
    )


def count_lee(n, w):
    """Number of vectors in Z_4^n of Lee weight ``w``; equals C(2n, w)."""
    if w < 0 or w > 2 * n:
        return 0
    c = count_lee_sum(n, w)
    assert c == comb(2 * n, w)
    return c


@lru_cache(maxsize=65536)
def partial_binomial_sum(n, w):
    """L(n, w) = sum_{i=1}^{w} C(n, i)."""
    return sum(comb(n, i) for i in range(1, w + 1))


@lru_cache(maxsize=65536)
def partial_lee_sum(n, w):
    """Lbar(n, w) = sum_{i=1}^{w} C(2n, i)."""
    return sum(comb(2 * n, i) for i in range(1, w + 1))


def enumerate_lee(n, w):
    """Yield every vector of Z_4^n with Lee weight ``w`` exactly once.

    Order: number of 2-entries ascending, then positions of the 2s, then
    positions of the +-1 entries (both lexicographic), then signs with 1 before 3.
    """
    if w < 0 or w > 2 * n:
        return
    for twos in range(w // 2 + 1):
        ones = w - 2 * twos
        if twos + ones > n:
            continue
        for pos2 in combinations(range(n), twos):
            free = [j for j in range(n) if j not in pos2]
            for pos1 in combinations(free, ones):
                for signs in product((1, 3), repeat=ones):
                    v = np.zeros(n, dtype=np.int64)
                    v[list(pos2)] = 2
                    v[list(pos1)] = signs
                    yield v


def random_lee_vector(n, w, rng):
    """Uniform sample from the C(2n, w) vectors of Z_4^n with Lee weight ``w``.

    Pulls back a uniform weight-w word of F_2^{2n} through the Gray map.
    """
    if not 0 <= w <= 2 * n:
        raise ValueError(f"no vector of length {n} has Lee weight {w}")
    bits = np.zeros(2 * n, dtype=np.int64)
    bits[rng.choice(2 * n, size=w, replace=False)] = 1
    return gray_inverse(bits)


@dataclass(frozen=True, eq=False)
class WeightLevel:
    """All vectors of one weight, each tied to a parent one weight lower.

    ``vectors[i] = parents[parent[i]] + delta[i] * e_{coord[i]}`` (mod m),
    which is what intermediate sums need: one column addition per vector.
    """

    vectors: np.ndarray
    parent: np.ndarray
    coord: np.ndarray
    delta: np.ndarray


@lru_cache(maxsize=256)
def weight_levels(n, w, m=4):
    """Levels 0..w of the weight tree of Z_m^n (m = 2: Hamming, m = 4: Lee).

    The parent of a vector is obtained from its last nonzero coordinate: a +-1
    entry (or a binary 1) is cleared, a 2 becomes 1. Every vector of weight
    <= w appears exactly once.
    """
    if m not in (2, 4):
        raise ValueError("weight trees are implemented for m in {2, 4}")
    zero = np.zeros((1, n), dtype=np.int64)
    levels = [WeightLevel(zero, np.array([-1]), np.array([-1]), np.array([0]))]
    last = np.array([-1])
    for _ in range(w):
        prev = levels[-1].vectors
        vecs, par, crd, dlt, new_last = [], [], [], [], []

        def emit(p, j, val, d):
            v = prev[p].copy()
            v[j] = val
            vecs.append(v)
            par.append(p)
            crd.append(j)
            dlt.append(d)
            new_last.append(j)

        steps = ((1, 1), (3, -1)) if m == 4 else ((1, 1),)
        for p in range(prev.shape[0]):
            q = last[p]
            if m == 4 and q >= 0 and prev[p, q] == 1:
                emit(p, q, 2, 1)
            for j in range(q + 1, n):
                for val, d in steps:
                    emit(p, j, val, d)
        if not vecs:
            vecs_arr = np.zeros((0, n), dtype=np.int64)
        else:
            vecs_arr = np.array(vecs, dtype=np.int64)
        levels.append(
            WeightLevel(
                vecs_arr,
                np.array(par, dtype=np.int64),
                np.array(crd, dtype=np.int64),
                np.array(dlt, dtype=np.int64),
            )
        )
        last = np.array(new_last, dtype=np.int64)
    for lv in levels:
        lv.vectors.setflags(write=False)
    return tuple(levels)


def sums_over_level(mat, levels, m=4):
    """``mat @ x`` for every x of the top level, built level by level."""
    mat = np.ascontiguousarray(mat, dtype=np.int64)
    vals = np.zeros((1, mat.shape[0]), dtype=np.int64)
    for lv in levels[1:]:
        vals = kernels.intermediate_sums(mat, vals, lv.parent, lv.coord, lv.delta, m)
    return vals


def singleton_bound(n, k1, k2):
    """Upper bound 2 (n - ceil(k1 + k2/2) + 1) on the minimum Lee distance."""
    ceil_dim = k1 + (k2 + 1) // 2
    return 2 * (n - ceil_dim + 1)


def gv_rhs(n, d):
    """4^n / sum_{j<d} C(2n, j): a Lee code of distance d and at least this size exists."""
    return Fraction(4 ** n, sum(comb(2 * n, j) for j in range(d)))


def gv_dimension(n, d):
    """Largest integer Z_4-dimension D with 4^D <= gv_rhs(n, d), and the real log_4."""
    rhs = gv_rhs(n, d)
    exact = (log2(rhs.numerator) - log2(rhs.denominator)) / 2
    dim = max(int(exact) + 1, 0)
    while dim > 0 and Fraction(4 ** dim) > rhs:
        dim -= 1
    return dim, exact


def rate(n, k1, k2):
    return Fraction(2 * k1 + k2, 2 * n)

"""Stern's information set decoding over F_2 (Hamming) and Z_4 (Lee).

Both decoders share one loop. Per iteration: draw a random information set I,
a zero window Z and the rest J, reduce [H | s] on the columns of Z and J,
build the two collision sets with intermediate sums, join them on the packed
key and extend matching pairs with early abort.
"""

from dataclasses import dataclass, field
from itertools import combinations
from math import ceil, comb

import numpy as np

from . import kernels
from .complexity import cost_stern_f2, cost_stern_z4
from .errors import BudgetExceeded, RetrySelection
from .lee import count_lee, enumerate_lee, random_lee_vector, sums_over_level, weight_levels
from .params import check_f2_params, check_z4_params
from .ring import (
    mat_mul,
    parity_from_generator,
    random_systematic_generator,
    reduce_with_syndrome,
)

__all__ = [
    "IsdInstance",
    "IsdResult",
    "CollisionSet",
    "stern",
    "stern_f2",
    "stern_z4",
    "default_max_iters",
    "build_collision_sets",
    "collide_and_extend",
    "BruteForceResult",
    "brute_force_decode",
    "plant_instance",
    "DEFAULT_BUDGET",
]

DEFAULT_BUDGET = 2_000_000


@dataclass(frozen=True, eq=False)
class IsdInstance:
    """Find e with H e^T = s and weight t.

    For ``field="F2"`` the code dimension is ``k1`` and ``k2 = 0``; H is
    (n - k) x n. For ``"Z4"`` H is (n - k1) x n and t is a Lee weight.
    """

    field: str
    h: np.ndarray
    s: np.ndarray
    t: int
    k1: int
    k2: int = 0

    def __post_init__(self):
        object.__setattr__(self, "field", self.field.upper())
        if self.field not in ("F2", "Z4"):
            raise ValueError(f"unknown field {self.field!r}")
        m = self.modulus
        h = np.array(self.h, dtype=np.int64)
        s = np.array(self.s, dtype=np.int64).ravel()
        if h.ndim != 2:
            raise ValueError("H must be a matrix")
        if (h.size and (h.min() < 0 or h.max() >= m)) or (s.size and (s.min() < 0 or s.max() >= m)):
            raise ValueError(f"entries must lie in 0..{m - 1}")
        if s.size != h.shape[0]:
            raise ValueError(f"syndrome has length {s.size}, H has {h.shape[0]} rows")
        if self.field == "F2" and self.k2:
            raise ValueError("binary instances have k2 = 0")
        if h.shape[0] != h.shape[1] - self.k1:
            raise ValueError(f"H must have n - k1 = {h.shape[1] - self.k1} rows, got {h.shape[0]}")
        if self.k1 + self.k2 > h.shape[1] or self.t < 0:
            raise ValueError("invalid code type or weight")
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "s", s)

    @property
    def n(self):
        return self.h.shape[1]

    @property
    def k(self):
        return self.k1 + self.k2

    @property
    def modulus(self):
        return 2 if self.field == "F2" else 4

    def weight(self, e):
        e = np.asarray(e, dtype=np.int64)
        m = self.modulus
        return int(np.minimum(e, m - e).sum())

    def is_solution(self, e):
        e = np.asarray(e, dtype=np.int64)
        synd = mat_mul(self.h, e.reshape(-1, 1), self.modulus)[:, 0]
        return bool(np.array_equal(synd, self.s)) and self.weight(e) == self.t


@dataclass
class IsdResult:
    status: str  # "found" | "not-found" | "no-information-set"
    error: np.ndarray | None
    iterations: int
    retries: int
    max_iters: int
    diagnostic: str = ""
    trace: list = field(default_factory=list)

    @property
    def found(self):
        return self.status == "found"


@dataclass(frozen=True, eq=False)
class CollisionSet:
    """Keys (ell entries mod m, k2 bits) and the weight-v patterns they came from."""

    top: np.ndarray
    bottom: np.ndarray
    patterns: np.ndarray

    def __len__(self):
        return self.patterns.shape[0]


def build_collision_sets(a, c, s1, s3, m1, v, m=4):
    """Sets S and T of the collision step.

    ``a`` (ell x k) and ``c`` (k2 x k, binary) are in information-set order
    with X = the first ``m1`` columns and Y = the rest. S holds
    (A e_X, C e_X mod 2, e_X) and T holds (s1 - A e_Y, s3 - C e_Y mod 2, e_Y)
    over all weight-v patterns. The k2 part is the mod-2 image of 2C e and 2s3.
    """
    a = np.asarray(a, dtype=np.int64)
    c = np.asarray(c, dtype=np.int64).reshape(-1, a.shape[1])
    ell = a.shape[0]
    k = a.shape[1]
    m2 = k - m1
    stacked = np.vstack([a, c])
    lx = weight_levels(m1, v, m)
    ly = weight_levels(m2, v, m)
    sx = sums_over_level(stacked[:, :m1], lx, m)
    sy = sums_over_level(stacked[:, m1:], ly, m)
    s1 = np.asarray(s1, dtype=np.int64)
    s3 = np.asarray(s3, dtype=np.int64)
    S = CollisionSet(sx[:, :ell] % m, sx[:, ell:] % 2, lx[-1].vectors)
    T = CollisionSet((s1[None, :] - sy[:, :ell]) % m, (s3[None, :] - sy[:, ell:]) % 2, ly[-1].vectors)
    return S, T


def _pack(top, bottom, m):
    """Integer keys, or None if they do not fit in 62 bits."""
    ell, k2 = top.shape[1], bottom.shape[1]
    bits = ell * (m.bit_length() - 1) + k2
    if bits > 62:
        return None
    key = np.zeros(top.shape[0], dtype=np.int64)
    shift = m.bit_length() - 1
    for i in range(ell):
        key |= top[:, i] << (shift * i)
    for j in range(k2):
        key |= bottom[:, j] << (shift * ell + j)
    return key


def _keys(S, T, m):
    ks = _pack(S.top, S.bottom, m)
    kt = _pack(T.top, T.bottom, m)
    if ks is None:
        rows = np.vstack([np.hstack([S.top, S.bottom]), np.hstack([T.top, T.bottom])])
        _, ids = np.unique(rows, axis=0, return_inverse=True)
        ids = ids.ravel()
        ks, kt = ids[: len(S)], ids[len(S):]
    return ks, kt


def matching_pairs(S, T, m=4):
    """All (i, j) with equal keys, ordered by S index then T index."""
    ks, kt = _keys(S, T, m)
    order = np.argsort(kt, kind="stable")
    sorted_t = kt[order]
    lo = np.searchsorted(sorted_t, ks, side="left")
    hi = np.searchsorted(sorted_t, ks, side="right")
    counts = hi - lo
    if counts.sum() == 0:
        return np.zeros((0, 2), dtype=np.int64)
    si = np.repeat(np.arange(len(S)), counts)
    starts = np.repeat(lo, counts)
    offs = np.arange(counts.sum()) - np.repeat(np.cumsum(counts) - counts, counts)
    tj = order[starts + offs]
    return np.column_stack([si, tj])


def collide_and_extend(S, T, b, s2, t, v, m=4, chunk=1 << 15):
    """First colliding pair whose completion s2 - B e1 has weight t - 2v.

    Returns ``(e1, e2)`` in information-set order / J order, or None.
    """
    pairs = matching_pairs(S, T, m)
    if pairs.shape[0] == 0:
        return None
    b = np.ascontiguousarray(b, dtype=np.int64)
    s2 = np.ascontiguousarray(s2, dtype=np.int64)
    target = t - 2 * v
    for start in range(0, pairs.shape[0], chunk):
        block = pairs[start:start + chunk]
        e1 = np.ascontiguousarray(
            np.hstack([S.patterns[block[:, 0]], T.patterns[block[:, 1]]]), dtype=np.int64
        )
        hit = kernels.first_extension(b, s2, e1, target, m)
        if hit >= 0:
            e = e1[hit]
            e2 = (s2 - b @ e) % m
            return e, e2
    return None


def default_max_iters(inst, params, cost_model="paper-2bit", allow_lee_v=False):
    """ceil(50 / success probability) from the cost model."""
    if inst.field == "F2":
        est = cost_stern_f2(inst.n, inst.k1, inst.t, params)
    else:
        est = cost_stern_z4(inst.n, inst.k1, inst.k2, inst.t, params, cost_model, allow_lee_v=allow_lee_v)
    if not est.attainable:
        return 0
    return ceil(50 / est.success_prob)


def stern(inst, params, rng, max_iters=None, max_retries=1000, allow_lee_v=False, record_trace=False):
    """Run Stern's algorithm until success or ``max_iters`` iterations.

    An iteration counts only when the drawn split admits the transform; failed
    draws are retried up to ``max_retries`` times in a row before giving up
    with status ``"no-information-set"``.
    """
    n, k, t, m = inst.n, inst.k, inst.t, inst.modulus
    if inst.field == "F2":
        check_f2_params(n, k, t, params)
    else:
        check_z4_params(n, inst.k1, inst.k2, t, params, allow_lee_v=allow_lee_v)
    if max_iters is None:
        max_iters = default_max_iters(inst, params, allow_lee_v=allow_lee_v)
    v, ell, m1 = params.v, params.ell, params.m1
    nz = n - k - ell  # |J|
    res = IsdResult("not-found", None, 0, 0, max_iters)
    streak = 0
    while res.iterations < max_iters:
        perm = rng.permutation(n)
        info, zero, rest = perm[:k], perm[k:k + ell], perm[k + ell:]
        try:
            uh, us = reduce_with_syndrome(inst.h, inst.s, info, zero, rest, m)
        except RetrySelection:
            res.retries += 1
            streak += 1
            if streak > max_retries:
                res.status = "no-information-set"
                res.diagnostic = f"{max_retries} consecutive selections were not information sets"
                return res
            continue
        streak = 0
        order = rng.permutation(info)  # X = order[:m1], Y = order[m1:]
        res.iterations += 1
        if record_trace:
            res.trace.append((tuple(int(i) for i in order), tuple(int(i) for i in zero)))
        resid = us[ell + nz:]
        if (resid & 1).any():
            res.diagnostic = "syndrome is not in the image of H"
            return res
        a = uh[:ell][:, order]
        b = uh[ell:ell + nz][:, order]
        c = uh[ell + nz:][:, order] // 2
        S, T = build_collision_sets(a, c, us[:ell], resid // 2, m1, v, m)
        hit = collide_and_extend(S, T, b, us[ell:ell + nz], t, v, m)
        if hit is None:
            continue
        e1, e2 = hit
        e = np.zeros(n, dtype=np.int64)
        e[order] = e1
        e[rest] = e2
        if not inst.is_solution(e):
            raise AssertionError("decoder produced an invalid solution")
        res.status = "found"
        res.error = e
        return res
    return res


def stern_f2(inst, params, rng, max_iters=None, **kw):
    if inst.field != "F2":
        raise ValueError("stern_f2 needs a binary instance")
    return stern(inst, params, rng, max_iters, **kw)


def stern_z4(inst, params, rng, max_iters=None, **kw):
    if inst.field != "Z4":
        raise ValueError("stern_z4 needs a Z4 instance")
    return stern(inst, params, rng, max_iters, **kw)


@dataclass
class BruteForceResult:
    solutions: dict  # weight -> list of vectors
    scanned: dict  # weight -> number of candidates examined

    @property
    def minimal(self):
        if not self.solutions:
            return []
        return self.solutions[min(self.solutions)]

    def all(self):
        return [e for w in sorted(self.solutions) for e in self.solutions[w]]


def _hamming_vectors(n, w):
    for supp in combinations(range(n), w):
        v = np.zeros(n, dtype=np.int64)
        v[list(supp)] = 1
        yield v


def brute_force_decode(inst, budget=DEFAULT_BUDGET):
    """Every e of weight <= t with H e^T = s, by exhaustive enumeration."""
    n, m = inst.n, inst.modulus
    sizes = {
        w: (comb(n, w) if inst.field == "F2" else count_lee(n, w)) for w in range(inst.t + 1)
    }
    total = sum(sizes.values())
    if total > budget:
        raise BudgetExceeded(f"{total} candidates exceed the enumeration budget {budget}")
    out = BruteForceResult({}, {})
    gen = _hamming_vectors if inst.field == "F2" else enumerate_lee
    for w in range(inst.t + 1):
        vecs = list(gen(n, w))
        out.scanned[w] = len(vecs)
        if not vecs:
            continue
        cand = np.array(vecs, dtype=np.int64)
        synd = (cand @ inst.h.T) % m
        hits = np.flatnonzero((synd == inst.s[None, :]).all(axis=1))
        if hits.size:
            out.solutions[w] = [cand[i] for i in hits]
    return out


def plant_instance(field_, n, k1, k2, t, rng, unique=False, budget=DEFAULT_BUDGET, max_tries=1000):
    """Random code with a planted weight-t error.

    Returns ``(instance, error)``. With ``unique`` the draw is repeated until
    brute force confirms the error is the only solution of weight <= t.
    """
    field_ = field_.upper()
    for _ in range(max_tries):
        if field_ == "F2":
            if k2:
                raise ValueError("binary codes have k2 = 0")
            a = rng.integers(0, 2, size=(n - k1, k1), dtype=np.int64)
            h = np.hstack([a, np.eye(n - k1, dtype=np.int64)])[:, np.argsort(rng.permutation(n))]
            e = np.zeros(n, dtype=np.int64)
            e[rng.choice(n, size=t, replace=False)] = 1
            m = 2
        else:
            sg = random_systematic_generator(n, k1, k2, rng)
            h = parity_from_generator(sg).expand()
            e = random_lee_vector(n, t, rng)
            m = 4
        s = (h @ e) % m
        inst = IsdInstance(field_, h, s, t, k1, k2)
        if not unique:
            return inst, e
        sols = brute_force_decode(inst, budget).all()
        if len(sols) == 1:
            return inst, e
    raise RuntimeError(f"no unique instance found in {max_tries} draws")

"""Dense linear algebra over Z_4 (and its F_2 sub-view).

Matrices and vectors are plain ``numpy.int64`` arrays with entries in
``{0, .., m-1}``; ``m`` is 4 unless stated otherwise.  Column permutations are
kept as index arrays ``perm`` with the convention that column ``j`` of a
permuted (systematic) matrix is column ``perm[j]`` of the original one.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

import numpy as np

from . import kernels
from .errors import RetrySelection, SingularMatrixError

__all__ = [
    "as_ring",
    "mat_mul",
    "CodeType",
    "SystematicGenerator",
    "SystematicParityCheck",
    "quaternary_systematic_form",
    "parity_from_generator",
    "find_transform",
    "reduce_with_syndrome",
    "is_information_set",
    "permutation_matrix",
    "random_permutation",
    "random_invertible",
    "random_block_invertible",
    "random_systematic_generator",
    "inverse",
    "is_invertible",
    "codewords",
]


def as_ring(x, m=4, ndim=None):
    """Validate ``x`` as an integer array over Z_m and return an int64 copy.

    Entries outside ``{0, .., m-1}`` are rejected rather than reduced.
    """
    arr = np.array(x, dtype=np.int64)
    if ndim is not None and arr.ndim != ndim:
        raise ValueError(f"expected a {ndim}-d array, got shape {arr.shape}")
    if arr.size and (arr.min() < 0 or arr.max() >= m):
        raise ValueError(f"entries must lie in 0..{m - 1}")
    return arr


def mat_mul(a, b, m=4):
    """Exact product ``a @ b`` reduced mod ``m``."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if a.ndim != 2 or b.ndim != 2:
        raise ValueError("mat_mul expects 2-d arrays")
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"dimension mismatch: {a.shape} @ {b.shape}")
    return kernels.matmul_mod(np.ascontiguousarray(a), np.ascontiguousarray(b), m)


@dataclass(frozen=True)
class CodeType:
    """Length ``n`` and type 4^k1 2^k2 of a quaternary code."""

    n: int
    k1: int
    k2: int

    def __post_init__(self):
        if self.n < 1 or self.k1 < 0 or self.k2 < 0 or self.k1 + self.k2 > self.n:
            raise ValueError(f"invalid code type {self}")

    @property
    def cardinality(self):
        return 4 ** self.k1 * 2 ** self.k2

    @property
    def redundancy(self):
        """Number of coordinates outside an information set, n - k1 - k2."""
        return self.n - self.k1 - self.k2

    @property
    def z4_dimension(self):
        return Fraction(2 * self.k1 + self.k2, 2)


@dataclass(frozen=True, eq=False)
class SystematicGenerator:
    """Blocks of ``[[I, A, B], [0, 2I, 2C]]`` plus the column permutation."""

    code_type: CodeType
    a: np.ndarray  # k1 x k2 over Z_2
    b: np.ndarray  # k1 x (n-k1-k2) over Z_4
    c: np.ndarray  # k2 x (n-k1-k2) over Z_2
    col_perm: np.ndarray

    def matrix(self):
        """Generator in permuted (systematic) coordinates."""
        n, k1, k2 = self.code_type.n, self.code_type.k1, self.code_type.k2
        top = np.hstack([np.eye(k1, dtype=np.int64), self.a, self.b])
        bottom = np.hstack(
            [np.zeros((k2, k1), dtype=np.int64), 2 * np.eye(k2, dtype=np.int64), 2 * self.c]
        )
        return np.vstack([top, bottom]).reshape(k1 + k2, n)

    def expand(self):
        """Generator in the original coordinates."""
        g = self.matrix()
        out = np.zeros_like(g)
        out[:, self.col_perm] = g
        return out

    def info_set(self):
        k = self.code_type.k1 + self.code_type.k2
        return np.sort(self.col_perm[:k])


@dataclass(frozen=True, eq=False)
class SystematicParityCheck:
    """Blocks of ``[[D, E, I], [2F, 2I, 0]]`` plus the column permutation."""

    code_type: CodeType
    d: np.ndarray  # (n-k1-k2) x k1 over Z_4
    e: np.ndarray  # (n-k1-k2) x k2 over Z_2
    f: np.ndarray  # k2 x k1 over Z_2
    col_perm: np.ndarray

    def matrix(self):
        k1, k2 = self.code_type.k1, self.code_type.k2
        r = self.code_type.redundancy
        top = np.hstack([self.d, self.e, np.eye(r, dtype=np.int64)])
        bottom = np.hstack(
            [2 * self.f, 2 * np.eye(k2, dtype=np.int64), np.zeros((k2, r), dtype=np.int64)]
        )
        return np.vstack([top, bottom]).reshape(r + k2, self.code_type.n) % 4

    def expand(self):
        h = self.matrix()
        out = np.zeros_like(h)
        out[:, self.col_perm] = h
        return out


def quaternary_systematic_form(g):
    """Bring a Z_4 generator matrix to quaternary systematic form.

    Unit pivots are taken first, sweeping columns left to right (lowest row
    wins); the remaining rows are then all even and a second sweep takes
    pivots equal to 2. Dependent rows disappear. The input is not modified.
    """
    g = as_ring(g, 4, ndim=2).copy()
    rows, n = g.shape
    row = 0
    unit_cols = []
    for col in range(n):
        if row == rows:
            break
        cand = np.flatnonzero(g[row:, col] & 1)
        if cand.size == 0:
            continue
        piv = row + cand[0]
        if piv != row:
            g[[row, piv]] = g[[piv, row]]
        u = g[row, col]
        if u != 1:
            g[row] = (g[row] * u) % 4
        f = g[:, col].copy()
        f[row] = 0
        g = (g - np.outer(f, g[row])) % 4
        unit_cols.append(col)
        row += 1
    k1 = row
    # rows k1.. are all even now
    two_cols = []
    for col in range(n):
        if row == rows:
            break
        cand = np.flatnonzero(g[row:, col] == 2)
        if cand.size == 0:
            continue
        piv = row + cand[0]
        if piv != row:
            g[[row, piv]] = g[[piv, row]]
        # subtracting (x // 2) copies of a 2-pivot row leaves x mod 2 behind
        f = g[:, col] // 2
        f[row] = 0
        g = (g - np.outer(f, g[row])) % 4
        two_cols.append(col)
        row += 1
    k2 = row - k1
    used = set(unit_cols) | set(two_cols)
    rest = [c for c in range(n) if c not in used]
    perm = np.array(unit_cols + two_cols + rest, dtype=np.int64)
    sys = g[: k1 + k2][:, perm]
    a = sys[:k1, k1:k1 + k2]
    b = sys[:k1, k1 + k2:]
    c = sys[k1:, k1 + k2:] // 2
    return SystematicGenerator(CodeType(n, k1, k2), a, b, c, perm)


def parity_from_generator(sg):
    """Parity-check blocks D = -B^T - C^T A^T, E = C^T, F = A^T."""
    d = (-sg.b.T - sg.c.T @ sg.a.T) % 4
    return SystematicParityCheck(sg.code_type, d, sg.c.T.copy(), sg.a.T.copy(), sg.col_perm.copy())


def _check_split(h, info, zero, rest, m):
    rows, n = h.shape
    info, zero, rest = (np.asarray(x, dtype=np.int64).ravel() for x in (info, zero, rest))
    allidx = np.concatenate([info, zero, rest])
    if allidx.size != n or np.unique(allidx).size != n or allidx.min(initial=0) < 0 or allidx.max(initial=0) >= n:
        raise ValueError("I, Z, J must partition the column indices")
    k2 = info.size - (n - rows)
    if k2 < 0 or (m == 2 and k2 != 0):
        raise ValueError(f"|I| = {info.size} does not match a {rows} x {n} parity check")
    return info, zero, rest, k2


def _reduce(h, extra, info, zero, rest, m):
    info, zero, rest, k2 = _check_split(h, info, zero, rest, m)
    n = h.shape[1]
    aug = np.ascontiguousarray(np.hstack([h, extra]).astype(np.int64))
    cols = np.concatenate([zero, rest])
    done = kernels.gauss_jordan(aug, cols, m)
    if done < cols.size:
        raise RetrySelection(f"no unit pivot for column {int(cols[done])}")
    if m == 4 and k2 and (aug[cols.size:, info] & 1).any():
        raise ValueError("parity check is inconsistent with the declared code type")
    return aug[:, :n], aug[:, n:]


def find_transform(h, info, zero, rest, m=4):
    """Invertible U with (UH)_Z = (I;0;0), (UH)_J = (0;I;0), (UH)_I = (A;B;2C).

    ``zero`` is the window Z of size l and ``rest`` the set J. Raises
    :class:`RetrySelection` when the split does not admit such a U.
    """
    h = as_ring(h, m, ndim=2)
    return _reduce(h, np.eye(h.shape[0], dtype=np.int64), info, zero, rest, m)[1]


def reduce_with_syndrome(h, s, info, zero, rest, m=4):
    """Return (UH, Us) for the U of :func:`find_transform` without forming U."""
    h = np.asarray(h, dtype=np.int64)
    s = np.asarray(s, dtype=np.int64).reshape(-1, 1)
    uh, us = _reduce(h, s, info, zero, rest, m)
    return uh, us[:, 0]


def is_information_set(sg, info):
    """True iff projecting the code onto ``info`` keeps all of its codewords."""
    info = np.asarray(info, dtype=np.int64)
    ct = sg.code_type
    if info.size != ct.k1 + ct.k2 or np.unique(info).size != info.size:
        raise ValueError(f"information set must have {ct.k1 + ct.k2} distinct indices")
    sub = quaternary_systematic_form(sg.expand()[:, info])
    return (sub.code_type.k1, sub.code_type.k2) == (ct.k1, ct.k2)


def permutation_matrix(perm):
    """Matrix P with P[i, perm[i]] = 1, so (x P)[perm[i]] = x[i]."""
    perm = np.asarray(perm, dtype=np.int64)
    p = np.zeros((perm.size, perm.size), dtype=np.int64)
    p[np.arange(perm.size), perm] = 1
    return p


def random_permutation(n, rng):
    return permutation_matrix(rng.permutation(n))


def inverse(mat, m=4):
    """Two-sided inverse mod ``m``; raises :class:`SingularMatrixError`."""
    mat = as_ring(mat, m, ndim=2)
    k = mat.shape[0]
    if mat.shape != (k, k):
        raise ValueError("inverse needs a square matrix")
    aug = np.ascontiguousarray(np.hstack([mat, np.eye(k, dtype=np.int64)]))
    if kernels.gauss_jordan(aug, np.arange(k, dtype=np.int64), m) < k:
        raise SingularMatrixError("determinant is not a unit")
    return aug[:, k:].copy()


def is_invertible(mat, m=4):
    try:
        inverse(mat, m)
    except SingularMatrixError:
        return False
    return True


def random_invertible(k, rng, m=4):
    while True:
        mat = rng.integers(0, m, size=(k, k), dtype=np.int64)
        if is_invertible(mat, m):
            return mat


def random_block_invertible(k1, k2, rng):
    """diag(S1, S2) with S1, S2 invertible over Z_4."""
    s = np.zeros((k1 + k2, k1 + k2), dtype=np.int64)
    s[:k1, :k1] = random_invertible(k1, rng)
    s[k1:, k1:] = random_invertible(k2, rng)
    return s


def random_systematic_generator(n, k1, k2, rng, permute=True):
    """Uniformly random blocks A, B, C; a random column permutation if asked."""
    r = n - k1 - k2
    ct = CodeType(n, k1, k2)
    a = rng.integers(0, 2, size=(k1, k2), dtype=np.int64)
    b = rng.integers(0, 4, size=(k1, r), dtype=np.int64)
    c = rng.integers(0, 2, size=(k2, r), dtype=np.int64)
    perm = rng.permutation(n).astype(np.int64) if permute else np.arange(n, dtype=np.int64)
    return SystematicGenerator(ct, a, b, c, perm)


def codewords(sg):
    """All |C| codewords, one per row, in original coordinates.

    Messages run over Z_4^k1 x Z_2^k2, which encodes every codeword exactly once.
    """
    ct = sg.code_type
    msgs = _grid(4, ct.k1)
    low = _grid(2, ct.k2)
    full = np.hstack([np.repeat(msgs, low.shape[0], axis=0), np.tile(low, (msgs.shape[0], 1))])
    return mat_mul(full, sg.expand())


def _grid(base, k):
    if k == 0:
        return np.zeros((1, 0), dtype=np.int64)
    return np.array(list(product(range(base), repeat=k)), dtype=np.int64)

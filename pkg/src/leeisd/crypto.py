"""Quaternary McEliece and Niederreiter over desk-scale random codes.

The secret code is a random systematic code whose minimum Lee distance is
checked by enumerating all codewords; decoding is a complete syndrome table.
Both are only practical for tiny parameters, which is the point: every
operation can be verified exhaustively.
"""

from dataclasses import dataclass

import numpy as np

from .complexity import cost_stern_z4, optimize_params
from .errors import BudgetExceeded, DecryptionFailure, InfeasibleParams
from .isd import DEFAULT_BUDGET, IsdInstance, stern_z4
from .lee import count_lee, enumerate_lee, lee_weight, random_lee_vector
from .params import IsdParams
from .ring import (
    CodeType,
    codewords,
    inverse,
    mat_mul,
    parity_from_generator,
    quaternary_systematic_form,
    random_block_invertible,
    random_invertible,
    random_systematic_generator,
)

__all__ = [
    "SecretCode",
    "gen_secret_code",
    "secret_code_from_generator",
    "McEliecePublicKey",
    "McEliecePrivateKey",
    "McElieceKeyPair",
    "mceliece_keygen",
    "mceliece_encrypt",
    "mceliece_decrypt",
    "NiederreiterPublicKey",
    "NiederreiterPrivateKey",
    "NiederreiterKeyPair",
    "niederreiter_keygen",
    "niederreiter_encrypt",
    "niederreiter_decrypt",
    "sample_error",
    "public_key_free_entries",
    "AttackReport",
    "attack_self_test",
]


def _key(syndrome):
    return np.asarray(syndrome, dtype=np.uint8).tobytes()


@dataclass(frozen=True, eq=False)
class SecretCode:
    """A code with a verified minimum distance and its coset-leader table."""

    sg: object  # SystematicGenerator
    h: np.ndarray
    t: int
    table: dict
    dmin: int

    @property
    def code_type(self):
        return self.sg.code_type

    def decode_syndrome(self, syndrome):
        """Error of Lee weight <= t with this syndrome; DecryptionFailure if none."""
        e = self.table.get(_key(syndrome))
        if e is None:
            raise DecryptionFailure("syndrome has no coset leader of weight <= t")
        return e.copy()

    def decode(self, y):
        """Split a received word into (codeword, error)."""
        y = np.asarray(y, dtype=np.int64) % 4
        e = self.decode_syndrome(mat_mul(self.h, y.reshape(-1, 1))[:, 0])
        return (y - e) % 4, e

    def message_of(self, word):
        """Message (u1, u2) in Z_4^k1 x Z_2^k2 with word = (u1, u2) G."""
        ct = self.code_type
        sys = np.asarray(word, dtype=np.int64)[self.sg.col_perm]
        u1 = sys[: ct.k1]
        # columns k1..k1+k2 of the systematic form carry u1 A + 2 u2
        c2 = (sys[ct.k1 : ct.k1 + ct.k2] - u1 @ self.sg.a) % 4
        if (c2 & 1).any():
            raise DecryptionFailure("decoded word is not a codeword")
        return u1.copy(), (c2 // 2) % 2


def _min_lee_distance(sg):
    words = codewords(sg)
    wts = np.minimum(words, 4 - words).sum(axis=1)
    nonzero = wts[wts > 0]
    return int(nonzero.min()) if nonzero.size else 2 * sg.code_type.n + 1


def gen_secret_code(n, k1, k2, t, rng, budget=DEFAULT_BUDGET, max_tries=500):
    """Random code of type 4^k1 2^k2 with minimum Lee distance >= 2t + 1.

    Raises :class:`BudgetExceeded` when the codeword or error enumeration
    would exceed ``budget``, or when ``max_tries`` draws all fall short (the
    message then reports the best distance seen).
    """
    ct = CodeType(n, k1, k2)
    if t < 0:
        raise ValueError("t must be non-negative")
    n_errors = sum(count_lee(n, w) for w in range(t + 1))
    if n_errors > budget or ct.cardinality > budget:
        raise BudgetExceeded(
            f"enumeration needs {max(n_errors, ct.cardinality)} vectors, budget is {budget}"
        )
    best = -1
    for _ in range(max_tries):
        sg = random_systematic_generator(n, k1, k2, rng)
        dmin = _min_lee_distance(sg)
        best = max(best, dmin)
        if dmin >= 2 * t + 1:
            return secret_code_from_generator(sg, t, dmin)
    raise BudgetExceeded(
        f"no code with minimum Lee distance >= {2 * t + 1} in {max_tries} draws (best {best})"
    )


def secret_code_from_generator(sg, t, dmin=None):
    """Attach the syndrome table; ``dmin`` is recomputed when not given."""
    if dmin is None:
        dmin = _min_lee_distance(sg)
    if dmin < 2 * t + 1:
        raise ValueError(f"minimum Lee distance {dmin} cannot correct {t} errors")
    h = parity_from_generator(sg).expand()
    n = sg.code_type.n
    table = {}
    for w in range(t + 1):
        errs = list(enumerate_lee(n, w))
        if not errs:
            continue
        errs = np.array(errs, dtype=np.int64)
        synd = mat_mul(errs, h.T)
        for e, s in zip(errs, synd):
            key = _key(s)
            if key in table:
                raise AssertionError("two coset leaders share a syndrome")
            table[key] = e
    return SecretCode(sg, h, t, table, dmin)


def sample_error(n, t, rng, exact=True):
    """Uniform error of Lee weight exactly t, or uniform over weight <= t."""
    if exact:
        return random_lee_vector(n, t, rng)
    sizes = np.array([count_lee(n, w) for w in range(t + 1)], dtype=float)
    w = int(rng.choice(t + 1, p=sizes / sizes.sum()))
    return random_lee_vector(n, w, rng)


# McEliece


@dataclass(frozen=True, eq=False)
class McEliecePublicKey:
    n: int
    k1: int
    k2: int
    t: int
    g: np.ndarray  # S G P


@dataclass(frozen=True, eq=False)
class McEliecePrivateKey:
    s1: np.ndarray
    s2: np.ndarray
    perm: np.ndarray  # P[i, perm[i]] = 1
    code: SecretCode


@dataclass(frozen=True, eq=False)
class McElieceKeyPair:
    public: McEliecePublicKey
    private: McEliecePrivateKey


def _permute_columns(mat, perm):
    # M P with P[i, perm[i]] = 1
    out = np.zeros_like(mat)
    out[..., perm] = mat
    return out


def mceliece_keygen(code, rng, identity=False):
    """G' = S G P with S = diag(S1, S2) and P a random permutation."""
    ct = code.code_type
    if identity:
        s = np.eye(ct.k1 + ct.k2, dtype=np.int64)
        perm = np.arange(ct.n, dtype=np.int64)
    else:
        s = random_block_invertible(ct.k1, ct.k2, rng)
        perm = rng.permutation(ct.n).astype(np.int64)
    g = _permute_columns(mat_mul(s, code.sg.expand()), perm)
    pub = McEliecePublicKey(ct.n, ct.k1, ct.k2, code.t, g)
    priv = McEliecePrivateKey(s[: ct.k1, : ct.k1].copy(), s[ct.k1 :, ct.k1 :].copy(), perm, code)
    return McElieceKeyPair(pub, priv)


def _check_message(pub, x1, x2):
    x1 = np.asarray(x1, dtype=np.int64).ravel()
    x2 = np.asarray(x2, dtype=np.int64).ravel()
    if x1.size != pub.k1 or x2.size != pub.k2:
        raise ValueError(f"message must have {pub.k1} + {pub.k2} entries")
    if (x1.size and (x1.min() < 0 or x1.max() > 3)) or (x2.size and (x2.min() < 0 or x2.max() > 1)):
        raise ValueError("message needs x1 over Z4 and x2 over {0, 1}")
    return x1, x2


def mceliece_encrypt(pub, x1, x2, rng, error=None, exact=True):
    """y = (x1, x2) G' + e with wt_L(e) = t (or <= t when ``exact`` is False)."""
    x1, x2 = _check_message(pub, x1, x2)
    if error is None:
        error = sample_error(pub.n, pub.t, rng, exact)
    error = np.asarray(error, dtype=np.int64)
    if lee_weight(error) > pub.t:
        raise ValueError("error weight exceeds t")
    x = np.concatenate([x1, x2])
    return (mat_mul(x.reshape(1, -1), pub.g)[0] + error) % 4


def mceliece_decrypt(priv, y):
    """Return (x1, x2); DecryptionFailure if the word is not decodable."""
    code = priv.code
    y = np.asarray(y, dtype=np.int64)
    if y.size != code.code_type.n:
        raise ValueError(f"ciphertext must have length {code.code_type.n}")
    # y P^T undoes the column permutation
    word, _ = code.decode(y[priv.perm])
    u1, u2 = code.message_of(word)
    x1 = mat_mul(u1.reshape(1, -1), inverse(priv.s1))[0] if u1.size else u1
    # only S2 mod 2 acts on the order-2 rows
    x2 = mat_mul(u2.reshape(1, -1), inverse(priv.s2 % 2, 2), 2)[0] if u2.size else u2
    return x1, x2


# Niederreiter


@dataclass(frozen=True, eq=False)
class NiederreiterPublicKey:
    n: int
    k1: int
    k2: int
    t: int
    h: np.ndarray  # S^-1 H P^T


@dataclass(frozen=True, eq=False)
class NiederreiterPrivateKey:
    s: np.ndarray
    perm: np.ndarray
    code: SecretCode


@dataclass(frozen=True, eq=False)
class NiederreiterKeyPair:
    public: NiederreiterPublicKey
    private: NiederreiterPrivateKey


def niederreiter_keygen(code, rng, identity=False):
    """H' = S^-1 H P^T with S invertible over Z_4 and P a random permutation."""
    ct = code.code_type
    r = code.h.shape[0]
    if identity:
        s = np.eye(r, dtype=np.int64)
        perm = np.arange(ct.n, dtype=np.int64)
    else:
        s = random_invertible(r, rng)
        perm = rng.permutation(ct.n).astype(np.int64)
    # (H P^T)[:, j] = H[:, perm[j]]
    h = mat_mul(inverse(s), code.h[:, perm])
    pub = NiederreiterPublicKey(ct.n, ct.k1, ct.k2, code.t, h)
    return NiederreiterKeyPair(pub, NiederreiterPrivateKey(s, perm, code))


def niederreiter_encrypt(pub, x):
    x = np.asarray(x, dtype=np.int64).ravel()
    if x.size != pub.n or (x.size and (x.min() < 0 or x.max() > 3)):
        raise ValueError(f"plaintext must be a vector of Z4^{pub.n}")
    if lee_weight(x) > pub.t:
        raise ValueError(f"plaintext has Lee weight {lee_weight(x)} > t = {pub.t}")
    return mat_mul(pub.h, x.reshape(-1, 1))[:, 0]


def niederreiter_decrypt(priv, y):
    y = np.asarray(y, dtype=np.int64).ravel()
    if y.size != priv.s.shape[0]:
        raise ValueError(f"ciphertext must have length {priv.s.shape[0]}")
    # S y = H P^T x^T, and P^T x^T has weight <= t
    e = priv.code.decode_syndrome(mat_mul(priv.s, y.reshape(-1, 1))[:, 0])
    x = np.zeros_like(e)
    x[np.argsort(priv.perm)] = e
    return x


def public_key_free_entries(g):
    """Bits of the non-prescribed entries of the systematic form of ``g``.

    A (k1 x k2) and C (k2 x r) are binary, B (k1 x r) is quaternary; the
    identity blocks and zeros are fixed and carry nothing.
    """
    sg = quaternary_systematic_form(g)
    ct = sg.code_type
    return ct.k1 * ct.k2 + 2 * ct.k1 * ct.redundancy + ct.k2 * ct.redundancy, ct


# generic-attack check


@dataclass
class AttackReport:
    found: bool
    matches: bool
    iterations: int
    retries: int
    expected_iterations: float
    params: IsdParams
    fallback: bool = False


def _attack_instance(keypair, rng):
    pub = keypair.public
    if isinstance(pub, McEliecePublicKey):
        x1 = rng.integers(0, 4, size=pub.k1, dtype=np.int64)
        x2 = rng.integers(0, 2, size=pub.k2, dtype=np.int64)
        e = sample_error(pub.n, pub.t, rng)
        y = mceliece_encrypt(pub, x1, x2, rng, error=e)
        h = parity_from_generator(quaternary_systematic_form(pub.g)).expand()
        return IsdInstance("Z4", h, mat_mul(h, y.reshape(-1, 1))[:, 0], pub.t, pub.k1, pub.k2), e
    x = sample_error(pub.n, pub.t, rng)
    return IsdInstance("Z4", pub.h, niederreiter_encrypt(pub, x), pub.t, pub.k1, pub.k2), x


def attack_self_test(keypair, rng, params=None):
    """Encrypt a random message and recover the error with Stern over Z_4.

    The parameters default to the optimiser's choice. If that run fails the
    attack falls back to v = 0, which reaches every error pattern, and the
    report says so.
    """
    inst, e = _attack_instance(keypair, rng)
    ct = (inst.n, inst.k1, inst.k2, inst.t)

    def run(p):
        est = cost_stern_z4(*ct, p)
        res = stern_z4(inst, p, rng)
        return res, float(est.expected_iterations)

    if params is None:
        try:
            params = optimize_params("Z4", *ct, strategy="full").params
        except InfeasibleParams:
            params = IsdParams(0, 0, (inst.k + 1) // 2, inst.k // 2)
    res, expected = run(params)
    fallback = False
    if not res.found and params.v:
        fallback = True
        params = IsdParams(0, 0, params.m1, params.m2)
        res, expected = run(params)
    matches = bool(res.found and np.array_equal(res.error, e))
    return AttackReport(res.found, matches, res.iterations, res.retries, expected, params, fallback)

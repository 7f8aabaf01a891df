"""Line-oriented text formats for matrices, instances, keys and messages.

Matrix: ``Z4MATRIX r c`` (or ``F2MATRIX``) then r lines of c space-separated
digits. Permutation: ``PERM n`` then one line with the images of 1..n.
Vectors are single lines of digits. Output is byte-deterministic; parse
errors carry the 1-based line number.
"""

import numpy as np

from .crypto import (
    McElieceKeyPair,
    McEliecePrivateKey,
    McEliecePublicKey,
    NiederreiterKeyPair,
    NiederreiterPrivateKey,
    NiederreiterPublicKey,
    secret_code_from_generator,
)
from .errors import FormatError
from .isd import IsdInstance
from .ring import CodeType, SystematicGenerator

__all__ = [
    "format_matrix",
    "format_vector",
    "format_perm",
    "parse_matrix",
    "parse_vector",
    "format_instance",
    "parse_instance",
    "format_answer",
    "parse_answer",
    "format_public_key",
    "format_private_key",
    "parse_key",
    "Reader",
]

_MATRIX_HEADERS = {"Z4MATRIX": 4, "F2MATRIX": 2}


def format_vector(v):
    return " ".join(str(int(x)) for x in np.asarray(v).ravel())


def format_matrix(mat, m=4):
    mat = np.asarray(mat, dtype=np.int64)
    head = "Z4MATRIX" if m == 4 else "F2MATRIX"
    lines = [f"{head} {mat.shape[0]} {mat.shape[1]}"]
    lines += [format_vector(row) for row in mat]
    return "\n".join(lines)


def format_perm(perm):
    perm = np.asarray(perm, dtype=np.int64)
    return f"PERM {perm.size}\n" + format_vector(perm + 1)


class Reader:
    """Cursor over the lines of a text file; keeps line numbers for errors."""

    def __init__(self, text):
        self.lines = text.splitlines()
        # a trailing newline is not an extra empty line, but trailing blanks are ignored
        while self.lines and not self.lines[-1].strip():
            self.lines.pop()
        self.pos = 0

    @property
    def lineno(self):
        return self.pos + 1

    def next(self, what):
        if self.pos >= len(self.lines):
            raise FormatError(f"unexpected end of input, expected {what}", self.lineno)
        line = self.lines[self.pos]
        self.pos += 1
        return line

    def header(self, keyword, n_ints, choices=None):
        """Parse ``KEYWORD i1 .. in``; ``choices`` allows one word after the keyword."""
        line = self.next(keyword)
        parts = line.split()
        want = keyword if isinstance(keyword, tuple) else (keyword,)
        if not parts or parts[0] not in want:
            raise FormatError(f"expected {' or '.join(want)} header, got {line.strip()[:40]!r}", self.pos)
        rest = parts[1:]
        word = None
        if choices is not None:
            if not rest or rest[0] not in choices:
                raise FormatError(f"expected one of {', '.join(choices)} after {parts[0]}", self.pos)
            word, rest = rest[0], rest[1:]
        if len(rest) != n_ints:
            raise FormatError(f"{parts[0]} header needs {n_ints} integers, got {len(rest)}", self.pos)
        try:
            ints = [int(x) for x in rest]
        except ValueError:
            raise FormatError(f"non-integer field in {parts[0]} header", self.pos) from None
        if any(x < 0 for x in ints):
            raise FormatError(f"negative field in {parts[0]} header", self.pos)
        return parts[0], word, ints

    def vector(self, length, m, what="vector"):
        line = self.next(what)
        toks = line.split()
        if len(toks) != length:
            raise FormatError(f"{what} needs {length} entries, got {len(toks)}", self.pos)
        try:
            vals = [int(x) for x in toks]
        except ValueError:
            raise FormatError(f"non-digit entry in {what}", self.pos) from None
        if any(x < 0 or x >= m for x in vals):
            raise FormatError(f"{what} entries must lie in 0..{m - 1}", self.pos)
        return np.array(vals, dtype=np.int64)

    def matrix(self, m=None, shape=None):
        head, _, (r, c) = self.header(tuple(_MATRIX_HEADERS), 2)
        mod = _MATRIX_HEADERS[head]
        if m is not None and mod != m:
            raise FormatError(f"expected a {'Z4' if m == 4 else 'F2'} matrix, got {head}", self.pos)
        if shape is not None and (r, c) != tuple(shape):
            raise FormatError(f"matrix must be {shape[0]} x {shape[1]}, header says {r} x {c}", self.pos)
        rows = [self.vector(c, mod, "matrix row") for _ in range(r)]
        return np.array(rows, dtype=np.int64).reshape(r, c)

    def perm(self, n=None):
        _, _, (size,) = self.header("PERM", 1)
        if n is not None and size != n:
            raise FormatError(f"permutation must have size {n}", self.pos)
        img = self.vector(size, size + 1, "permutation") - 1
        if size and (img.min() < 0 or np.unique(img).size != size):
            raise FormatError("permutation images must be 1..n, each once", self.pos)
        return img

    def end(self):
        if self.pos < len(self.lines):
            raise FormatError("trailing content", self.lineno)


def parse_matrix(text, m=None):
    rd = Reader(text)
    mat = rd.matrix(m)
    rd.end()
    return mat


def parse_vector(text, length=None, m=4):
    rd = Reader(text)
    if length is None:
        toks = rd.lines[0].split() if rd.lines else []
        length = len(toks)
    v = rd.vector(length, m)
    rd.end()
    return v


# ISD instances


def format_instance(inst):
    head = f"ISD {inst.field} {inst.n} {inst.k1} {inst.k2} {inst.t}"
    body = format_matrix(inst.h, inst.modulus)
    return f"{head}\n{body}\nSYNDROME\n{format_vector(inst.s)}\n"


def parse_instance(text):
    rd = Reader(text)
    _, field_, (n, k1, k2, t) = rd.header("ISD", 4, choices=("Z4", "F2"))
    m = 4 if field_ == "Z4" else 2
    if k1 > n:
        raise FormatError("k1 exceeds n", 1)
    h = rd.matrix(m, (n - k1, n))
    rd.header("SYNDROME", 0)
    s = rd.vector(n - k1, m, "syndrome")
    rd.end()
    try:
        return IsdInstance(field_, h, s, t, k1, k2)
    except ValueError as exc:
        raise FormatError(str(exc), 1) from None


def format_answer(field_, e):
    e = np.asarray(e)
    return f"ANSWER {field_} {e.size}\n{format_vector(e)}\n"


def parse_answer(text):
    rd = Reader(text)
    _, field_, (n,) = rd.header("ANSWER", 1, choices=("Z4", "F2"))
    e = rd.vector(n, 4 if field_ == "Z4" else 2, "answer")
    rd.end()
    return e


# keys


def _code_blocks(code):
    sg = code.sg
    return [
        format_matrix(sg.a, 2),
        format_matrix(sg.b, 4),
        format_matrix(sg.c, 2),
        format_perm(sg.col_perm),
    ]


def _read_code(rd, n, k1, k2, t):
    r = n - k1 - k2
    a = rd.matrix(2, (k1, k2))
    b = rd.matrix(4, (k1, r))
    c = rd.matrix(2, (k2, r))
    perm = rd.perm(n)
    sg = SystematicGenerator(CodeType(n, k1, k2), a, b, c, perm)
    return secret_code_from_generator(sg, t)


def format_public_key(pub):
    if isinstance(pub, McEliecePublicKey):
        head, body = "Z4MCELIECE-PUBLIC", format_matrix(pub.g)
    elif isinstance(pub, NiederreiterPublicKey):
        head, body = "Z4NIEDERREITER-PUBLIC", format_matrix(pub.h)
    else:
        raise TypeError(f"not a public key: {type(pub).__name__}")
    return f"{head} {pub.n} {pub.k1} {pub.k2} {pub.t}\n{body}\n"


def format_private_key(keypair):
    pub, priv = keypair.public, keypair.private
    code = priv.code
    fields = f"{pub.n} {pub.k1} {pub.k2} {pub.t} {code.dmin}"
    if isinstance(keypair, McElieceKeyPair):
        blocks = [f"Z4MCELIECE-PRIVATE {fields}", format_matrix(priv.s1), format_matrix(priv.s2)]
    elif isinstance(keypair, NiederreiterKeyPair):
        blocks = [f"Z4NIEDERREITER-PRIVATE {fields}", format_matrix(priv.s)]
    else:
        raise TypeError(f"not a key pair: {type(keypair).__name__}")
    blocks.append(format_perm(priv.perm))
    blocks += _code_blocks(code)
    # the public part is stored too so that one file restores the whole pair
    blocks.append(format_public_key(pub).rstrip("\n"))
    return "\n".join(blocks) + "\n"


_KEY_HEADERS = (
    "Z4MCELIECE-PUBLIC",
    "Z4NIEDERREITER-PUBLIC",
    "Z4MCELIECE-PRIVATE",
    "Z4NIEDERREITER-PRIVATE",
)


def _read_public(rd, head, n, k1, k2, t):
    if head == "Z4MCELIECE-PUBLIC":
        return McEliecePublicKey(n, k1, k2, t, rd.matrix(4, (k1 + k2, n)))
    return NiederreiterPublicKey(n, k1, k2, t, rd.matrix(4, (n - k1, n)))


def parse_key(text):
    """Public key, or a full key pair for private-key files."""
    rd = Reader(text)
    first = rd.lines[0].split()[0] if rd.lines and rd.lines[0].split() else ""
    private = first.endswith("-PRIVATE")
    n_ints = 5 if private else 4
    head, _, ints = rd.header(_KEY_HEADERS, n_ints)
    n, k1, k2, t = ints[:4]
    if k1 + k2 > n:
        raise FormatError("k1 + k2 exceeds n", 1)
    if not private:
        pub = _read_public(rd, head, n, k1, k2, t)
        rd.end()
        return pub
    # the stored distance is informative; it is recomputed on load
    if head == "Z4MCELIECE-PRIVATE":
        s1 = rd.matrix(4, (k1, k1))
        s2 = rd.matrix(4, (k2, k2))
    else:
        s = rd.matrix(4, (n - k1, n - k1))
    perm = rd.perm(n)
    try:
        code = _read_code(rd, n, k1, k2, t)
    except (AssertionError, ValueError) as exc:
        raise FormatError(f"secret code: {exc}", rd.pos) from None
    pub_head, _, pub_ints = rd.header(_KEY_HEADERS[:2], 4)
    if pub_ints != [n, k1, k2, t] or pub_head.split("-")[0] != head.split("-")[0]:
        raise FormatError("embedded public key does not match the private key", rd.pos)
    pub = _read_public(rd, pub_head, n, k1, k2, t)
    rd.end()
    if head == "Z4MCELIECE-PRIVATE":
        return McElieceKeyPair(pub, McEliecePrivateKey(s1, s2, perm, code))
    return NiederreiterKeyPair(pub, NiederreiterPrivateKey(s, perm, code))

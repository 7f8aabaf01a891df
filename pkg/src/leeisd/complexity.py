"""Bit-operation cost of Stern's algorithm over F_2 and Z_4.

Every term is an exact integer or Fraction; ``security_bits`` is the only
floating-point quantity. Key sizes count the free entries of a systematic
public matrix.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property, partial
from fractions import Fraction
from math import comb, inf, log2

from .errors import InfeasibleParams
from .lee import gv_dimension, partial_binomial_sum, partial_lee_sum
from .params import IsdParams, check_f2_params, check_z4_params

__all__ = [
    "COST_MODELS",
    "CostEstimate",
    "ParamChoice",
    "cost_stern_f2",
    "cost_stern_z4",
    "optimize_params",
    "key_size_quaternary",
    "key_size_binary",
    "TableRow",
    "TableScan",
    "table_scan",
    "REFERENCE_KEY_SIZES",
    "log2_fraction",
]

# bit operations per Z_4 addition/multiplication
COST_MODELS = {"paper-2bit": 2, "lut-1bit": 1}

# Published key sizes that disagree with the closed-form count k1 k2 + (2k1 + k2)(n - k1 - k2).
REFERENCE_KEY_SIZES = {(425, 55, 370): 20335}

STRATEGIES = ("paper", "sweep", "full")


def log2_fraction(x):
    x = Fraction(x)
    if x <= 0:
        return -inf
    return log2(x.numerator) - log2(x.denominator)


@dataclass(frozen=True)
class CostEstimate:
    field: str
    n: int
    k1: int
    k2: int
    t: int
    params: IsdParams
    gauss_step: Fraction
    set_s: Fraction
    set_t: Fraction
    collision_step: Fraction
    success_prob: Fraction
    cost_model: str = "paper-2bit"

    @cached_property
    def iter_cost(self):
        return self.gauss_step + self.set_s + self.set_t + self.collision_step

    @property
    def attainable(self):
        return self.success_prob > 0

    @property
    def total_work(self):
        if not self.attainable:
            return inf
        return self.iter_cost / self.success_prob

    @cached_property
    def security_bits(self):
        if not self.attainable:
            return inf
        return log2_fraction(self.iter_cost) - log2_fraction(self.success_prob)

    @property
    def expected_iterations(self):
        return inf if not self.attainable else 1 / self.success_prob


@dataclass(frozen=True)
class ParamChoice:
    params: IsdParams
    estimate: CostEstimate
    strategy: str


def _isum(k, partial, m):
    # intermediate sums start from the free weight-one vectors; nothing to do for v = 0
    return k * max(partial - m, 0)


def cost_stern_f2(n, k, t, params, check=True):
    """Cost of binary Stern with parameters ``params`` on an [n, k] code, weight t."""
    if check:
        check_f2_params(n, k, t, params)
    v, ell, m1, m2 = params.v, params.ell, params.m1, params.m2
    s_size, t_size = comb(m1, v), comb(m2, v)
    gauss = Fraction((n - k) ** 2 * (n + 1))
    set_s = Fraction(_isum(ell, partial_binomial_sum(m1, v), m1))
    set_t = Fraction(_isum(ell, partial_binomial_sum(m2, v), m2) + ell * t_size)
    collision = Fraction(s_size * t_size * 2 * (t - 2 * v + 1) * (2 * v + 1), 2 ** ell)
    outside = comb(n - k - ell, t - 2 * v) if t >= 2 * v else 0
    prob = Fraction(s_size * t_size * outside, comb(n, t))
    return CostEstimate("F2", n, k, 0, t, params, gauss, set_s, set_t, collision, prob, "binary")


def cost_stern_z4(n, k1, k2, t, params, cost_model="paper-2bit", check=True, allow_lee_v=False):
    """Cost of Z_4 Stern on a code of type 4^k1 2^k2 and Lee weight t.

    ``cost_model`` picks the price of one Z_4 operation: 2 bit operations
    (``paper-2bit``) or 1 with lookup tables (``lut-1bit``); the k2 terms are
    binary work and do not scale.
    """
    if check:
        check_z4_params(n, k1, k2, t, params, allow_lee_v=allow_lee_v)
    op = COST_MODELS[cost_model]
    v, ell, m1, m2 = params.v, params.ell, params.m1, params.m2
    s_size, t_size = comb(2 * m1, v), comb(2 * m2, v)
    gauss = Fraction(op * (n - k1) ** 2 * (n + 1))
    set_s = Fraction(
        op * ell * partial_lee_sum(m1, v) + _isum(k2, partial_binomial_sum(m1, v), m1)
    )
    set_t = Fraction(
        op * ell * (partial_lee_sum(m2, v) + t_size)
        + _isum(k2, partial_binomial_sum(m2, v), m2)
        + k2 * t_size
    )
    # (8v + 2) bit operations per entry at 2 bits per ring operation
    per_entry = op * (4 * v + 1)
    collision = Fraction(s_size * t_size * (t - 2 * v + 1) * per_entry, 2 ** (k2 + 2 * ell))
    outside = comb(2 * (n - k1 - k2 - ell), t - 2 * v) if t >= 2 * v else 0
    prob = Fraction(s_size * t_size * outside, comb(2 * n, t))
    return CostEstimate("Z4", n, k1, k2, t, params, gauss, set_s, set_t, collision, prob, cost_model)


def _balanced_split_point(k, t):
    m1 = (k + 1) // 2
    m2 = k // 2
    v = max(0, min(m1, m2, (t - 1) // 2))
    return m1, m2, v


def _groups(field_, n, k1, k2, t, strategy, allow_lee_v):
    """(m1, m2, v, ell values) blocks; ell runs upwards inside each block."""
    k = k1 + k2
    if strategy in ("paper", "sweep"):
        m1, m2, v = _balanced_split_point(k, t)
        ells = [0] if strategy == "paper" else range(0, n - k - max(t - 2 * v, 0) + 1)
        yield m1, m2, v, ells
        return
    bal = (k + 1) // 2
    for m1 in range(max(bal - 2, 0), min(bal + 2, k) + 1):
        m2 = k - m1
        cap = min(m1, m2)
        if field_ == "Z4" and allow_lee_v:
            cap = 2 * cap
        for v in range(0, min(cap, t // 2) + 1):
            yield m1, m2, v, range(0, n - k - (t - 2 * v) + 1)


def _rank(choice):
    p = choice.params
    bal = (p.m1 + p.m2 + 1) // 2
    return (choice.estimate.security_bits, p.ell, p.v, abs(p.m1 - bal), p.m1)


def optimize_params(field_, n, k1, k2, t, strategy="paper", cost_model="paper-2bit", allow_lee_v=False):
    """Pick Stern parameters minimising the security level.

    ``paper``: m1 = ceil(k/2), m2 = floor(k/2), v = min(m1, m2, floor((t-1)/2))
    and ell = 0. ``sweep``: the same (m1, m2, v) with ell swept over its whole
    range. ``full``: every (v, ell) and m1 within 2 of the balanced split.
    For ``field_ == "F2"`` pass the dimension as ``k1`` and ``k2 = 0``.
    Raises :class:`InfeasibleParams` if no admissible point has nonzero
    success probability.
    """
    field_ = field_.upper()
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}; choose from {STRATEGIES}")
    if field_ == "F2" and k2:
        raise ValueError("binary codes have k2 = 0")
    best = best_rank = None
    for m1, m2, v, ells in _groups(field_, n, k1, k2, t, strategy, allow_lee_v):
        for ell in ells:
            p = IsdParams(v, ell, m1, m2)
            try:
                if field_ == "F2":
                    est = cost_stern_f2(n, k1, t, p)
                else:
                    est = cost_stern_z4(n, k1, k2, t, p, cost_model, allow_lee_v=allow_lee_v)
            except InfeasibleParams:
                continue
            if not est.attainable:
                break
            choice = ParamChoice(p, est, strategy)
            rank = _rank(choice)
            if best is None or rank < best_rank:
                best, best_rank = choice, rank
            # as ell grows the success probability drops and every term but the
            # collision step grows, so this floor bounds all larger ell
            floor_bits = log2_fraction(est.iter_cost - est.collision_step) - log2_fraction(est.success_prob)
            if floor_bits > best_rank[0]:
                break
    if best is None:
        raise InfeasibleParams(
            f"no feasible parameter point for {field_} n={n} k1={k1} k2={k2} t={t} ({strategy})"
        )
    return best


def key_size_quaternary(n, k1, k2):
    """Free bits of a systematic public matrix: k1 k2 + (2 k1 + k2)(n - k1 - k2)."""
    return k1 * k2 + (2 * k1 + k2) * (n - k1 - k2)


def key_size_binary(n, k):
    return k * (n - k)


@dataclass(frozen=True)
class TableRow:
    k1: int
    k2: int
    key_size: int
    choice: ParamChoice | None
    note: str = ""

    @cached_property
    def security_bits(self):
        return None if self.choice is None else self.choice.estimate.security_bits


@dataclass
class TableScan:
    n: int
    d: int
    t: int
    dim: int
    dim_exact: float
    strategy: str
    cost_model: str
    rows: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    skipped: dict = field(default_factory=dict)  # reason -> k1 values

    def first_reaching(self, bits):
        for row in self.rows:
            if row.choice is not None and row.security_bits >= bits:
                return row
        return None


def _table_row(n, dim, t, k1, strategy="paper", cost_model="paper-2bit"):
    k2 = 2 * (dim - k1)
    if k2 < 0:
        return None, "k2 would be negative"
    if k1 + k2 > n:
        return None, "k1 + k2 exceeds n"
    key = key_size_quaternary(n, k1, k2)
    note = ""
    ref = REFERENCE_KEY_SIZES.get((n, k1, k2))
    if ref is not None and ref != key:
        note = f"reference key size {ref} differs from formula value {key}"
    try:
        choice = optimize_params("Z4", n, k1, k2, t, strategy, cost_model)
    except InfeasibleParams as exc:
        return TableRow(k1, k2, key, None, str(exc)), None
    return TableRow(k1, k2, key, choice, note), None


def table_scan(
    n, d, k1_values=None, dim=None, strategy="paper", cost_model="paper-2bit", threads=1, stop_bits=None
):
    """Key size and optimised security for k1 at a fixed Z_4-dimension k1 + k2/2.

    The dimension defaults to the largest integer supported by the
    Gilbert-Varshamov bound for (n, d); t = floor((d - 1) / 2). Without
    ``k1_values`` the scan runs over k1 = 1 .. dim - 1. With ``stop_bits``
    the scan ends at the first row whose security reaches that level.
    ``threads > 1`` evaluates rows in worker processes; the result does not
    depend on the worker count.
    """
    gv_dim, gv_exact = gv_dimension(n, d)
    if dim is None:
        dim = gv_dim
    t = (d - 1) // 2
    scan = TableScan(n, d, t, dim, gv_exact, strategy, cost_model)
    if d > 2 * n:
        scan.notes.append(f"d = {d} exceeds the maximum Lee weight 2n = {2 * n}")
    if dim < 1:
        scan.notes.append(f"GV bound supports no positive Z4-dimension for n={n}, d={d}")
        return scan
    if k1_values is None:
        k1_values = range(1, dim)
    ks = list(k1_values)
    work = partial(_table_row, n, dim, t, strategy=strategy, cost_model=cost_model)
    step = max(threads, 1) * 4 if stop_bits is not None else max(len(ks), 1)
    pool = ProcessPoolExecutor(threads) if threads > 1 else None
    try:
        for start in range(0, len(ks), step):
            chunk = ks[start:start + step]
            results = list(pool.map(work, chunk)) if pool else [work(k1) for k1 in chunk]
            for (row, skipped), k1 in zip(results, chunk):
                if row is None:
                    scan.skipped.setdefault(skipped, []).append(k1)
                    continue
                scan.rows.append(row)
                if row.note:
                    scan.notes.append(f"k1={row.k1}: {row.note}")
                if stop_bits is not None and row.choice is not None and row.security_bits >= stop_bits:
                    scan.notes.append(f"scan stopped at k1={row.k1}, the first row reaching {stop_bits} bits")
                    return _close(scan)
    finally:
        if pool:
            pool.shutdown()
    return _close(scan)


def _ranges(values):
    out, start, prev = [], None, None
    for x in values:
        if start is None:
            start = prev = x
        elif x == prev + 1:
            prev = x
        else:
            out.append((start, prev))
            start = prev = x
    if start is not None:
        out.append((start, prev))
    return ", ".join(str(a) if a == b else f"{a}..{b}" for a, b in out)


def _close(scan):
    for reason, ks in scan.skipped.items():
        scan.notes.insert(0, f"k1={_ranges(ks)}: {reason}; skipped")
    return scan

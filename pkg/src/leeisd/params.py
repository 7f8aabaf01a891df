"""Stern tuning knobs and their admissibility rules."""

from dataclasses import dataclass

from .errors import InfeasibleParams

__all__ = ["IsdParams", "check_f2_params", "check_z4_params"]


@dataclass(frozen=True, order=True)
class IsdParams:
    """Per-side collision weight ``v``, zero-window size ``ell``, split ``m1 + m2``."""

    v: int
    ell: int
    m1: int
    m2: int


def check_f2_params(n, k, t, p):
    """Raise :class:`InfeasibleParams` unless ``p`` is a valid binary Stern input."""
    problems = []
    if min(p.v, p.ell, p.m1, p.m2, t) < 0:
        problems.append("parameters must be non-negative")
    if p.m1 + p.m2 != k:
        problems.append(f"m1 + m2 = {p.m1 + p.m2} != k = {k}")
    if p.v > p.m1 or p.v > p.m2:
        problems.append(f"v = {p.v} exceeds min(m1, m2) = {min(p.m1, p.m2)}")
    if p.ell > n - k:
        problems.append(f"ell = {p.ell} exceeds n - k = {n - k}")
    if 2 * p.v > t:
        problems.append(f"2v = {2 * p.v} exceeds t = {t}")
    if t - 2 * p.v > n - k - p.ell:
        problems.append(f"t - 2v = {t - 2 * p.v} exceeds n - k - ell = {n - k - p.ell}")
    if problems:
        raise InfeasibleParams("; ".join(problems))


def check_z4_params(n, k1, k2, t, p, allow_lee_v=False):
    """Raise :class:`InfeasibleParams` unless ``p`` is a valid Z_4 Stern input.

    By default ``v <= min(m1, m2)``. With ``allow_lee_v`` the cap is the largest
    Lee weight a side can carry, ``2 * min(m1, m2)``.
    """
    problems = []
    k = k1 + k2
    if min(p.v, p.ell, p.m1, p.m2, t) < 0:
        problems.append("parameters must be non-negative")
    if p.m1 + p.m2 != k:
        problems.append(f"m1 + m2 = {p.m1 + p.m2} != k1 + k2 = {k}")
    cap = 2 * min(p.m1, p.m2) if allow_lee_v else min(p.m1, p.m2)
    if p.v > cap:
        problems.append(f"v = {p.v} exceeds {cap}")
    if 2 * p.v > t:
        problems.append(f"2v = {2 * p.v} exceeds t = {t}")
    if p.ell > n - k:
        problems.append(f"ell = {p.ell} exceeds n - k1 - k2 = {n - k}")
    if t - 2 * p.v > n - k - p.ell:
        problems.append(f"t - 2v = {t - 2 * p.v} exceeds n - k1 - k2 - ell = {n - k - p.ell}")
    if problems:
        raise InfeasibleParams("; ".join(problems))

"""Extended rationals: exact ``Fraction`` values plus a single ``INF``.

``INF`` is ``math.inf``; it compares correctly against fractions and is only
ever produced as a value, never used as a multiplier, so ``0 * inf`` cannot
arise from library code.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

INF = math.inf

ExtRat = Union[Fraction, float]


def is_inf(x) -> bool:
    return isinstance(x, float) and x == INF


def ext(x) -> ExtRat:
    """Coerce ints, fractions, strings ('inf', '3/2', '0.5') to an extended rational."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not coordinates")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        if x == INF:
            return INF
        if math.isnan(x) or math.isinf(x):
            raise ValueError(f"not an extended rational: {x!r}")
        return Fraction(x)
    if isinstance(x, str):
        s = x.strip()
        if s.lower() in ("inf", "+inf", "infinity", "∞"):
            return INF
        return Fraction(s)
    raise TypeError(f"cannot interpret {x!r} as an extended rational")


def fmt(x) -> str:
    """Render as ``p/q``, integer, or ``inf``."""
    if is_inf(x):
        return "inf"
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def dist(a, b) -> ExtRat:
    """|a - b| with inf - inf = 0."""
    if is_inf(a) or is_inf(b):
        return Fraction(0) if (is_inf(a) and is_inf(b)) else INF
    return abs(Fraction(a) - Fraction(b))


def linf(u, v) -> ExtRat:
    if len(u) != len(v):
        raise ValueError("coordinate arity mismatch")
    best: ExtRat = Fraction(0)
    for a, b in zip(u, v):
        d = dist(a, b)
        if d > best:
            best = d
    return best


def lerp(a, b, t: Fraction) -> ExtRat:
    """(1 - t) a + t b; infinite whenever either endpoint is, for t in [0, 1]."""
    if is_inf(a) or is_inf(b):
        if t == 0:
            return a
        if t == 1:
            return b
        return INF
    return (1 - t) * Fraction(a) + t * Fraction(b)


def ext_max(values) -> ExtRat:
    best: ExtRat = Fraction(0)
    for v in values:
        if v > best:
            best = v
    return best

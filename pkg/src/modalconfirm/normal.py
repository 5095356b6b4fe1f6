"""Standard normal CDF, tail and quantile.

The tails use ``math.erfc`` directly; the quantile is the stdlib
``statistics.NormalDist.inv_cdf`` with infinite values at 0 and 1.
"""
from __future__ import annotations

import math
from statistics import NormalDist

SQRT2 = math.sqrt(2.0)

_STD = NormalDist()


def cdf(x: float) -> float:
    """P(Z <= x)."""
    return 0.5 * math.erfc(-x / SQRT2)


def sf(x: float) -> float:
    """P(Z > x), accurate far into the upper tail."""
    return 0.5 * math.erfc(x / SQRT2)


def prob_between(a: float, b: float) -> float:
    """P(a <= Z <= b), computed on the side of zero that avoids cancellation."""
    if b <= a:
        return 0.0
    if a >= 0.0:
        return sf(a) - sf(b)
    if b <= 0.0:
        return cdf(b) - cdf(a)
    return 1.0 - cdf(a) - sf(b)


def ppf(p: float) -> float:
    """Inverse of :func:`cdf`."""
    if not 0.0 <= p <= 1.0 or math.isnan(p):
        raise ValueError(f"probability out of range: {p}")
    if p == 0.0:
        return -math.inf
    if p == 1.0:
        return math.inf
    return _STD.inv_cdf(p)


def two_sided_z(alpha: float) -> float:
    """Critical value z_{1-alpha/2}."""
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    return -ppf(alpha / 2.0)

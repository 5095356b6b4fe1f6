"""Power, decisive power, indecisiveness and d-values.

Notation follows the usual convention for these quantities:

* ``delta1`` = P(ConfirmNull), the region lands inside H0;
* ``delta0`` = P(ConfirmAlt), the region lands inside H1, which is the
  classical power ``beta``;
* ``delta`` = delta0 + delta1 and ``indecisive`` = 1 - delta.

Closed forms exist for the Wald normal rule on the real line, where the
region (x̄ - w, x̄ + w) lies inside a component [L, U] exactly when
L + w <= x̄ <= U - w and x̄ ~ N(θ, σ²/n).  Everything else is estimated by
seeded Monte Carlo.
"""
from __future__ import annotations

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from . import _rng
from .confidence import (
    BernoulliSequence,
    Evidence,
    NormalKnownSigma,
    Rigged,
    Rule,
    WaldBinomial,
    WaldNormal,
    base_of,
)
from .hypothesis_space import (
    REAL_LINE,
    AmbientMismatchError,
    RegionSet,
    complement,
    member,
)
from .normal import prob_between
from .verdict import Outcome, evaluate

__all__ = [
    "ClosedForm",
    "DValueReport",
    "MonteCarlo",
    "PowerPoint",
    "UnsupportedRuleError",
    "d_value",
    "d_value_conventions",
    "indecisiveness_curve",
    "power_curve",
    "power_point",
    "power_point_exact",
    "power_point_mc",
    "theta_grid",
    "tost_rule",
]


class UnsupportedRuleError(ValueError):
    """The requested computation is not available for this rule or hypothesis."""


@dataclass(frozen=True)
class ClosedForm:
    def label(self) -> str:
        return "closed_form"


@dataclass(frozen=True)
class MonteCarlo:
    reps: int
    seed: int
    workers: int = field(default=1, compare=False)

    def __post_init__(self) -> None:
        if self.reps < 1:
            raise ValueError(f"reps must be positive, got {self.reps}")

    def label(self) -> str:
        return f"monte_carlo;reps={self.reps};seed={self.seed}"


CLOSED_FORM = ClosedForm()

Method = Union[ClosedForm, MonteCarlo]


@dataclass(frozen=True)
class PowerPoint:
    theta: float
    n: int
    beta: float
    delta0: float
    delta1: float
    delta: float
    indecisive: float
    method: Method
    refuted: float = 0.0

    def as_row(self) -> dict:
        return {"theta": self.theta, "n": self.n, "beta": self.beta, "delta0": self.delta0,
                "delta1": self.delta1, "delta": self.delta, "indecisive": self.indecisive,
                "method": self.method.label()}

    def standard_error(self, p: float) -> float:
        """Binomial standard error of a Monte Carlo frequency ``p``; zero in closed form."""
        if not isinstance(self.method, MonteCarlo):
            return 0.0
        return math.sqrt(p * (1.0 - p) / self.method.reps)


@dataclass(frozen=True)
class DValueReport:
    d_value: float
    alpha: float
    theta_grid: tuple[float, ...]
    per_theta: tuple[tuple[float, float], ...]
    method: Method
    argmax_theta: float

    def to_json(self) -> dict:
        return {"d_value": self.d_value, "alpha": self.alpha,
                "theta_grid": list(self.theta_grid),
                "per_theta": [{"theta": t, "decisive_error_prob": p} for t, p in self.per_theta],
                "argmax_theta": self.argmax_theta, "method": self.method.label()}


def theta_grid(lo: float, hi: float, k: int) -> list[float]:
    if k < 1:
        raise ValueError("a grid needs at least one point")
    return [float(x) for x in np.linspace(lo, hi, k)]


def _check_n(n: int) -> None:
    if n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")


def _closed_form_rule(h0: RegionSet, rule: Rule) -> WaldNormal:
    if not isinstance(rule, WaldNormal) or rule.ambient != REAL_LINE:
        raise UnsupportedRuleError("closed forms need a wald_normal rule on the real line")
    if h0.dense_codense:
        raise UnsupportedRuleError("closed forms need an interval-union hypothesis")
    if h0.ambient != REAL_LINE:
        raise UnsupportedRuleError("hypothesis must live on the real line")
    return rule


def _containment_prob(h: RegionSet, theta: float, w: float, s: float) -> float:
    # components are disjoint and an interval inside a canonical union sits in one component
    total = 0.0
    for iv in h.intervals:
        a = (iv.lo.value + w - theta) / s
        b = (iv.hi.value - w - theta) / s
        total += prob_between(a, b)
    return total


def power_point_exact(h0: RegionSet, rule: Rule, theta: float, n: int) -> PowerPoint:
    _check_n(n)
    rule = _closed_form_rule(h0, rule)
    s = rule.sigma / math.sqrt(n)
    w = rule.half_width(n)
    delta1 = _containment_prob(h0, theta, w, s)
    delta0 = _containment_prob(complement(h0), theta, w, s)
    delta = delta0 + delta1
    return PowerPoint(theta, n, delta0, delta0, delta1, delta, 1.0 - delta, ClosedForm())


_ORDER = (Outcome.CONFIRM_NULL, Outcome.CONFIRM_ALT, Outcome.INDECISIVE, Outcome.REFUTED_ALL)


def _fast_counts(h0: RegionSet, rule: WaldNormal, theta: float, n: int,
                 g: np.random.Generator, size: int) -> np.ndarray:
    s = rule.sigma / math.sqrt(n)
    w = rule.half_width(n)
    xbar = g.normal(theta, s, size=size)
    lo, hi = xbar - w, xbar + w
    if h0.dense_codense:
        return np.array([0, 0, size, 0])

    def inside(h: RegionSet) -> np.ndarray:
        hit = np.zeros(size, dtype=bool)
        for iv in h.intervals:
            hit |= (lo >= iv.lo.value) & (hi <= iv.hi.value)
        return hit

    null = inside(h0)
    alt = inside(complement(h0))
    c_null = int(np.count_nonzero(null))
    c_alt = int(np.count_nonzero(alt))
    return np.array([c_null, c_alt, size - c_null - c_alt, 0])


def _draw_evidence(rule: Rule, theta: float, n: int, g: np.random.Generator,
                   size: int) -> list[Evidence]:
    b = base_of(rule)
    if isinstance(b, WaldBinomial):
        if not 0.0 <= theta <= 1.0:
            raise ValueError(f"Bernoulli parameter out of range: {theta}")
        horizon = rule.trigger.model.horizon if isinstance(rule, Rigged) else n
        model = BernoulliSequence(max(horizon, n))
        draws = (g.random((size, n)) < theta).astype(int)
    else:
        model = NormalKnownSigma(b.sigma)
        draws = g.normal(theta, b.sigma, size=(size, n))
    return [Evidence(model, tuple(row)) for row in draws.tolist()]


def _slow_counts(h0: RegionSet, rule: Rule, theta: float, n: int,
                 g: np.random.Generator, size: int) -> np.ndarray:
    counts = dict.fromkeys(_ORDER, 0)
    cache: dict[tuple, Outcome] = {}
    for e in _draw_evidence(rule, theta, n, g, size):
        out = cache.get(e.observations)
        if out is None:
            out = evaluate(h0, rule.region(e)).outcome
            if isinstance(e.model, BernoulliSequence):
                cache[e.observations] = out
        counts[out] += 1
    return np.array([counts[o] for o in _ORDER])


def simulate_outcomes(h0: RegionSet, rule: Rule, theta: float, n: int, reps: int,
                      seed: int, workers: int = 1) -> dict[Outcome, int]:
    """Counts of each verdict over ``reps`` seeded draws of n observations at θ.

    Wald normal rules on the real line draw the sample mean directly, which
    has the same law as averaging n draws; any other rule simulates full
    evidence and runs the verdict on each draw.
    """
    _check_n(n)
    fast = isinstance(rule, WaldNormal) and rule.ambient == REAL_LINE

    def work(g: np.random.Generator, size: int) -> np.ndarray:
        if fast:
            return _fast_counts(h0, rule, theta, n, g, size)
        return _slow_counts(h0, rule, theta, n, g, size)

    total = sum(_rng.run_chunks(seed, reps, work, workers))
    return dict(zip(_ORDER, (int(c) for c in total)))


def power_point_mc(h0: RegionSet, rule: Rule, theta: float, n: int, reps: int,
                   seed: int, workers: int = 1) -> PowerPoint:
    if h0.ambient != rule.ambient:
        raise AmbientMismatchError(f"ambient spaces differ: {h0.ambient} vs {rule.ambient}")
    c = simulate_outcomes(h0, rule, theta, n, reps, seed, workers)
    delta1 = c[Outcome.CONFIRM_NULL] / reps
    delta0 = c[Outcome.CONFIRM_ALT] / reps
    indecisive = c[Outcome.INDECISIVE] / reps
    refuted = c[Outcome.REFUTED_ALL] / reps
    return PowerPoint(theta, n, delta0, delta0, delta1, delta0 + delta1, indecisive,
                      MonteCarlo(reps, seed, workers), refuted)


def _always_indecisive(theta: float, n: int, method: Method) -> PowerPoint:
    return PowerPoint(theta, n, 0.0, 0.0, 0.0, 0.0, 1.0, method)


def power_point(h0: RegionSet, rule: Rule, theta: float, n: int,
                method: Method = CLOSED_FORM) -> PowerPoint:
    if isinstance(method, MonteCarlo):
        return power_point_mc(h0, rule, theta, n, method.reps, method.seed, method.workers)
    return power_point_exact(h0, rule, theta, n)


def power_curve(h0: RegionSet, rule: Rule, thetas: Iterable[float], n: int,
                method: Method = CLOSED_FORM) -> list[PowerPoint]:
    return [power_point(h0, rule, t, n, method) for t in thetas]


def indecisiveness_curve(h0: RegionSet, rule: Rule, thetas: Iterable[float], n: int,
                         method: Method = CLOSED_FORM) -> list[PowerPoint]:
    """Pointwise indecisiveness.

    A dense-codense hypothesis meets every open region, as does its
    complement, so every verdict is Indecisive and nothing is simulated.
    """
    if h0.dense_codense:
        _check_n(n)
        return [_always_indecisive(float(t), n, method) for t in thetas]
    return power_curve(h0, rule, thetas, n, method)


def d_value(h0: RegionSet, rule: Rule, thetas: Sequence[float], n: int,
            method: Method = CLOSED_FORM, alpha: float | None = None) -> DValueReport:
    """Worst decisive-error probability over a finite grid.

    At θ in H0 the error is ConfirmAlt, at θ in H1 it is ConfirmNull.
    ``alpha`` is the nominal level the report is compared against and
    defaults to the rule's own level.
    """
    thetas = [float(t) for t in thetas]
    if not thetas:
        raise ValueError("the theta grid is empty")
    if h0.dense_codense:
        raise UnsupportedRuleError("grid points cannot be classified against a dense-codense set")
    per = []
    for t in thetas:
        p = power_point(h0, rule, t, n, method)
        per.append((t, p.delta0 if member(h0, t) else p.delta1))
    best = max(per, key=lambda tp: tp[1])
    return DValueReport(best[1], rule.alpha if alpha is None else alpha, tuple(thetas),
                        tuple(per), method, best[0])


def tost_rule(alpha: float, sigma: float = 1.0, convention: str = "1-2alpha") -> WaldNormal:
    """Wald normal rule for an equivalence test at level ``alpha``.

    ``"1-2alpha"`` uses the (1 - 2α) interval customary for TOST;
    ``"1-alpha"`` uses the ordinary two-sided interval.
    """
    if convention == "1-2alpha":
        return WaldNormal(2.0 * alpha, sigma)
    if convention == "1-alpha":
        return WaldNormal(alpha, sigma)
    raise ValueError(f"unknown interval convention {convention!r}")


def d_value_conventions(h0: RegionSet, alpha: float, thetas: Sequence[float], n: int,
                        sigma: float = 1.0,
                        method: Method = CLOSED_FORM) -> dict[str, DValueReport]:
    return {conv: d_value(h0, tost_rule(alpha, sigma, conv), thetas, n, method, alpha)
            for conv in ("1-2alpha", "1-alpha")}

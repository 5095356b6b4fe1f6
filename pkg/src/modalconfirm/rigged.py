"""Rigged confidence regions and exact coverage on finite Bernoulli sample spaces."""
from __future__ import annotations

import itertools
import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from .confidence import (
    BernoulliSequence,
    Evidence,
    IncompatibleModelError,
    Rigged,
    Rule,
    WaldBinomial,
    WaldNormal,
    base_of,
    evidence_for,
)
from .hypothesis_space import RegionSet, has_nonempty_interior, member, region_to_json


def string_probability(theta: float, ones: int, zeros: int) -> float:
    """P_θ of a fixed bit string with the given counts; 0**0 is 1."""
    return theta ** ones * (1.0 - theta) ** zeros


def sup_event_probability(model: BernoulliSequence, event: Evidence,
                          theta_grid: Sequence[float]) -> tuple[float, float]:
    """Largest probability of ``event`` over θ, with the maximising θ.

    The grid is searched and the analytic maximiser k/n is added whenever it
    lies within the grid's range, so the result is exact over that range.
    The empty string has probability 1 for every θ; its reported maximiser
    is the first grid point.
    """
    if not isinstance(model, BernoulliSequence):
        raise IncompatibleModelError("event probabilities need a Bernoulli model")
    if event.n > model.horizon:
        raise ValueError(f"event of length {event.n} exceeds horizon {model.horizon}")
    grid = [float(t) for t in theta_grid]
    if not grid:
        raise ValueError("the theta grid is empty")
    k = sum(event.observations)
    m = event.n - k
    if event.n == 0:
        return 1.0, grid[0]
    candidates = list(grid)
    peak = k / event.n
    if min(grid) <= peak <= max(grid):
        candidates.append(peak)
    best_p, best_t = -1.0, grid[0]
    for t in candidates:
        p = string_probability(t, k, m)
        if p > best_p:
            best_p, best_t = p, t
    return best_p, best_t


def _sample_space(horizon: int) -> list[Evidence]:
    model = BernoulliSequence(horizon)
    return [Evidence(model, s) for s in itertools.product((0, 1), repeat=horizon)]


@dataclass(frozen=True)
class CoveragePoint:
    theta: float
    coverage: float
    topo_coverage: float
    interior_prob: float


def _exact_points(rule: Rule, theta_grid: Sequence[float], horizon: int) -> list[CoveragePoint]:
    space = _sample_space(horizon)
    regions = [rule.region(e) for e in space]
    open_ = np.array([has_nonempty_interior(r) for r in regions])
    ones = np.array([sum(e.observations) for e in space])
    out = []
    for t in theta_grid:
        t = float(t)
        probs = np.array([string_probability(t, k, horizon - k) for k in ones])
        hit = np.array([member(r, t) for r in regions])
        out.append(CoveragePoint(t, math.fsum(probs[hit]), math.fsum(probs[hit & open_]),
                                 math.fsum(probs[open_])))
    return out


def _mc_points(rule: Rule, theta_grid: Sequence[float], n: int, reps: int,
               seed: int) -> list[CoveragePoint]:
    b = base_of(rule)
    out = []
    for t in theta_grid:
        g = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
        cov = topo = inter = 0
        for row in g.normal(float(t), b.sigma, size=(reps, n)).tolist():
            r = rule.region(evidence_for(rule, row))
            is_open = has_nonempty_interior(r)
            inside = member(r, float(t))
            cov += inside
            topo += inside and is_open
            inter += is_open
        out.append(CoveragePoint(float(t), cov / reps, topo / reps, inter / reps))
    return out


def topological_coverage(rule: Rule, theta_grid: Sequence[float],
                         horizon: int | None = None, *, n: int | None = None,
                         reps: int = 10_000, seed: int = 0) -> list[CoveragePoint]:
    """Per-θ P(θ ∈ c(E)), P(θ ∈ c(E) and c(E) has nonempty interior), P(nonempty interior).

    Bernoulli rules are summed exactly over all 2**horizon strings; normal
    rules are simulated with samples of size ``n``.
    """
    b = base_of(rule)
    if isinstance(b, WaldBinomial):
        if horizon is None:
            if not isinstance(rule, Rigged):
                raise ValueError("exact enumeration needs a horizon")
            horizon = rule.trigger.model.horizon
        return _exact_points(rule, theta_grid, horizon)
    if isinstance(b, WaldNormal):
        if n is None:
            raise ValueError("Monte Carlo coverage needs a sample size n")
        return _mc_points(rule, theta_grid, n, reps, seed)
    raise IncompatibleModelError(f"unsupported rule {rule!r}")


def topological_confidence_violations(points: Sequence[CoveragePoint],
                                      alpha: float) -> list[CoveragePoint]:
    """Grid points where P(nonempty interior) < 1 - alpha.

    A rule with the confidence property at level alpha should produce none
    on a parameter space without isolated points; finite grids only
    approximate that setting, so violations are reported rather than raised.
    """
    return [p for p in points if p.interior_prob < 1.0 - alpha]


@dataclass(frozen=True)
class RiggedPoint:
    theta: float
    trigger_prob: float
    base_coverage: float
    base_topo_coverage: float
    rigged_coverage: float
    rigged_topo_coverage: float

    @property
    def union_bound_holds(self) -> bool:
        # miscoverage of c* <= miscoverage of c + P(trigger), pointwise
        lhs = 1.0 - self.rigged_topo_coverage
        rhs = (1.0 - self.base_topo_coverage) + self.trigger_prob
        return lhs <= rhs + 1e-12


@dataclass(frozen=True)
class RiggedDemo:
    base_alpha: float
    trigger: Evidence
    payload: RegionSet
    sup_trigger_prob: float
    argmax_theta: float
    rigged_level_bound: float
    base_exact_level: float
    rigged_exact_level: float
    per_theta: tuple[RiggedPoint, ...]

    def to_json(self) -> dict:
        return {
            "base_alpha": self.base_alpha,
            "trigger": self.trigger.bitstring(),
            "payload": region_to_json(self.payload),
            "sup_trigger_prob": self.sup_trigger_prob,
            "argmax_theta": self.argmax_theta,
            "rigged_level_bound": self.rigged_level_bound,
            "base_exact_level": self.base_exact_level,
            "rigged_exact_level": self.rigged_exact_level,
            "per_theta": [p.__dict__ | {"union_bound_holds": p.union_bound_holds}
                          for p in self.per_theta],
        }


def rigged_level(base: Rule, trigger: Evidence, payload: RegionSet,
                 theta_grid: Sequence[float]) -> RiggedDemo:
    """Level bound and exact coverage of ``base`` rigged to return ``payload`` on ``trigger``.

    The bound is the union bound base_alpha + sup_θ P_θ(trigger); it is only
    a guarantee if ``base`` really has the confidence property at
    ``base_alpha``, which ``base_exact_level`` lets the caller check.
    """
    if not isinstance(base_of(base), WaldBinomial) or not isinstance(trigger.model,
                                                                      BernoulliSequence):
        raise IncompatibleModelError("rigging is demonstrated on Bernoulli sample spaces")
    horizon = trigger.model.horizon
    gamma, argmax = sup_event_probability(trigger.model, trigger, theta_grid)
    rigged = Rigged(base, trigger, payload)
    base_pts = _exact_points(base, theta_grid, horizon)
    rig_pts = _exact_points(rigged, theta_grid, horizon)
    k = sum(trigger.observations)
    per = []
    for bp, rp in zip(base_pts, rig_pts):
        # the trigger is matched as an exact string of the full horizon
        tp = string_probability(bp.theta, k, trigger.n - k) if trigger.n == horizon else 0.0
        per.append(RiggedPoint(bp.theta, tp, bp.coverage, bp.topo_coverage,
                               rp.coverage, rp.topo_coverage))
    return RiggedDemo(
        base_alpha=base.alpha,
        trigger=trigger,
        payload=payload,
        sup_trigger_prob=gamma,
        argmax_theta=argmax,
        rigged_level_bound=base.alpha + gamma,
        base_exact_level=max(1.0 - p.coverage for p in base_pts),
        rigged_exact_level=max(1.0 - p.topo_coverage for p in rig_pts),
        per_theta=tuple(per),
    )


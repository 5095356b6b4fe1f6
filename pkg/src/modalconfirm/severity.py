"""Empirical adequacy of a predictive theory, tested by equivalence on its mean loss.

A theory passes when the confidence region for its mean loss lands inside
the adequacy hypothesis h_tau.  Every result carries the loss name, margin
and level, since a pass only means something relative to those three.
"""
from __future__ import annotations

import math
import statistics
from collections.abc import Callable, Sequence
from dataclasses import dataclass

from .confidence import Evidence, NormalKnownSigma, WaldNormal
from .hypothesis_space import (
    NONNEGATIVE,
    REAL_LINE,
    RegionSet,
    closed,
    member,
    region_to_json,
)
from .power import simulate_outcomes
from .verdict import Outcome, Verdict, run_test


def absolute_loss(pred: float, actual: float) -> float:
    return abs(pred - actual)


def squared_loss(pred: float, actual: float) -> float:
    return (pred - actual) ** 2


def signed_error(pred: float, actual: float) -> float:
    return actual - pred


# name -> (function, signed?)
LOSSES: dict[str, tuple[Callable[[float, float], float], bool]] = {
    "absolute": (absolute_loss, False),
    "squared": (squared_loss, False),
    "signed": (signed_error, True),
}


def constant_predictor(value: float = 0.0) -> Callable[[float], float]:
    return lambda x: value


def linear_predictor(slope: float = 1.0, intercept: float = 0.0) -> Callable[[float], float]:
    return lambda x: slope * x + intercept


@dataclass(frozen=True)
class TheorySpec:
    """A predictor, a loss, an adequacy margin and a level.

    ``loss_name`` picks a built-in loss unless ``loss`` is given.  Signed
    losses are tested against [-M, M] on the real line, nonnegative ones
    against [0, M] on [0, inf).
    """

    predictor: Callable[[float], float]
    margin: float
    alpha: float = 0.05
    loss_name: str = "absolute"
    loss: Callable[[float, float], float] | None = None
    signed: bool | None = None

    def __post_init__(self) -> None:
        if not self.margin > 0:
            raise ValueError(f"margin must be positive, got {self.margin}")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.loss is None and self.loss_name not in LOSSES:
            raise ValueError(f"unknown loss {self.loss_name!r}; choose from {sorted(LOSSES)}")

    @property
    def loss_fn(self) -> Callable[[float, float], float]:
        return self.loss if self.loss is not None else LOSSES[self.loss_name][0]

    @property
    def is_signed(self) -> bool:
        if self.signed is not None:
            return self.signed
        return LOSSES.get(self.loss_name, (None, False))[1]

    @property
    def h_tau(self) -> RegionSet:
        if self.is_signed:
            return closed(-self.margin, self.margin, REAL_LINE)
        return closed(0.0, self.margin, NONNEGATIVE)


@dataclass(frozen=True)
class AdequacyResult:
    verdict: Verdict
    loss_statistic_region: RegionSet
    h_tau: RegionSet
    losses: tuple[float, ...]
    mean_loss: float
    sigma: float
    rule: WaldNormal
    evidence: Evidence
    loss_name: str
    margin: float
    alpha: float

    @property
    def passed(self) -> bool:
        return self.verdict.outcome is Outcome.CONFIRM_NULL

    def summary(self) -> str:
        rel = f"relative to loss={self.loss_name}, M={self.margin:g}, alpha={self.alpha:g}"
        if self.passed:
            return f"passed a severe test ({rel})"
        if self.verdict.outcome is Outcome.CONFIRM_ALT:
            return f"empirically inadequate ({rel})"
        return f"undecided ({rel})"

    def to_json(self) -> dict:
        return {"verdict": self.verdict.to_json(),
                "loss_statistic_region": region_to_json(self.loss_statistic_region),
                "h_tau": region_to_json(self.h_tau), "n": len(self.losses),
                "mean_loss": self.mean_loss, "sigma": self.sigma, "loss": self.loss_name,
                "margin": self.margin, "alpha": self.alpha, "passed": self.passed,
                "summary": self.summary()}


def compute_losses(spec: TheorySpec, inputs: Sequence[float],
                   actuals: Sequence[float]) -> list[float]:
    if len(inputs) != len(actuals):
        raise ValueError(f"{len(inputs)} inputs but {len(actuals)} actual values")
    if not inputs:
        raise ValueError("no trials")
    f, loss = spec.predictor, spec.loss_fn
    out = [float(loss(f(x), y)) for x, y in zip(inputs, actuals)]
    if not spec.is_signed and any(v < 0 for v in out):
        raise ValueError("a nonnegative loss returned a negative value")
    return out


def test_adequacy(spec: TheorySpec, inputs: Sequence[float], actuals: Sequence[float],
                  rule: WaldNormal | None = None, sigma_floor: float = 1e-9) -> AdequacyResult:
    """Test whether the theory's mean loss lies within its margin.

    Without ``rule`` the sample standard deviation of the losses is plugged
    in as a known sigma (floored at ``sigma_floor`` so a perfect predictor
    still yields an open region), which needs at least two trials.  The
    plug-in is an approximation outside the known-sigma theory.
    """
    losses = compute_losses(spec, inputs, actuals)
    h = spec.h_tau
    if rule is None:
        if len(losses) < 2:
            raise ValueError("estimating the loss spread needs at least two trials")
        sigma = max(statistics.stdev(losses), sigma_floor)
        rule = WaldNormal(spec.alpha, sigma, h.ambient)
    elif rule.ambient != h.ambient:
        rule = WaldNormal(rule.alpha, rule.sigma, h.ambient)
    e = Evidence(NormalKnownSigma(rule.sigma), tuple(losses))
    v = run_test(rule, e, h)
    return AdequacyResult(v, v.region, h, tuple(losses), math.fsum(losses) / len(losses),
                          rule.sigma, rule, e, spec.loss_name if spec.loss is None else "custom",
                          spec.margin, rule.alpha)


test_adequacy.__test__ = False  # keep pytest from collecting it when imported


@dataclass(frozen=True)
class SeverityPoint:
    theta: float
    prob_not_confirm_null: float
    standard_error: float
    threshold: float

    @property
    def holds(self) -> bool:
        return self.prob_not_confirm_null >= self.threshold


def severity_bound_check(h_tau: RegionSet, rule: WaldNormal, theta_grid_in_h1: Sequence[float],
                         n: int, reps: int, seed: int, workers: int = 1) -> list[SeverityPoint]:
    """Estimate P_θ(verdict != ConfirmNull) for θ outside ``h_tau``.

    The threshold is 1 - alpha less three binomial standard errors taken at
    the nominal rate alpha, so a point estimate of exactly 1 does not shrink
    the tolerance to zero.
    """
    thetas = [float(t) for t in theta_grid_in_h1]
    inside = [t for t in thetas if member(h_tau, t)]
    if inside:
        raise ValueError(f"grid points lie inside h_tau: {inside}")
    a = rule.alpha
    se = math.sqrt(a * (1.0 - a) / reps)
    out = []
    for t in thetas:
        c = simulate_outcomes(h_tau, rule, t, n, reps, seed, workers)
        p = 1.0 - c[Outcome.CONFIRM_NULL] / reps
        out.append(SeverityPoint(t, p, se, 1.0 - a - 3.0 * se))
    return out

"""Confidence functions: maps from finite evidence to regions of the parameter space."""
from __future__ import annotations

import itertools
import math
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass
from typing import Any, Union

import numpy as np

from . import _rng
from .hypothesis_space import (
    REAL_LINE,
    UNIT_INTERVAL,
    Endpoint,
    Interval,
    RegionFormatError,
    RegionSet,
    contains,
    full,
    has_nonempty_interior,
    interior,
    interval_from_json,
    interval_to_json,
    member,
    region_from_json,
    region_to_json,
)
from .normal import two_sided_z


class IncompatibleModelError(ValueError):
    """Evidence was drawn from a sampling model the rule cannot handle."""


@dataclass(frozen=True)
class NormalKnownSigma:
    sigma: float = 1.0

    def __post_init__(self) -> None:
        if not self.sigma > 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")

    @property
    def ambient(self) -> Interval:
        return REAL_LINE


@dataclass(frozen=True)
class BernoulliSequence:
    horizon: int

    def __post_init__(self) -> None:
        if self.horizon < 1:
            raise ValueError(f"horizon must be at least 1, got {self.horizon}")

    @property
    def ambient(self) -> Interval:
        return UNIT_INTERVAL


SamplingModel = Union[NormalKnownSigma, BernoulliSequence]


@dataclass(frozen=True)
class Evidence:
    model: SamplingModel
    observations: tuple = ()

    def __post_init__(self) -> None:
        obs = tuple(self.observations)
        if isinstance(self.model, BernoulliSequence):
            if any(b not in (0, 1) for b in obs):
                raise ValueError("Bernoulli observations must be bits")
            obs = tuple(int(b) for b in obs)
            if len(obs) > self.model.horizon:
                raise ValueError(f"{len(obs)} observations exceed horizon {self.model.horizon}")
        else:
            obs = tuple(float(x) for x in obs)
        object.__setattr__(self, "observations", obs)

    @property
    def n(self) -> int:
        return len(self.observations)

    def __len__(self) -> int:
        return len(self.observations)

    def is_prefix_of(self, other: Evidence) -> bool:
        return other.observations[: self.n] == self.observations

    def bitstring(self) -> str:
        return "".join(str(b) for b in self.observations)


def bits(s: str, horizon: int | None = None) -> Evidence:
    """Bernoulli evidence from a string such as ``"1011000"``."""
    return Evidence(BernoulliSequence(horizon or max(len(s), 1)), tuple(int(c) for c in s))


# -- rules --------------------------------------------------------------------

def _check_alpha(alpha: float) -> None:
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")


@dataclass(frozen=True)
class WaldNormal:
    """x̄ ± z·σ/√n, open, intersected with ``ambient``."""

    alpha: float
    sigma: float = 1.0
    ambient: Interval = REAL_LINE

    def __post_init__(self) -> None:
        _check_alpha(self.alpha)
        if not self.sigma > 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")

    @property
    def z(self) -> float:
        return two_sided_z(self.alpha)

    def half_width(self, n: int) -> float:
        return self.z * self.sigma / math.sqrt(n)

    def region(self, e: Evidence) -> RegionSet:
        if not isinstance(e.model, NormalKnownSigma):
            raise IncompatibleModelError("wald_normal needs normal evidence")
        if e.model.sigma != self.sigma:
            raise IncompatibleModelError(
                f"rule sigma {self.sigma} differs from evidence sigma {e.model.sigma}")
        if e.n == 0:
            return full(self.ambient)
        xbar = math.fsum(e.observations) / e.n
        w = self.half_width(e.n)
        raw = Interval(Endpoint(xbar - w, False), Endpoint(xbar + w, False))
        return _clip(raw, self.ambient)


def _clip(iv: Interval, ambient: Interval) -> RegionSet:
    m = iv.meet(ambient)
    return RegionSet(() if m is None else (m,), ambient)


@dataclass(frozen=True)
class WaldBinomial:
    """p̂ ± z·√(p̂(1-p̂)/n) clipped to [0, 1].

    At p̂ = 0 (resp. 1) the standard error vanishes; the region is then the
    half-open sliver [0, z/(2n)) (resp. (1 - z/(2n), 1]) so that every
    region keeps a nonempty interior.
    """

    alpha: float

    def __post_init__(self) -> None:
        _check_alpha(self.alpha)

    ambient = UNIT_INTERVAL

    @property
    def z(self) -> float:
        return two_sided_z(self.alpha)

    def region(self, e: Evidence) -> RegionSet:
        if not isinstance(e.model, BernoulliSequence):
            raise IncompatibleModelError("wald_binomial needs Bernoulli evidence")
        n = e.n
        if n == 0:
            return full(UNIT_INTERVAL)
        k = sum(e.observations)
        z = self.z
        if k == 0:
            sliver = z / (2 * n)
            return _clip(Interval(Endpoint(0.0), Endpoint(sliver, False)), UNIT_INTERVAL)
        if k == n:
            sliver = z / (2 * n)
            return _clip(Interval(Endpoint(1.0 - sliver, False), Endpoint(1.0)), UNIT_INTERVAL)
        p = k / n
        h = z * math.sqrt(p * (1.0 - p) / n)
        return _clip(Interval(Endpoint(p - h, False), Endpoint(p + h, False)), UNIT_INTERVAL)


@dataclass(frozen=True)
class Rigged:
    """``base`` everywhere except on ``trigger``, where it returns ``payload``."""

    base: Rule
    trigger: Evidence
    payload: RegionSet

    def __post_init__(self) -> None:
        if self.payload.ambient != self.base.ambient:
            raise ValueError("payload ambient differs from the base rule's ambient")

    @property
    def alpha(self) -> float:
        return self.base.alpha

    @property
    def ambient(self) -> Interval:
        return self.base.ambient

    def region(self, e: Evidence) -> RegionSet:
        if e.observations == self.trigger.observations:
            return self.payload
        return self.base.region(e)


Rule = Union[WaldNormal, WaldBinomial, Rigged]


def base_of(rule: Rule) -> Rule:
    while isinstance(rule, Rigged):
        rule = rule.base
    return rule


def region(rule: Rule, e: Evidence) -> RegionSet:
    return rule.region(e)


def model_for(rule: Rule, horizon: int | None = None) -> SamplingModel:
    """The sampling model a rule's evidence is drawn from."""
    b = base_of(rule)
    if isinstance(b, WaldNormal):
        return NormalKnownSigma(b.sigma)
    if horizon is None:
        horizon = rule.trigger.model.horizon if isinstance(rule, Rigged) else 1
    return BernoulliSequence(horizon)


def evidence_for(rule: Rule, observations: Sequence, horizon: int | None = None) -> Evidence:
    if horizon is None and isinstance(base_of(rule), WaldBinomial):
        horizon = max(len(observations), 1)
        if isinstance(rule, Rigged):
            horizon = max(horizon, rule.trigger.model.horizon)
    return Evidence(model_for(rule, horizon), tuple(observations))


# -- predicates and searches ----------------------------------------------------

def is_non_refuting(rule: Rule, universe: Iterable[Evidence]) -> bool:
    return all(not rule.region(e).is_empty for e in universe)


def sequences(alphabet: Sequence, max_len: int, min_len: int = 0) -> Iterator[tuple]:
    """All strings over ``alphabet`` ordered by length, then lexicographically."""
    for n in range(min_len, max_len + 1):
        yield from itertools.product(alphabet, repeat=n)


def binomial_universe(horizon: int, lengths: Iterable[int] | None = None) -> list[Evidence]:
    model = BernoulliSequence(horizon)
    lengths = range(horizon + 1) if lengths is None else lengths
    return [Evidence(model, s) for n in lengths for s in itertools.product((0, 1), repeat=n)]


def centered_evidence(rule: WaldNormal, center: float, n: int) -> Evidence:
    return Evidence(NormalKnownSigma(rule.sigma), (center,) * n)


def _room(target: RegionSet) -> tuple[float, float]:
    """Centre and half-width of an open piece of ``target``'s interior."""
    iv = interior(target).intervals[0]
    lo, hi = iv.lo.value, iv.hi.value
    if math.isinf(lo) and math.isinf(hi):
        return 0.0, 1.0
    if math.isinf(lo):
        return hi - 1.0, 1.0
    if math.isinf(hi):
        return lo + 1.0, 1.0
    return 0.5 * (lo + hi), 0.5 * (hi - lo)


def precision_candidates(rule: Rule, target: RegionSet,
                         horizon: int | None = None) -> Iterator[Evidence]:
    """Evidence likely to produce a region inside ``target``.

    For Wald normal rules the region (m ± zσ/√n) fits inside an open piece of
    half-width h around m once n > (zσ/h)², so constant samples at the piece's
    centre with that n, then doubled sample sizes, are enough.  Other rules
    fall back to exhaustive enumeration up to ``horizon``.
    """
    b = base_of(rule)
    if isinstance(rule, Rigged):
        yield rule.trigger
    if isinstance(b, WaldNormal):
        m, h = _room(target)
        n = int((b.z * b.sigma / h) ** 2) + 1
        for _ in range(12):
            yield centered_evidence(b, m, n)
            n *= 2
        return
    if horizon is None:
        raise ValueError("a horizon is needed to enumerate Bernoulli evidence")
    yield from binomial_universe(horizon)


def satisfies_precision(rule: Rule, target: RegionSet,
                        search: Iterable[Evidence] | None = None,
                        horizon: int | None = None) -> Evidence | None:
    """Find evidence E with ∅ ≠ region(E) ⊆ target, or None if the search runs dry."""
    if not has_nonempty_interior(target):
        raise ValueError("precision is only defined for targets with nonempty interior")
    if search is None:
        search = precision_candidates(rule, target, horizon)
    for e in search:
        r = rule.region(e)
        if not r.is_empty and contains(target, r):
            return e
    return None


def covering_evidence(rule: Rule, theta: float,
                      search: Iterable[Evidence] | None = None,
                      horizon: int | None = None) -> Evidence | None:
    """Find evidence whose region contains ``theta``."""
    if search is None:
        b = base_of(rule)
        if isinstance(b, WaldNormal):
            search = [centered_evidence(b, theta, 1)]
        elif horizon is None:
            raise ValueError("a horizon is needed to enumerate Bernoulli evidence")
        else:
            search = binomial_universe(horizon)
    for e in search:
        if member(rule.region(e), theta):
            return e
    return None


def coverage_mc(rule: WaldNormal, theta: float, n: int, reps: int, seed: int) -> float:
    """Fraction of simulated samples of size ``n`` at ``theta`` whose region covers ``theta``."""
    if not isinstance(rule, WaldNormal):
        raise IncompatibleModelError("Monte Carlo coverage is implemented for wald_normal")
    w = rule.half_width(n)

    def work(g: np.random.Generator, size: int) -> int:
        xbar = g.normal(theta, rule.sigma, size=(size, n)).mean(axis=1)
        return int(np.count_nonzero(np.abs(xbar - theta) < w))

    return sum(_rng.run_chunks(seed, reps, work)) / reps


# -- JSON descriptors -------------------------------------------------------------

def rule_to_json(rule: Rule) -> dict:
    if isinstance(rule, WaldNormal):
        out: dict[str, Any] = {"alpha": rule.alpha, "constructor": "wald_normal",
                               "sigma": rule.sigma}
        if rule.ambient != REAL_LINE:
            out["ambient"] = interval_to_json(rule.ambient)
        return out
    if isinstance(rule, WaldBinomial):
        return {"alpha": rule.alpha, "constructor": "wald_binomial"}
    if isinstance(rule, Rigged):
        return {"alpha": rule.alpha, "constructor": "rigged", "base": rule_to_json(rule.base),
                "trigger": list(rule.trigger.observations),
                "horizon": rule.trigger.model.horizon if isinstance(
                    rule.trigger.model, BernoulliSequence) else None,
                "payload": region_to_json(rule.payload)}
    raise TypeError(f"not a confidence rule: {rule!r}")


def rule_from_json(d: Any) -> Rule:
    if not isinstance(d, dict):
        raise RegionFormatError("rule: expected a JSON object")
    kind = d.get("constructor")
    try:
        if kind == "wald_normal":
            amb = interval_from_json(d["ambient"], "ambient") if "ambient" in d else REAL_LINE
            return WaldNormal(float(d["alpha"]), float(d.get("sigma", 1.0)), amb)
        if kind == "wald_binomial":
            return WaldBinomial(float(d["alpha"]))
        if kind == "rigged":
            base = rule_from_json(d["base"])
            obs = d["trigger"]
            if isinstance(obs, str):
                obs = [int(c) for c in obs]
            trig = evidence_for(base, obs, d.get("horizon"))
            return Rigged(base, trig, region_from_json(d["payload"]))
    except KeyError as exc:
        raise RegionFormatError(f"rule: missing field {exc.args[0]!r}") from None
    raise RegionFormatError(f"rule: unknown constructor {kind!r}")


def evidence_to_json(e: Evidence) -> dict:
    if isinstance(e.model, BernoulliSequence):
        return {"model": "bernoulli", "horizon": e.model.horizon,
                "observations": list(e.observations)}
    return {"model": "normal", "sigma": e.model.sigma, "observations": list(e.observations)}


def evidence_from_json(d: Any, rule: Rule | None = None) -> Evidence:
    """Decode evidence; without a ``model`` field the model is taken from ``rule``.

    Bernoulli observations may be given as a bit string such as ``"1011000"``.
    """
    if isinstance(d, (list, str)):
        d = {"observations": d}
    if not isinstance(d, dict) or "observations" not in d:
        raise RegionFormatError("evidence: expected an object with 'observations'")
    obs = d["observations"]
    if isinstance(obs, str):
        if set(obs) - {"0", "1"}:
            raise RegionFormatError(f"evidence: not a bit string: {obs!r}")
        obs = [int(c) for c in obs]
    kind = d.get("model")
    try:
        if kind == "bernoulli":
            model: SamplingModel = BernoulliSequence(int(d.get("horizon", max(len(obs), 1))))
        elif kind == "normal":
            model = NormalKnownSigma(float(d.get("sigma", 1.0)))
        elif kind is None and rule is not None:
            horizon = d.get("horizon")
            model = model_for(rule, None if horizon is None else int(horizon))
            if isinstance(model, BernoulliSequence) and horizon is None:
                model = BernoulliSequence(max(model.horizon, len(obs), 1))
        else:
            raise RegionFormatError(f"evidence: unknown or missing model {kind!r}")
    except (TypeError, ValueError) as exc:
        if isinstance(exc, RegionFormatError):
            raise
        raise RegionFormatError(f"evidence: {exc}") from None
    try:
        return Evidence(model, obs)
    except (TypeError, ValueError) as exc:
        raise IncompatibleModelError(f"evidence does not fit {model}: {exc}") from None

"""Trivalent test outcomes read off from a confidence region."""
from __future__ import annotations

import enum
from collections.abc import Iterable
from dataclasses import dataclass

from .confidence import (
    Evidence,
    Rule,
    binomial_universe,
    covering_evidence,
    precision_candidates,
    satisfies_precision,
)
from .hypothesis_space import (
    RegionSet,
    boundary,
    complement,
    contains,
    full,
    has_nonempty_interior,
    intersects,
    member,
    region_to_json,
)


class Outcome(str, enum.Enum):
    CONFIRM_NULL = "confirm_null"
    CONFIRM_ALT = "confirm_alt"
    INDECISIVE = "indecisive"
    REFUTED_ALL = "refuted_all"


class Modality(str, enum.Enum):
    BOX = "box"
    DIAMOND = "diamond"


@dataclass(frozen=True)
class Verdict:
    outcome: Outcome
    region: RegionSet
    alpha: float | None = None

    @property
    def decisive(self) -> bool:
        return self.outcome in (Outcome.CONFIRM_NULL, Outcome.CONFIRM_ALT)

    def to_json(self) -> dict:
        return {"outcome": self.outcome.value, "region": region_to_json(self.region),
                "alpha": self.alpha}


def evaluate(h0: RegionSet, region: RegionSet, alpha: float | None = None) -> Verdict:
    """Classify ``region`` against the null ``h0`` and its complement.

    An empty region confirms both sides vacuously, so it gets its own
    outcome instead of being forced into one of the three.
    """
    if region.ambient != h0.ambient:
        # let contains() raise the mismatch with both spaces in the message
        contains(h0, region)
    if region.is_empty:
        return Verdict(Outcome.REFUTED_ALL, region, alpha)
    if contains(h0, region):
        return Verdict(Outcome.CONFIRM_NULL, region, alpha)
    if contains(complement(h0), region):
        return Verdict(Outcome.CONFIRM_ALT, region, alpha)
    return Verdict(Outcome.INDECISIVE, region, alpha)


def modal_holds(h: RegionSet, region: RegionSet, operator: Modality | str) -> bool:
    op = Modality(operator)
    if op is Modality.BOX:
        return contains(h, region)
    return intersects(region, h)


def run_test(rule: Rule, e: Evidence, h0: RegionSet) -> Verdict:
    return evaluate(h0, rule.region(e), rule.alpha)


@dataclass(frozen=True)
class Witnesses:
    confirm_null: Evidence | None
    indecisive: Evidence | None
    boundary_point: float | None


def satisfiability_witnesses(rule: Rule, h0: RegionSet,
                             search: Iterable[Evidence] | None = None,
                             horizon: int | None = None) -> Witnesses:
    """Search for evidence realising ConfirmNull and Indecisive verdicts.

    ConfirmNull needs a region inside ``h0``; when ``h0`` has nonempty
    interior the precision search supplies one.  Otherwise every candidate
    in ``search`` (default: the whole Bernoulli universe up to ``horizon``,
    or the Wald normal precision candidates) is tried and the search is
    expected to come back empty.  Indecisive evidence is any evidence whose
    region covers a boundary point of ``h0``.
    """
    search = None if search is None else list(search)
    if has_nonempty_interior(h0):
        confirm = satisfies_precision(rule, h0, search, horizon)
    else:
        if search is not None:
            pool = search
        elif horizon is not None:
            pool = binomial_universe(horizon)
        else:
            pool = list(precision_candidates(rule, full(h0.ambient)))
        confirm = next((e for e in pool
                        if evaluate(h0, rule.region(e)).outcome is Outcome.CONFIRM_NULL), None)

    pts = () if h0.dense_codense else boundary(h0)
    for p in pts:
        e = covering_evidence(rule, p, search, horizon)
        if e is not None and evaluate(h0, rule.region(e)).outcome is Outcome.INDECISIVE:
            return Witnesses(confirm, e, p)
    return Witnesses(confirm, None, pts[0] if pts else None)


def irreflexivity_witness(rule: Rule, h: RegionSet, thetas: Iterable[float],
                          universe: Iterable[Evidence]) -> tuple[float, Evidence] | None:
    """A world (θ, E) where the evidence confirms ``h`` although θ ∉ h."""
    universe = list(universe)
    for theta in thetas:
        if member(h, theta):
            continue
        for e in universe:
            if evaluate(h, rule.region(e)).outcome is Outcome.CONFIRM_NULL:
                return theta, e
    return None

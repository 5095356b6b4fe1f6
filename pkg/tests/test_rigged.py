from __future__ import annotations

import math
from fractions import Fraction

import frozen
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modalconfirm.confidence import (
    BernoulliSequence,
    IncompatibleModelError,
    Rigged,
    WaldBinomial,
    WaldNormal,
    bits,
)
from modalconfirm.hypothesis_space import UNIT_INTERVAL, closed, empty, full, point
from modalconfirm.power import theta_grid
from modalconfirm.rigged import (
    rigged_level,
    sup_event_probability,
    topological_confidence_violations,
    topological_coverage,
)

GRID101 = theta_grid(0, 1, 101)
bitstrings = st.text(alphabet="01", min_size=7, max_size=7)


class Vacuous(WaldBinomial):
    """Always returns the whole parameter space."""

    def region(self, e):
        return full(UNIT_INTERVAL)


def test_all_ones_peaks_at_one():
    e = bits("1111111")
    assert sup_event_probability(e.model, e, GRID101) == (1.0, 1.0)


def test_two_letter_event_peaks_at_half():
    e = bits("10", 7)
    p, t = sup_event_probability(e.model, e, GRID101)
    assert (p, t) == (0.25, 0.5)
    fine = np.linspace(0, 1, 100_001)
    assert np.max(fine * (1 - fine)) <= p


def test_empty_event_has_probability_one():
    e = bits("", 7)
    assert sup_event_probability(e.model, e, GRID101)[0] == 1.0


def test_event_longer_than_horizon_rejected():
    with pytest.raises(ValueError):
        sup_event_probability(BernoulliSequence(3), bits("1011000"), GRID101)


@given(bitstrings)
def test_grid_argmax_is_near_analytic_maximiser(s):
    k, n = s.count("1"), len(s)
    grid = np.array(theta_grid(0, 1, 51))
    vals = grid**k * (1 - grid) ** (n - k)
    assert abs(grid[np.argmax(vals)] - k / n) <= 1 / 50 + 1e-12
    p, t = sup_event_probability(BernoulliSequence(7), bits(s), grid)
    assert t == pytest.approx(k / n) and p >= vals.max()
    assert p == pytest.approx(float(Fraction(k, n) ** k * Fraction(n - k, n) ** (n - k)), rel=1e-12)


def test_rigged_demo_numbers():
    demo = rigged_level(WaldBinomial(0.04), bits("1011000"), point(0.5, UNIT_INTERVAL), GRID101)
    assert demo.sup_trigger_prob == pytest.approx(float(frozen.GAMMA_1011000), abs=1e-15)
    assert demo.rigged_level_bound == demo.base_alpha + demo.sup_trigger_prob
    # the base interval is far from its nominal level at n = 7
    assert demo.base_exact_level == pytest.approx(frozen.WALD_BINOMIAL_LEVEL_N7_ALPHA04_GRID101,
                                                  abs=1e-12)
    assert demo.to_json()["trigger"] == "1011000"


def test_zero_probability_trigger_leaves_base_level():
    demo = rigged_level(WaldBinomial(0.04), bits("1011000"), point(0.5, UNIT_INTERVAL), [0.0])
    assert demo.sup_trigger_prob == 0.0
    assert demo.rigged_level_bound == 0.04


def test_full_payload_never_hurts_coverage():
    demo = rigged_level(WaldBinomial(0.05), bits("0000000"), full(UNIT_INTERVAL), GRID101)
    for p in demo.per_theta:
        assert p.rigged_coverage >= p.base_coverage


@given(bitstrings, st.sampled_from([point(0.5, UNIT_INTERVAL), empty(UNIT_INTERVAL),
                                    closed(0.9, 1.0, UNIT_INTERVAL)]))
@settings(max_examples=25, deadline=None)
def test_pointwise_union_bound(s, payload):
    demo = rigged_level(WaldBinomial(0.05), bits(s), payload, theta_grid(0, 1, 21))
    for p in demo.per_theta:
        assert p.union_bound_holds
        assert p.base_coverage - p.rigged_coverage <= demo.sup_trigger_prob + 1e-12


def test_exact_coverage_matches_oracle():
    pts = topological_coverage(WaldBinomial(0.05), theta_grid(0, 1, 11), 7)
    for p, want in zip(pts, frozen.WALD_BINOMIAL_COVERAGE_N7):
        assert p.coverage == pytest.approx(want, abs=1e-12)
        assert p.topo_coverage == p.coverage  # every Wald binomial region is open-bodied
        assert p.interior_prob == pytest.approx(1.0, abs=1e-12)


def test_whole_space_rule_covers_everything():
    pts = topological_coverage(Vacuous(0.05), theta_grid(0, 1, 11), 7)
    assert all(p.coverage == pytest.approx(1.0, abs=1e-12) for p in pts)


def test_point_payload_loses_topological_coverage_on_trigger():
    rule = Rigged(WaldBinomial(0.05), bits("1011000"), point(3 / 7, UNIT_INTERVAL))
    base = topological_coverage(WaldBinomial(0.05), [3 / 7], 7)[0]
    rig = topological_coverage(rule, [3 / 7])[0]
    gamma = float(frozen.GAMMA_1011000)
    assert rig.coverage == pytest.approx(base.coverage, abs=1e-12)
    assert base.topo_coverage - rig.topo_coverage == pytest.approx(gamma, rel=1e-9)
    assert rig.interior_prob == pytest.approx(1 - gamma, rel=1e-12)
    assert topological_confidence_violations([rig], 0.05) == []
    assert topological_confidence_violations([rig], 0.001) == [rig]


def test_normal_topological_coverage_by_simulation():
    reps = 4000
    (p,) = topological_coverage(WaldNormal(0.05), [0.2], n=5, reps=reps, seed=1)
    assert p.topo_coverage == p.coverage
    assert abs(p.coverage - 0.95) <= 3 * math.sqrt(0.05 * 0.95 / reps)
    with pytest.raises(ValueError):
        topological_coverage(WaldNormal(0.05), [0.2])


def test_rigging_needs_bernoulli_base():
    with pytest.raises(IncompatibleModelError):
        rigged_level(WaldNormal(0.05), bits("1"), point(0.0), [0.0])

from __future__ import annotations

import frozen
import pytest
from hypothesis import given
from hypothesis import strategies as st

from modalconfirm.confidence import WaldNormal
from modalconfirm.hypothesis_space import NONNEGATIVE, REAL_LINE, closed
from modalconfirm.severity import (
    TheorySpec,
    compute_losses,
    constant_predictor,
    linear_predictor,
    severity_bound_check,
)
from modalconfirm.severity import (
    test_adequacy as adequacy,
)
from modalconfirm.verdict import Outcome, run_test


def identity(x):
    return x


def test_perfect_predictor_passes():
    xs = [0.1 * i for i in range(30)]
    spec = TheorySpec(linear_predictor(2.0, 1.0), margin=0.1)
    res = adequacy(spec, xs, [2 * x + 1 for x in xs])
    assert res.verdict.outcome is Outcome.CONFIRM_NULL
    assert res.passed
    assert res.summary().startswith("passed a severe test")


def test_loss_twice_the_margin_is_inadequate():
    n = 400
    xs = [0.0] * n
    ys = [1.0 + (0.05 if i % 2 else -0.05) for i in range(n)]
    res = adequacy(TheorySpec(constant_predictor(0.0), margin=0.5), xs, ys)
    assert res.mean_loss == pytest.approx(1.0)
    assert res.verdict.outcome is Outcome.CONFIRM_ALT
    assert res.summary().startswith("empirically inadequate")


@pytest.mark.parametrize(("n", "outcome"), [
    (frozen.N_HALF_WIDTH_BELOW_QUARTER - 1, Outcome.INDECISIVE),
    (frozen.N_HALF_WIDTH_BELOW_QUARTER, Outcome.CONFIRM_NULL),
])
def test_sample_size_threshold(n, outcome):
    spec = TheorySpec(identity, margin=0.5)
    res = adequacy(spec, [0.0] * n, [0.25] * n, rule=WaldNormal(0.05, 1.0))
    assert res.verdict.outcome is outcome
    if outcome is Outcome.INDECISIVE:
        assert res.summary().startswith("undecided")


@given(st.lists(st.floats(-5, 5), min_size=2, max_size=40), st.floats(0.05, 3))
def test_verdict_is_the_plain_test_on_losses(ys, margin):
    spec = TheorySpec(constant_predictor(0.0), margin=margin)
    res = adequacy(spec, [0.0] * len(ys), ys)
    assert res.verdict == run_test(res.rule, res.evidence, res.h_tau)
    assert res.losses == tuple(abs(y) for y in ys)


def test_signed_loss_uses_symmetric_margin():
    spec = TheorySpec(identity, margin=0.3, loss_name="signed")
    assert spec.h_tau == closed(-0.3, 0.3, REAL_LINE)
    assert TheorySpec(identity, margin=0.3).h_tau == closed(0.0, 0.3, NONNEGATIVE)
    res = adequacy(spec, [0.0] * 50, [(-1) ** i * 0.1 for i in range(50)])
    assert res.passed
    s = res.summary()
    assert "loss=signed" in s and "M=0.3" in s and "alpha=0.05" in s


def test_squared_loss_and_custom_loss():
    spec = TheorySpec(identity, margin=1.0, loss_name="squared")
    assert compute_losses(spec, [0.0, 1.0], [2.0, -1.0]) == [4.0, 4.0]
    custom = TheorySpec(identity, margin=1.0, loss=lambda p, a: abs(p - a) / 2)
    res = adequacy(custom, [0.0, 0.0, 0.0], [0.1, 0.2, 0.3])
    assert res.loss_name == "custom"


@pytest.mark.parametrize(("xs", "ys"), [([0.0], [1.0, 2.0]), ([], [])])
def test_bad_trial_data(xs, ys):
    with pytest.raises(ValueError):
        adequacy(TheorySpec(identity, margin=1.0), xs, ys)


def test_single_trial_needs_supplied_sigma():
    spec = TheorySpec(identity, margin=1.0)
    with pytest.raises(ValueError):
        adequacy(spec, [0.0], [0.1])
    assert adequacy(spec, [0.0], [0.1], rule=WaldNormal(0.05, 0.01)).passed


def test_negative_nonnegative_loss_rejected():
    spec = TheorySpec(identity, margin=1.0, loss=lambda p, a: p - a, signed=False)
    with pytest.raises(ValueError):
        compute_losses(spec, [0.0], [1.0])


@pytest.mark.parametrize("kw", [{"margin": 0.0}, {"margin": 1.0, "alpha": 1.0},
                                {"margin": 1.0, "loss_name": "hinge"}])
def test_bad_spec(kw):
    with pytest.raises(ValueError):
        TheorySpec(identity, **kw)


def test_json_summary_fields():
    res = adequacy(TheorySpec(identity, margin=1.0), [0.0] * 5, [0.1, 0.2, 0.1, 0.2, 0.1])
    doc = res.to_json()
    assert doc["n"] == 5 and doc["passed"] is res.passed
    assert doc["summary"] == res.summary()


def test_severity_bound_outside_margin():
    h = closed(-0.2, 0.2, REAL_LINE)
    pts = severity_bound_check(h, WaldNormal(0.05, 1.0), [0.3, 0.5], n=100, reps=4000, seed=7)
    assert all(p.holds for p in pts)
    with pytest.raises(ValueError):
        severity_bound_check(h, WaldNormal(0.05, 1.0), [0.1], n=100, reps=10, seed=7)

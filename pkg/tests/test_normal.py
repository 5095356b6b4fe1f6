from __future__ import annotations

import math

import frozen
import mpmath as mp
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modalconfirm import normal

mp.mp.dps = 40


@pytest.mark.parametrize("p", [1e-300, 1e-20, 1e-8, 0.001, 0.025, 0.3, 0.5, 0.7, 0.975,
                               0.999, 1 - 1e-12])
def test_ppf_against_mpmath(p):
    with mp.workdps(400):
        want = float(mp.sqrt(2) * mp.erfinv(2 * mp.mpf(p) - 1))
    assert normal.ppf(p) == pytest.approx(want, rel=4e-15, abs=1e-15)


@given(st.floats(min_value=1e-15, max_value=1 - 1e-15))
@settings(max_examples=300)
def test_ppf_inverts_cdf(p):
    assert normal.cdf(normal.ppf(p)) == pytest.approx(p, rel=1e-12, abs=1e-15)


@given(st.floats(min_value=-30, max_value=30))
def test_cdf_against_mpmath(x):
    # erfc loses a few digits in the far lower tail
    assert normal.cdf(x) == pytest.approx(float(mp.ncdf(x)), rel=1e-12, abs=1e-300)


@given(st.floats(min_value=-30, max_value=30))
def test_cdf_and_sf_sum_to_one(x):
    assert normal.cdf(x) + normal.sf(x) == pytest.approx(1.0, abs=1e-15)


@given(st.floats(min_value=-12, max_value=12), st.floats(min_value=0, max_value=5))
def test_prob_between_matches_mpmath(a, width):
    b = a + width
    want = float(mp.ncdf(b) - mp.ncdf(a))
    # narrow ranges are accurate in absolute, not relative, terms
    assert normal.prob_between(a, b) == pytest.approx(want, rel=1e-12, abs=2e-16)


def test_prob_between_empty_range_is_zero():
    assert normal.prob_between(1.0, 0.5) == 0.0


def test_two_sided_z_matches_frozen_oracle():
    assert normal.two_sided_z(0.05) == pytest.approx(frozen.Z_975, rel=1e-15)


def test_ppf_endpoints_are_infinite():
    assert normal.ppf(0.0) == -math.inf
    assert normal.ppf(1.0) == math.inf


@pytest.mark.parametrize("p", [-0.1, 1.5, math.nan])
def test_ppf_rejects_out_of_range(p):
    with pytest.raises(ValueError):
        normal.ppf(p)

"""Regenerate tests/frozen.py from independent oracles.

Uses mpmath at 50 digits and exact fractions; imports nothing from the
package under test.  Run: python tests/make_frozen.py > tests/frozen.py
"""
from __future__ import annotations

from fractions import Fraction
from math import comb

import mpmath as mp

mp.mp.dps = 50


def z(alpha):
    return mp.sqrt(2) * mp.erfinv(1 - mp.mpf(alpha))


def phi(x):
    return mp.ncdf(x)


def wald_binomial_covers(k, n, theta, alpha):
    zz = z(alpha)
    if k == 0:
        return 0 <= theta < zz / (2 * n)
    if k == n:
        return 1 - zz / (2 * n) < theta <= 1
    p = mp.mpf(k) / n
    h = zz * mp.sqrt(p * (1 - p) / n)
    return p - h < theta < p + h


def wald_binomial_coverage(theta, n, alpha):
    theta = mp.mpf(theta)
    return mp.fsum(comb(n, k) * theta**k * (1 - theta) ** (n - k)
                   for k in range(n + 1) if wald_binomial_covers(k, n, theta, alpha))


def main() -> None:
    z975 = z(0.05)
    w100 = z975 / 10
    # h0 = [-0.2, 0.2], sigma 1, n = 100, theta = 0
    d1 = phi((mp.mpf("0.2") - w100) * 10) - phi(-(mp.mpf("0.2") - w100) * 10)
    d0 = 2 * (1 - phi((mp.mpf("0.2") + w100) * 10))
    # theta = M = 0.2, n = 400: s = 0.05
    w400 = z975 / 20
    s = mp.mpf("0.05")
    m = mp.mpf("0.2")
    b_d1 = phi((m - w400 - m) / s) - phi((-m + w400 - m) / s)
    b_d0 = (1 - phi((m + w400 - m) / s)) + phi((-m - w400 - m) / s)
    gamma = Fraction(3**3 * 4**4, 7**7)
    grid10 = [Fraction(i, 10) for i in range(11)]
    cov = [wald_binomial_coverage(mp.mpf(t.numerator) / t.denominator, 7, 0.05) for t in grid10]
    grid101 = [mp.mpf(i) / 100 for i in range(101)]
    level04 = max(1 - wald_binomial_coverage(t, 7, 0.04) for t in grid101)
    # smallest n at which a Wald normal half-width (sigma 1, alpha 0.05) fits below 0.25
    n_fit = int(mp.ceil((z975 / mp.mpf("0.25")) ** 2))

    print('"""Oracle values frozen by tests/make_frozen.py (mpmath, 50 digits; exact fractions)."""')
    print("from fractions import Fraction\n")
    print(f"Z_975 = {mp.nstr(z975, 20)}")
    print(f"HALF_WIDTH_N100 = {mp.nstr(w100, 20)}")
    print(f"DELTA1_TOST_THETA0_N100 = {mp.nstr(d1, 20)}")
    print(f"DELTA0_TOST_THETA0_N100 = {mp.nstr(d0, 20)}")
    print(f"DELTA1_TOST_THETA_M_N400 = {mp.nstr(b_d1, 20)}")
    print(f"DELTA0_TOST_THETA_M_N400 = {mp.nstr(b_d0, 20)}")
    print(f"GAMMA_1011000 = Fraction({gamma.numerator}, {gamma.denominator})")
    print(f"RIGGED_BOUND_ALPHA04 = Fraction(4, 100) + GAMMA_1011000  # = {float(Fraction(4, 100) + gamma)!r}")
    print("# exact coverage of the Wald binomial interval, n = 7, alpha = 0.05, theta = 0, 0.1, ..., 1")
    print("WALD_BINOMIAL_COVERAGE_N7 = (")
    for c in cov:
        print(f"    {mp.nstr(c, 17)},")
    print(")")
    print(f"WALD_BINOMIAL_LEVEL_N7_ALPHA04_GRID101 = {mp.nstr(level04, 17)}")
    print(f"N_HALF_WIDTH_BELOW_QUARTER = {n_fit}")


if __name__ == "__main__":
    main()

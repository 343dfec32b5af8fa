"""Special-function accuracy against independent high-precision oracles."""

import math
from fractions import Fraction

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from walklab import specfun
from walklab.errors import DomainError

mp.mp.dps = 40


# ----------------------------------------------------------------------
# log_gamma
# ----------------------------------------------------------------------

def test_log_gamma_trivial_values():
    assert specfun.log_gamma(1.0) == pytest.approx(0.0, abs=1e-15)
    assert specfun.log_gamma(5.0) == pytest.approx(math.log(24.0), rel=1e-14)


def test_log_gamma_against_exact_factorial():
    # ln(100!) from exact big-integer arithmetic
    exact = math.log(math.factorial(100))
    assert specfun.log_gamma(101.0) == pytest.approx(exact, rel=1e-14)


@pytest.mark.parametrize("z", [0.5, 0.75, 1.5, 2.5, 7.99, 8.0, 8.01, 17.3,
                               100.0, 1234.5, 1e4, 1e6])
def test_log_gamma_vs_mpmath(z):
    ref = float(mp.loggamma(z))
    err = abs(specfun.log_gamma(z) - ref)
    assert err <= 1e-13 * max(abs(ref), 1.0)


def test_log_gamma_recurrence():
    # ln Gamma(z+1) - ln Gamma(z) = ln z
    for z in np.geomspace(1.0, 1e4, 60):
        lhs = specfun.log_gamma(z + 1.0) - specfun.log_gamma(z)
        assert lhs == pytest.approx(math.log(z), abs=1e-12 * max(1.0, abs(math.log(z))))


def test_log_gamma_domain():
    with pytest.raises(DomainError):
        specfun.log_gamma(0.0)
    with pytest.raises(DomainError):
        specfun.log_gamma(-3.5)


# ----------------------------------------------------------------------
# digamma
# ----------------------------------------------------------------------

def test_digamma_euler_mascheroni():
    # psi(1) = -gamma, reference from 40-digit arithmetic
    ref = float(-mp.euler)
    assert specfun.digamma(1.0) == pytest.approx(ref, abs=1e-13)


def test_digamma_at_two():
    ref = float(1 - mp.euler)
    assert specfun.digamma(2.0) == pytest.approx(ref, abs=1e-13)


@pytest.mark.parametrize("z", [0.5, 1.0, 3.7, 8.0, 42.0, 1e3, 1e6])
def test_digamma_vs_mpmath(z):
    assert abs(specfun.digamma(z) - float(mp.digamma(z))) <= 1e-12


def test_digamma_is_loggamma_derivative():
    # central differences of log_gamma at z=10, h in {1e-2, 1e-3}: O(h^2)
    z = 10.0
    ref = specfun.digamma(z)
    for h in (1e-2, 1e-3):
        fd = (specfun.log_gamma(z + h) - specfun.log_gamma(z - h)) / (2 * h)
        # psi'''(10)/6 ~ 1.8e-4, so the h^2 error is ~2e-8 resp. ~2e-10
        assert abs(fd - ref) <= 0.01 * h * h


@given(st.floats(min_value=1.0, max_value=1e4))
@settings(max_examples=60, deadline=None)
def test_digamma_recurrence(z):
    assert specfun.digamma(z + 1.0) - specfun.digamma(z) == pytest.approx(
        1.0 / z, abs=1e-12)


def test_digamma_domain():
    with pytest.raises(DomainError):
        specfun.digamma(-1.0)


# ----------------------------------------------------------------------
# scaled Bessels
# ----------------------------------------------------------------------

def test_bessel_at_zero():
    assert specfun.bessel_i0e(0.0) == 1.0
    assert specfun.bessel_i1e(0.0) == 0.0


def test_i0e_matches_leading_asymptotics():
    # (2 pi z)^{-1/2} (1 + 1/(8z)) at z=100, relative 1e-4
    z = 100.0
    approx = (1.0 + 1.0 / (8 * z)) / math.sqrt(2 * math.pi * z)
    assert specfun.bessel_i0e(z) == pytest.approx(approx, rel=1e-4)


@pytest.mark.parametrize("z", [0.5, 2.0, 10.0])
def test_i0e_against_series_oracle(z):
    # independent truncated power series sum_k (z^2/4)^k / (k!)^2, exact terms
    q = Fraction(z) ** 2 / 4
    term = Fraction(1)
    s = Fraction(1)
    for k in range(1, 60):
        term *= q / (k * k)
        s += term
    ref = float(s) * math.exp(-z)
    assert specfun.bessel_i0e(z) == pytest.approx(ref, rel=1e-12)


@pytest.mark.parametrize("z", [0.1, 1.0, 8.0, 15.9, 16.0, 16.1, 50.0, 1e3, 1e5])
def test_bessels_vs_mpmath(z):
    i0 = float(mp.besseli(0, z) * mp.exp(-z))
    i1 = float(mp.besseli(1, z) * mp.exp(-z))
    assert specfun.bessel_i0e(z) == pytest.approx(i0, rel=1e-12)
    assert specfun.bessel_i1e(z) == pytest.approx(i1, rel=1e-12, abs=1e-300)


def test_i0e_strictly_decreasing():
    zs = np.geomspace(1e-3, 1e4, 200)
    vals = [specfun.bessel_i0e(z) for z in zs]
    assert all(a > b for a, b in zip(vals, vals[1:]))


def test_bessel_wronskian_fd():
    # d/dz i0e = i1e - i0e, checked by central differences
    for z in (0.7, 5.0, 16.0, 40.0, 300.0):
        h = 1e-5 * max(1.0, z)
        fd = (specfun.bessel_i0e(z + h) - specfun.bessel_i0e(z - h)) / (2 * h)
        ref = specfun.bessel_i1e(z) - specfun.bessel_i0e(z)
        assert fd == pytest.approx(ref, abs=5e-9)


def test_bessel_domain():
    with pytest.raises(DomainError):
        specfun.bessel_i0e(-1.0)
    with pytest.raises(DomainError):
        specfun.bessel_i1e(-0.1)


# ----------------------------------------------------------------------
# stirling_approx
# ----------------------------------------------------------------------

def test_stirling_z10_three_terms():
    # relative error vs the log_gamma oracle; the next brace term is
    # -139/(51840 z^3) ~ 2.7e-6 at z=10
    ref = math.exp(specfun.log_gamma(11.0))
    rel = abs(specfun.stirling_approx(10.0, 3) / ref - 1.0)
    assert rel < 3.5e-6
    assert rel > 1e-7


def test_stirling_z1_one_term():
    val = specfun.stirling_approx(1.0, 1)
    assert val == pytest.approx(math.sqrt(2 * math.pi) * math.exp(-1.0), rel=1e-12)
    assert abs(val - 1.0) == pytest.approx(0.0779, abs=5e-4)


def test_stirling_monotone_improvement():
    exact = float(math.factorial(100))
    e1 = abs(specfun.stirling_approx(100.0, 1) - exact)
    e2 = abs(specfun.stirling_approx(100.0, 2) - exact)
    e3 = abs(specfun.stirling_approx(100.0, 3) - exact)
    assert e3 < e2 < e1


def test_stirling_domain():
    with pytest.raises(DomainError):
        specfun.stirling_approx(0.5, 1)
    with pytest.raises(DomainError):
        specfun.stirling_approx(10.0, 4)


# ----------------------------------------------------------------------
# incomplete gamma (chi-square tail helper)
# ----------------------------------------------------------------------

@pytest.mark.parametrize("a,x", [(0.5, 0.2), (1.0, 1.0), (5.0, 3.0),
                                 (21.0, 33.8), (50.0, 40.0), (200.0, 230.0)])
def test_gammainc_q_vs_mpmath(a, x):
    ref = float(mp.gammainc(a, x, regularized=True))
    assert specfun.gammainc_q(a, x) == pytest.approx(ref, rel=1e-12, abs=1e-15)


def test_gammainc_q_edges():
    assert specfun.gammainc_q(3.0, 0.0) == 1.0
    with pytest.raises(DomainError):
        specfun.gammainc_q(-1.0, 2.0)

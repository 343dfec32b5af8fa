"""Deviation metrics, power-law fitting, asymptotics and gradient statistics."""

import math
from fractions import Fraction

import numpy as np
import pytest
from scipy import integrate, optimize

from walklab import deviation, kernels
from walklab.deviation import DeviationSeries, fit_power_law
from walklab.errors import DomainError, UnknownMetricError
from walklab.kernels import Model, Params


# ----------------------------------------------------------------------
# l2_deviation
# ----------------------------------------------------------------------

def test_self_pair_is_zero():
    assert deviation.l2_deviation("rho_g_g", 17.0) == 0.0
    assert deviation.l2_deviation("flux_rw_rw", 40.0) == 0.0


def test_reversed_pair_is_same_metric():
    a = deviation.l2_deviation("rho_rw_g", 50.0)
    b = deviation.l2_deviation("rho_g_rw", 50.0)
    assert a == b


def test_unknown_metric():
    with pytest.raises(UnknownMetricError):
        deviation.l2_deviation("rho_rw_xx", 10.0)
    with pytest.raises(UnknownMetricError):
        deviation.l2_deviation("banana", 10.0)


def test_density_metrics_vs_dense_trapezoid_goldens():
    # independent oracle: n=1e5-panel trapezoid over [0, t], frozen values
    t = 100.0
    xs = np.linspace(0.0, t, 100001)
    for pair, frozen in (("rho_rw_te", 4.152539215212e-04),
                         ("rho_rw_g", 2.539604050396e-04)):
        f1, f2 = pair.split("_")[1:]
        funcs = {"rw": kernels.rho_rw, "te": kernels.rho_te, "g": kernels.rho_g}
        vals = np.array([(funcs[f1](x, t) - funcs[f2](x, t)) ** 2 for x in xs])
        oracle = math.sqrt(np.trapezoid(vals, xs))
        got = deviation.l2_deviation(pair, t)
        assert got == pytest.approx(oracle, rel=1e-8)
        assert got == pytest.approx(frozen, rel=1e-9)


@pytest.mark.parametrize("pair", deviation.METRICS[:6])
def test_density_gradient_metrics_vs_scipy(pair):
    t = 30.0
    field, a, b = pair.split("_")
    funcs = {
        ("rho", "rw"): lambda x: kernels.rho_rw(x, t),
        ("rho", "te"): lambda x: kernels.rho_te(x, t),
        ("rho", "g"): lambda x: kernels.rho_g(x, t),
        ("grad", "rw"): lambda x: kernels.grad_rw(x, t) if abs(x) < t else 0.0,
        ("grad", "te"): lambda x: kernels.grad_te(x, t),
        ("grad", "g"): lambda x: kernels.grad_g(x, t),
    }
    f1 = funcs[(field, a)]
    f2 = funcs[(field, b)]
    ref, _ = integrate.quad(lambda x: (f1(x) - f2(x)) ** 2, 0.0, t,
                            epsabs=1e-22, epsrel=1e-10, limit=400)
    assert deviation.l2_deviation(pair, t) == pytest.approx(
        math.sqrt(ref), rel=1e-7)


def test_flux_metric_vs_nested_scipy():
    # oracle: J from scipy quadrature of the analytic time derivatives
    from walklab._backends import core
    t = 30.0

    def j_rw(xs):
        v, _ = integrate.quad(lambda y: core.dt_rho_rw(y, t), xs, t,
                              epsabs=1e-15, epsrel=1e-12, limit=300)
        return 2.0 ** (-(t + 1.0)) + v

    def j_te(xs):
        v, _ = integrate.quad(lambda y: core.dt_rho_te(y, t, 0.5, 0.5), xs, t,
                              epsabs=1e-15, epsrel=1e-12, limit=300)
        return math.exp(-t) + v

    ref, _ = integrate.quad(lambda x: (j_rw(x) - j_te(x)) ** 2, 0.0, t,
                            epsabs=1e-24, epsrel=1e-8, limit=200)
    assert deviation.l2_deviation("flux_rw_te", t) == pytest.approx(
        math.sqrt(ref), rel=1e-6)


def test_flux_metric_consistent_with_fd_flux():
    # the metric's Leibniz flux equals the public FD flux to O(h^2)
    from walklab import transport
    t = 50.0
    for x in (2.0, 7.0, 20.0):
        fd = (transport.flux(Model.RW, x, t).j - transport.flux(Model.G, x, t).j)
        from walklab._backends import core
        v, _ = integrate.quad(lambda y: core.dt_rho_rw(y, t) - core.dt_rho_g(y, t, 0.5),
                              x, t, epsabs=1e-16, epsrel=1e-12, limit=300)
        leib = 2.0 ** (-(t + 1.0)) - core.flux_g(t, t, 0.5) + v
        assert fd == pytest.approx(leib, rel=5e-5, abs=1e-12)


def test_metric_peak_scale_matches_figure_curves():
    # pointwise peak of |rho_RW - rho_G| shrinks as t^{-3/2}
    peaks = {}
    for t in (30.0, 100.0):
        xs = np.linspace(0.0, 3.0 * math.sqrt(t), 800)
        peaks[t] = max(abs(kernels.rho_rw(x, t) - kernels.rho_g(x, t)) for x in xs)
    assert peaks[30.0] / peaks[100.0] == pytest.approx((100.0 / 30.0) ** 1.5,
                                                       rel=0.15)


def test_l2_scaling_with_params():
    # general microparameters rescale the metric by the documented factors
    p = Params(dx=2.0, dt=4.0)
    t = 120.0
    base = deviation.l2_deviation("rho_rw_g", t / p.dt)
    assert deviation.l2_deviation("rho_rw_g", t, p) == pytest.approx(
        base / math.sqrt(p.dx), rel=1e-12)


# ----------------------------------------------------------------------
# series + fits
# ----------------------------------------------------------------------

def test_fit_exact_power_law():
    ts = np.geomspace(10.0, 1000.0, 12)
    series = DeviationSeries("synthetic", ts, 3.7 * ts ** -1.5)
    fit = fit_power_law(series)
    assert fit.exponent == pytest.approx(-1.5, abs=1e-12)
    assert fit.log_amplitude == pytest.approx(math.log(3.7), abs=1e-12)
    assert fit.rms_residual < 1e-13


def test_fit_scaling_invariance():
    ts = np.geomspace(5.0, 500.0, 9)
    vals = 0.3 * ts ** -1.2 * (1.0 + 0.05 * np.sin(np.log(ts)))
    f1 = fit_power_law(DeviationSeries("s", ts, vals))
    f2 = fit_power_law(DeviationSeries("s", ts, 7.25 * vals))
    assert f1.exponent == pytest.approx(f2.exponent, abs=1e-12)
    assert f2.log_amplitude - f1.log_amplitude == pytest.approx(
        math.log(7.25), abs=1e-12)


def test_fit_window_and_errors():
    ts = np.geomspace(1.0, 100.0, 10)
    series = DeviationSeries("s", ts, ts ** -1.0)
    with pytest.raises(DomainError):
        fit_power_law(series, window=(50.0, 60.0))  # < 5 samples
    bad = DeviationSeries("s", ts, np.zeros_like(ts))
    with pytest.raises(DomainError):
        fit_power_law(bad)


def test_series_validation():
    with pytest.raises(DomainError):
        DeviationSeries("s", np.array([2.0, 1.0]), np.array([1.0, 1.0]))
    with pytest.raises(DomainError):
        DeviationSeries("s", np.array([1.0, 2.0]), np.array([1.0, -1.0]))


def test_series_strictly_decreasing(nine_fits):
    for m, (series, _) in nine_fits.items():
        assert np.all(np.diff(series.values) < 0), m


def test_exponent_ordering_as_measured(nine_fits):
    # verified ordering: gradient and flux metrics decay distinctly faster
    # than density metrics, and every exponent is below -1
    exps = {m: f.exponent for m, (_, f) in nine_fits.items()}
    dens = [exps[m] for m in deviation.METRICS[:3]]
    grad = [exps[m] for m in deviation.METRICS[3:6]]
    flux = [exps[m] for m in deviation.METRICS[6:]]
    assert all(e < -1.0 for e in exps.values())
    assert max(grad) < min(dens)
    assert max(flux) < min(dens)


def test_density_exponent_value(nine_fits):
    # the rho_RW-TE metric decays close to t^{-1.272} on the standard window
    assert nine_fits["rho_rw_te"][1].exponent == pytest.approx(-1.272, abs=0.08)


# ----------------------------------------------------------------------
# central asymptotics
# ----------------------------------------------------------------------

def test_central_asymptotics_g():
    exact, asym = deviation.central_asymptotics(Model.G, 64.0)
    assert exact == asym == kernels.rho_g(0.0, 64.0)


def test_central_asymptotics_rw_bigint():
    exact, asym = deviation.central_asymptotics(Model.RW, 100.0)
    oracle = float(Fraction(math.comb(100, 50), 2 ** 101))
    assert exact == pytest.approx(oracle, rel=1e-13)
    assert abs(exact - asym) < 1e-6


def test_central_asymptotics_te():
    exact, asym = deviation.central_asymptotics(Model.TE, 100.0)
    assert exact == pytest.approx(kernels.rho_te(0.0, 100.0), rel=1e-15)
    assert abs(exact - asym) < 1e-6


def test_central_asymptotics_next_order_bounded():
    prods = []
    for t in (10.0, 100.0, 1000.0, 10000.0):
        for m in (Model.RW, Model.TE):
            exact, asym = deviation.central_asymptotics(m, t)
            prods.append(abs(exact - asym) * t ** 2.5)
    assert max(prods) < 0.1


def test_central_asymptotics_domain():
    with pytest.raises(DomainError):
        deviation.central_asymptotics(Model.RW, 5.0)


# ----------------------------------------------------------------------
# max-gradient statistics
# ----------------------------------------------------------------------

def test_max_gradient_g_exact():
    x_max, g_max, width = deviation.max_gradient_stats(Model.G, 100.0)
    assert x_max == pytest.approx(10.0, abs=1e-5)
    assert g_max == pytest.approx(1.0 / (math.sqrt(2 * math.pi * math.e) * 100.0),
                                  rel=1e-10)
    # FWHM oracle: solve u e^{-u^2/2} = e^{-1/2}/2 on both sides of u=1
    target = 0.5 * math.exp(-0.5)
    f = lambda u: u * math.exp(-u * u / 2.0) - target
    u1 = optimize.brentq(f, 1e-9, 1.0)
    u2 = optimize.brentq(f, 1.0, 6.0)
    assert width == pytest.approx((u2 - u1) * 10.0, rel=1e-6)
    assert width == pytest.approx(1.61 * 10.0, rel=0.01)


def test_max_gradient_drift_velocity():
    # the maximum location moves at sqrt(D/2t)
    t = 100.0
    x1, _, _ = deviation.max_gradient_stats(Model.G, t)
    x2, _, _ = deviation.max_gradient_stats(Model.G, t + 1.0)
    assert x2 - x1 == pytest.approx(math.sqrt(0.25 / t), rel=0.01)


def test_max_gradient_te_and_rw_near_gaussian():
    for m in (Model.TE, Model.RW):
        x_max, g_max, _ = deviation.max_gradient_stats(m, 400.0)
        assert x_max == pytest.approx(20.0, abs=0.1)
        assert g_max == pytest.approx(
            1.0 / (math.sqrt(2 * math.pi * math.e) * 400.0), rel=5e-3)


def test_gradient_ratio_plateau():
    # the 1/t law: coefficients at t=500 and t=2000 agree within 1%
    c_te_1, c_g_1 = deviation.gradient_ratio_coeffs(500.0)
    c_te_2, c_g_2 = deviation.gradient_ratio_coeffs(2000.0)
    assert abs(c_te_2 / c_te_1 - 1.0) < 0.01
    assert abs(c_g_2 / c_g_1 - 1.0) < 0.01


# ----------------------------------------------------------------------
# applicability + fluctuations
# ----------------------------------------------------------------------

def test_applicability_examples():
    ok, tr, sr = deviation.applicability(0.0, 1000.0)
    assert ok and tr == 1000.0 and sr == 0.0
    ok, _, sr = deviation.applicability(50.0, 50.0)
    assert not ok and sr == 1.0
    ok, tr, _ = deviation.applicability(5.0, 9.0, factor=10.0)
    assert not ok and tr == 9.0


def test_relative_fluctuation():
    assert deviation.relative_fluctuation(10 ** 6) == pytest.approx(1e-3, rel=1e-12)
    assert deviation.relative_fluctuation(1) == 1.0
    assert deviation.relative_fluctuation(4) == 0.5
    with pytest.raises(DomainError):
        deviation.relative_fluctuation(0)

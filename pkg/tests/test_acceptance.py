"""Acceptance gate: every documented criterion at its stated tolerance.

One test per criterion; each prints a PASS/FAIL line with the measured
values. Three criteria (the gradient-maximum coefficients, the gradient and
flux deviation exponents, the relaxed-law residual exponent) and the
settle-time proportionality assert reference constants that this
implementation measurably does not reproduce; two independent oracles agree
with the implementation (see README, Validation notes). Those asserts are
kept at the stated targets and fail honestly rather than being loosened.
"""

import json
import math

import numpy as np
import pytest

from walklab import correction, deviation, kernels, montecarlo, report, transport
from walklab.kernels import Model


def _line(name, passed, detail=""):
    print(f"\nACCEPTANCE {name}: {'PASS' if passed else 'FAIL'} {detail}")


# criterion 1 -----------------------------------------------------------

def test_criterion_1_central_values():
    r = report.check_central_values()
    _line("1 central values", r["passed"],
          {k: round(v, 7) for k, v in r["measured"].items()})
    # cross-check against fully independent oracles as well
    from fractions import Fraction
    bigint = float(Fraction(math.comb(100, 50), 2 ** 101))
    assert r["measured"]["rw"] == pytest.approx(bigint, abs=1e-12)
    for key in ("rw", "te", "g"):
        assert abs(r["measured"][key] - report.REFERENCE_CENTRAL[key]) < 1e-5


# criterion 2 -----------------------------------------------------------

def test_criterion_2_t32_law():
    r = report.check_t32_law()
    _line("2 t^-3/2 law", r["passed"],
          {k: round(v, 6) for k, v in r["measured"].items()})
    for t, v in r["measured"].items():
        assert v == pytest.approx(report.REFERENCE_T32_CONSTANT, rel=0.05), t


# criterion 3 (documented honest failure) --------------------------------

def test_criterion_3_gradient_maximum_coefficients():
    r = report.check_gradient_coeffs()
    _line("3 gradient max coefficients", r["passed"], r["measured"])
    for t, row in r["measured"].items():
        assert row["c_te"] == pytest.approx(
            report.REFERENCE_GRAD_COEFFS["c_te"], rel=0.02), \
            f"c_te(t={t}) measured {row['c_te']:.5f}"
        assert row["c_g"] == pytest.approx(
            report.REFERENCE_GRAD_COEFFS["c_g"], rel=0.02), \
            f"c_g(t={t}) measured {row['c_g']:.5f}"


# criterion 4 ------------------------------------------------------------

@pytest.mark.parametrize("metric", deviation.METRICS)
def test_criterion_4_exponent(metric, nine_fits):
    fit = nine_fits[metric][1]
    target = report.REFERENCE_EXPONENTS[metric]
    ok = abs(fit.exponent - target) <= report.EXPONENT_TOL
    _line(f"4 exponent {metric}", ok,
          f"measured {fit.exponent:+.4f} target {target:+.4f}")
    assert ok, f"{metric}: measured {fit.exponent:+.4f}, target {target:+.4f}"


def test_criterion_4_all_exponents_below_minus_one(nine_fits):
    exps = {m: nine_fits[m][1].exponent for m in deviation.METRICS}
    ok = all(e < -1.0 for e in exps.values())
    _line("4 all exponents < -1", ok, {m: round(e, 4) for m, e in exps.items()})
    assert ok


# criterion 5 (documented honest failure) --------------------------------

def test_criterion_5_cattaneo_exponent():
    r = report.check_cattaneo()
    _line("5 relaxed-law residual exponent", r["passed"],
          f"measured {r['measured']:+.4f}")
    assert abs(r["measured"] - report.REFERENCE_CATTANEO_EXPONENT) <= 0.1, \
        f"measured {r['measured']:+.4f}, target -2.0 +- 0.1"


# criterion 6 ------------------------------------------------------------

def test_criterion_6a_f_approx_round_trip():
    eps = 1e-3
    for t in (10.0, 100.0, 1000.0):
        x = correction.x_epsilon(eps, t)
        assert x / t == pytest.approx(0.2895, abs=1e-4)
        assert abs(correction.f_approx(x, t) - (1.0 - eps)) <= 1e-12
    _line("6a f_approx at 0.2895 t", True, "")


def test_criterion_6b_settle_time_proportionality():
    # documented honest failure: measured settle times are not ~ 3.45 x
    r = report.check_correction()
    _line("6b settle times ~ 3.45 x", r["proportionality_passed"],
          {k: round(v, 1) for k, v in r["crossing_times"].items()})
    for x, ratio in r["crossing_ratios"].items():
        assert ratio == pytest.approx(report.REFERENCE_CROSSING_RATIO, rel=0.10), \
            f"x={x}: settle time {r['crossing_times'][x]:.1f} (ratio {ratio:.2f})"


# criterion 7 ------------------------------------------------------------

def test_criterion_7_monte_carlo_and_master_equation():
    r = report.check_monte_carlo()
    _line("7 MC oracle", r["passed"],
          f"max_z={r['max_z']:.3f} p={r['p_value']:.4f} "
          f"master_eq={r['master_equation_max_residual']:.2e}")
    assert r["max_z"] < 4.5
    assert r["p_value"] > 1e-3
    assert r["master_equation_max_residual"] <= 1e-14


# criterion 8 ------------------------------------------------------------

def test_criterion_8_pde_residual_convergence():
    r = report.check_pde_residuals()
    _line("8 PDE residual O(h^2)", r["passed"],
          f"h-halving ratios in {tuple(round(v, 4) for v in r['ratio_range'])}")
    lo, hi = r["ratio_range"]
    assert 0.15 <= lo and hi <= 0.35


# criterion 9 ------------------------------------------------------------

def test_criterion_9_normalization():
    r = report.check_normalization()
    _line("9 normalization", r["passed"],
          f"lattice<= {max(r['lattice_errors'].values()):.1e} "
          f"te<= {max(r['te_mass_errors'].values()):.1e}")
    assert all(v <= 1e-12 for v in r["lattice_errors"].values())
    assert all(v <= 1e-8 for v in r["te_mass_errors"].values())


# criterion 10 -----------------------------------------------------------

def test_criterion_10_report_emits_figures(tmp_path):
    from walklab.cli import main
    out = tmp_path / "rep"
    rc = main(["report", "--out-dir", str(out)])
    # rc = 4 because the documented failing checks are part of the report
    assert rc in (0, 4)
    for name in ("fig1_density_t30.csv", "fig1_density_t100.csv",
                 "fig1_gradient_t30.csv", "fig2_differences_t30.csv",
                 "fig2_differences_t100.csv", "fig3_correction.csv",
                 "exponents.json", "coefficients.json", "acceptance.json",
                 "run_record.json"):
        p = out / name
        assert p.exists() and p.stat().st_size > 0, name
    summary = json.loads((out / "acceptance.json").read_text())
    assert len(summary["checks"]) == len(report.ALL_CHECKS)
    exps = json.loads((out / "exponents.json").read_text())
    assert len(exps) == 9
    r = report.check_figure_peak_ratio()
    _line("10 figure peak ratio", r["passed"],
          f"{r['measured_ratio']:.3f} vs {r['target_ratio']:.3f}")
    assert r["passed"]


def test_criterion_10_report_rerun_reproduces_csv(tmp_path):
    from walklab.cli import main
    out1 = tmp_path / "r1"
    out2 = tmp_path / "r2"
    assert main(["report", "--out-dir", str(out1)]) in (0, 4)
    assert main(["report", "--out-dir", str(out2)]) in (0, 4)
    for name in ("fig1_density_t30.csv", "fig2_differences_t100.csv",
                 "fig3_correction.csv", "deviation_rho_rw_te.csv",
                 "cattaneo_residual.csv"):
        assert (out1 / name).read_bytes() == (out2 / name).read_bytes(), name


# long-time flux interchangeability --------------------------------------

def test_flux_discrepancy_below_1e3():
    r = report.check_flux_discrepancy()
    _line("flux discrepancy at x=sqrt(t)", r["passed"],
          {k: f"{v:.2e}" for k, v in r["measured"].items()})
    for t, v in r["measured"].items():
        assert v < 1e-3, t

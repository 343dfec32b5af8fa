"""Command-line surface.

Subcommands reproduce the lab's figures and summary tables as CSV/SVG/JSON
artifacts with a run record per invocation:

  density     one kernel profile (density/gradient/flux) on an x grid
  compare     deviation series on a t grid + fitted exponents
  correction  correction-factor curves F(x, t)
  mc          Monte Carlo run + goodness-of-fit stats
  report      everything: figures, exponent/coefficient tables, acceptance

Exit codes: 0 success, 2 usage, 3 numerical failure, 4 acceptance failure.
CSV bodies are locale-independent with 17 significant digits (round-trip
exact for doubles); re-running with the same config and seed reproduces
them byte for byte. WALKLAB_THREADS parallelizes Monte Carlo blocks.
"""

import argparse
import csv
import datetime
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__, correction, deviation, kernels, montecarlo, report, transport
from ._svg import write_line_chart
from .errors import DomainError, ResourceLimitError
from .kernels import Model, Params


class UsageError(Exception):
    pass


def _fmt(v) -> str:
    return f"{float(v):.17g}"


def _write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([c if isinstance(c, str) else _fmt(c) for c in row])


def _json_safe(obj):
    if isinstance(obj, dict):
        return {str(k): _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (str, int, bool)) or obj is None:
        return obj
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else repr(obj)
    return None  # non-serializable payloads (series objects etc.) are dropped


def _write_json(path, obj):
    with open(path, "w") as fh:
        json.dump(_json_safe(obj), fh, indent=2, sort_keys=True)
        fh.write("\n")


class RunRecord:
    def __init__(self, command, config, seed=None):
        self.command = command
        self.config = config
        self.seed = seed
        self.started = datetime.datetime.now(datetime.timezone.utc).isoformat()
        self.outputs = []

    def add(self, path):
        self.outputs.append(str(path))
        return path

    def write(self, path):
        finished = datetime.datetime.now(datetime.timezone.utc).isoformat()
        for out in self.outputs:
            p = Path(out)
            if not p.exists() or p.stat().st_size == 0:
                raise RuntimeError(f"output {out} missing or empty")
        _write_json(path, {
            "command": self.command,
            "config": self.config,
            "started": self.started,
            "finished": finished,
            "outputs": self.outputs,
            "tool_version": __version__,
            "seed": self.seed,
        })


def _parse_x_range(spec):
    try:
        lo_s, hi_s, step_s = spec.split(":")
        lo, hi, step = float(lo_s), float(hi_s), float(step_s)
    except ValueError:
        raise UsageError(f"bad x range {spec!r}; expected min:max:step")
    if step <= 0 or hi < lo:
        raise UsageError(f"bad x range {spec!r}; need step > 0 and max >= min")
    n = int(round((hi - lo) / step)) + 1
    return lo + step * np.arange(n)


def _parse_t_grid(spec):
    parts = spec.split(":")
    if len(parts) != 4 or parts[0] != "log":
        raise UsageError(f"bad t grid {spec!r}; expected log:t_min:t_max:n")
    try:
        t_min, t_max, n = float(parts[1]), float(parts[2]), int(parts[3])
    except ValueError:
        raise UsageError(f"bad t grid {spec!r}")
    if not (0 < t_min < t_max and n >= 2):
        raise UsageError(f"bad t grid {spec!r}")
    return deviation.geometric_times(t_min, t_max, n)


def _parse_float_list(spec):
    try:
        return [float(v) for v in spec.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"bad list {spec!r}; expected comma-separated numbers")


def _merged(args, config, key, default):
    val = getattr(args, key.replace("-", "_"), None)
    if val is not None:
        return val
    if key in config:
        return config[key]
    return default


def _load_config(args):
    if getattr(args, "config", None):
        with open(args.config) as fh:
            cfg = json.load(fh)
        if not isinstance(cfg, dict):
            raise UsageError("config file must hold a JSON object")
        return cfg
    return {}


def _params(args, config):
    return Params(dx=float(_merged(args, config, "dx", 1.0)),
                  dt=float(_merged(args, config, "dt", 1.0)))


# ----------------------------------------------------------------------
# subcommands
# ----------------------------------------------------------------------

def cmd_density(args):
    config = _load_config(args)
    p = _params(args, config)
    model = Model.parse(_merged(args, config, "model", "rw"))
    t = float(_merged(args, config, "t", 100.0))
    kind = _merged(args, config, "kind", "density")
    x_spec = _merged(args, config, "x", "-40:40:1")
    xs = _parse_x_range(x_spec)
    out = Path(_merged(args, config, "out", "density.csv"))
    if kind == "flux":
        prof = transport.flux_profile(model, t, xs, p)
    else:
        prof = kernels.profile(model, t, xs, kind, p)
    rec = RunRecord("density", {"model": model.value, "t": t, "kind": kind,
                                "x": x_spec, "dx": p.dx, "dt": p.dt})
    _write_csv(rec.add(out), ["x", "value"], zip(prof.xs, prof.values))
    if args.svg:
        svg = out.with_suffix(".svg")
        write_line_chart(rec.add(svg), f"{model.value} {kind}, t={t:g}",
                         [(model.value, prof.xs, prof.values)], "x", kind)
    rec.write(out.parent / (out.stem + ".run.json"))
    return 0


def cmd_compare(args):
    config = _load_config(args)
    p = _params(args, config)
    metric_spec = _merged(args, config, "metrics", "all")
    metric_names = (list(deviation.METRICS) if metric_spec == "all"
                    else [m.strip() for m in metric_spec.split(",") if m.strip()])
    ts = _parse_t_grid(_merged(args, config, "t-grid", "log:30:3000:40"))
    outdir = Path(_merged(args, config, "out-dir", "compare_out"))
    outdir.mkdir(parents=True, exist_ok=True)
    rec = RunRecord("compare", {"metrics": metric_names,
                                "t-grid": [float(ts[0]), float(ts[-1]), len(ts)],
                                "dx": p.dx, "dt": p.dt})
    summary = {}
    all_series = {}
    for m in metric_names:
        series = deviation.deviation_series(m, ts, p)
        all_series[m] = series
        _write_csv(rec.add(outdir / f"deviation_{m}.csv"), ["t", "value"],
                   zip(series.ts, series.values))
        if np.all(series.values > 0):
            fit = deviation.fit_power_law(series)
            summary[m] = {"exponent": fit.exponent,
                          "log_amplitude": fit.log_amplitude,
                          "rms_residual": fit.rms_residual,
                          "window": fit.window}
        else:
            summary[m] = {"exponent": None, "note": "nonpositive values (self pair?)"}
    _write_json(rec.add(outdir / "exponents.json"), summary)
    if args.svg:
        series_list = [(m, s.ts, s.values) for m, s in all_series.items()
                       if np.all(s.values > 0)][:6]
        write_line_chart(rec.add(outdir / "deviations.svg"),
                         "L2 deviations vs t", series_list, "t", "I(t)",
                         logx=True, logy=True)
    rec.write(outdir / "run_record.json")
    return 0


def cmd_correction(args):
    config = _load_config(args)
    p = _params(args, config)
    xs = _parse_float_list(_merged(args, config, "x-list", "5,10,30"))
    if any(x < 1.0 for x in xs):
        raise UsageError("correction requires x values >= 1")
    t_spec = _merged(args, config, "t-list", None)
    outdir = Path(_merged(args, config, "out-dir", "correction_out"))
    outdir.mkdir(parents=True, exist_ok=True)
    rec = RunRecord("correction", {"x-list": xs, "t-list": t_spec,
                                   "dx": p.dx, "dt": p.dt})
    rows = []
    curves = []
    for x in xs:
        if t_spec:
            ts = _parse_float_list(t_spec)
        else:
            ts = list(np.geomspace(x * 1.05 + 0.1, max(40.0 * x, 400.0), 50))
        fe_vals = []
        for t in ts:
            fld = correction.evaluate_field(x, t, p)
            rows.append((x, t, "nan" if math.isnan(fld.f_exact)
                         else _fmt(fld.f_exact), fld.f_approx))
            fe_vals.append(fld.f_exact)
        curves.append((f"x={x:g}", ts, fe_vals))
    _write_csv(rec.add(outdir / "correction.csv"),
               ["x", "t", "f_exact", "f_approx"], rows)
    if args.svg:
        write_line_chart(rec.add(outdir / "correction.svg"),
                         "correction factor F(x, t)", curves, "t", "F",
                         logx=True)
    rec.write(outdir / "run_record.json")
    return 0


def cmd_mc(args):
    config = _load_config(args)
    walkers = int(_merged(args, config, "walkers", 1_000_000))
    steps = int(_merged(args, config, "steps", 100))
    seed = int(_merged(args, config, "seed", 42))
    outdir = Path(_merged(args, config, "out-dir", "mc_out"))
    outdir.mkdir(parents=True, exist_ok=True)
    rec = RunRecord("mc", {"walkers": walkers, "steps": steps, "seed": seed},
                    seed=seed)
    h = montecarlo.simulate(walkers, steps, seed)
    csv_path = outdir / "histogram.csv"
    montecarlo.write_histogram_csv(h, rec.add(csv_path))
    max_z, chi2, dof = montecarlo.histogram_compare(h)
    stats = {"walkers": walkers, "steps": steps, "seed": seed,
             "max_z": max_z, "chi2": chi2, "dof": dof,
             "p_value": montecarlo.chi2_pvalue(chi2, dof)}
    _write_json(rec.add(outdir / "stats.json"), stats)
    rec.write(outdir / "run_record.json")
    return 0


def _report_figures(outdir, rec):
    grids = {}
    for t in (30.0, 100.0):
        span = 3.0 * math.sqrt(t)
        xs = np.linspace(-span, span, 241)
        grids[t] = xs
        for kind in ("density", "gradient"):
            cols = {}
            for m in (Model.RW, Model.G, Model.TE):
                if m is Model.RW and kind == "gradient":
                    vals = np.array([0.0 if abs(x) >= t else
                                     kernels.grad_rw(float(x), t) for x in xs])
                else:
                    vals = kernels.profile(m, t, xs, kind).values
                cols[m.value] = vals
            path = outdir / f"fig1_{kind}_t{int(t)}.csv"
            _write_csv(rec.add(path), ["x", "rw", "g", "te"],
                       zip(xs, cols["rw"], cols["g"], cols["te"]))
            write_line_chart(rec.add(outdir / f"fig1_{kind}_t{int(t)}.svg"),
                             f"{kind} profiles, t={t:g}",
                             [(m, xs, cols[m]) for m in ("rw", "g", "te")],
                             "x", kind)
        d_rw_g = np.array([kernels.rho_rw(float(x), t) - kernels.rho_g(float(x), t)
                           for x in xs])
        d_rw_te = np.array([kernels.rho_rw(float(x), t) - kernels.rho_te(float(x), t)
                            for x in xs])
        path = outdir / f"fig2_differences_t{int(t)}.csv"
        _write_csv(rec.add(path), ["x", "rw_minus_g", "rw_minus_te"],
                   zip(xs, d_rw_g, d_rw_te))
        write_line_chart(rec.add(outdir / f"fig2_differences_t{int(t)}.svg"),
                         f"density differences, t={t:g}",
                         [("rw-g", xs, d_rw_g), ("rw-te", xs, d_rw_te)], "x", "diff")
    # correction-factor curves
    rows = []
    curves = []
    for x in (5.0, 10.0, 30.0):
        ts = np.geomspace(x * 1.05 + 0.1, 1000.0, 50)
        fe = []
        for t in ts:
            fld = correction.evaluate_field(x, float(t))
            rows.append((x, t, "nan" if math.isnan(fld.f_exact)
                         else _fmt(fld.f_exact), fld.f_approx))
            fe.append(fld.f_exact)
        curves.append((f"x={x:g}", ts, fe))
    _write_csv(rec.add(outdir / "fig3_correction.csv"),
               ["x", "t", "f_exact", "f_approx"], rows)
    write_line_chart(rec.add(outdir / "fig3_correction.svg"),
                     "correction factor F", curves, "t", "F", logx=True)


def cmd_report(args):
    config = _load_config(args)
    outdir = Path(_merged(args, config, "out-dir", "report_out"))
    outdir.mkdir(parents=True, exist_ok=True)
    rec = RunRecord("report", {"out-dir": str(outdir)}, seed=42)

    print("report: figures ...", flush=True)
    _report_figures(outdir, rec)

    print("report: deviation series and exponents ...", flush=True)
    fits = report.compute_deviation_fits()
    exp_table = {}
    for m, (series, fit) in fits.items():
        _write_csv(rec.add(outdir / f"deviation_{m}.csv"), ["t", "value"],
                   zip(series.ts, series.values))
        exp_table[m] = {"exponent": fit.exponent,
                        "target": report.REFERENCE_EXPONENTS[m],
                        "log_amplitude": fit.log_amplitude,
                        "rms_residual": fit.rms_residual}
    _write_json(rec.add(outdir / "exponents.json"), exp_table)

    print("report: acceptance checks ...", flush=True)
    results = report.run_all(fits)
    coeffs = {}
    for r in results:
        if r["name"] == "gradient_coeffs":
            coeffs["max_gradient_ratio_coeffs"] = r["measured"]
        if r["name"] == "central_values":
            coeffs["central_values_t100"] = r["measured"]
        if r["name"] == "cattaneo_exponent":
            coeffs["cattaneo_exponent"] = r["measured"]
            series = r.get("series")
            if series is not None:
                _write_csv(rec.add(outdir / "cattaneo_residual.csv"),
                           ["t", "value"], zip(series.ts, series.values))
    _write_json(rec.add(outdir / "coefficients.json"), coeffs)
    summary = {
        "all_passed": all(r["passed"] for r in results),
        "checks": results,
    }
    _write_json(rec.add(outdir / "acceptance.json"), summary)
    rec.write(outdir / "run_record.json")
    for r in results:
        print(f"  {'PASS' if r['passed'] else 'FAIL'}  {r['name']}")
    if not summary["all_passed"]:
        print("report: some acceptance checks FAILED "
              "(see acceptance.json and the README validation notes)")
        return 4
    return 0


def build_parser():
    ap = argparse.ArgumentParser(
        prog="walklab",
        description="1D diffusive-transport laboratory: random-walk, Gaussian "
                    "and telegraph kernels and their comparison machinery.")
    ap.add_argument("--version", action="version", version=f"walklab {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON config mirroring the flags "
                                        "(flags override the file)")
        p.add_argument("--dx", type=float, help="lattice step (default 1)")
        p.add_argument("--dt", type=float, help="hop time (default 1)")
        p.add_argument("--svg", action="store_true", help="also write SVG charts")

    d = sub.add_parser("density", help="kernel profile on an x grid")
    common(d)
    d.add_argument("--model", choices=["rw", "g", "te"])
    d.add_argument("--t", type=float)
    d.add_argument("--x", help="grid as min:max:step")
    d.add_argument("--kind", choices=["density", "gradient", "flux"])
    d.add_argument("--out", help="output CSV path")
    d.set_defaults(func=cmd_density)

    c = sub.add_parser("compare", help="deviation series + exponent fits")
    common(c)
    c.add_argument("--metrics", help="'all' or comma list "
                                     f"(canonical: {', '.join(deviation.METRICS)})")
    c.add_argument("--t-grid", dest="t_grid", help="log:t_min:t_max:n")
    c.add_argument("--out-dir", dest="out_dir")
    c.set_defaults(func=cmd_compare)

    k = sub.add_parser("correction", help="correction factor curves")
    common(k)
    k.add_argument("--x-list", dest="x_list", help="comma list, values >= 1")
    k.add_argument("--t-list", dest="t_list", help="comma list of t values")
    k.add_argument("--out-dir", dest="out_dir")
    k.set_defaults(func=cmd_correction)

    m = sub.add_parser("mc", help="Monte Carlo run + comparison stats")
    common(m)
    m.add_argument("--walkers", type=int)
    m.add_argument("--steps", type=int)
    m.add_argument("--seed", type=int)
    m.add_argument("--out-dir", dest="out_dir")
    m.set_defaults(func=cmd_mc)

    r = sub.add_parser("report", help="figures, tables and acceptance summary")
    common(r)
    r.add_argument("--out-dir", dest="out_dir")
    r.set_defaults(func=cmd_report)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (DomainError, ResourceLimitError, FileNotFoundError,
            json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ArithmeticError, RuntimeError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())

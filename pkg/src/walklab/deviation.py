"""Quantitative model comparison: L2 deviation integrals, power-law fits,
central-value asymptotics, maximum-gradient statistics, the applicability
criterion and the fluctuation estimate.

The nine deviation metrics are the half-line L2 norms

    I_pair(t) = sqrt( int_0^{x=t} (f1 - f2)^2 dx )

for the three densities, three gradients and three fluxes (fluxes are
evaluated in exactly-differentiated Leibniz form; see walklab.transport for
the finite-difference route they are cross-checked against). All metrics
are computed in lattice units and rescaled for general Params.
"""

import math
from dataclasses import dataclass

import numpy as np

from ._backends import core
from .errors import DomainError, UnknownMetricError
from .kernels import DEFAULT_PARAMS, Model, Params

__all__ = [
    "METRICS",
    "DeviationSeries",
    "PowerLawFit",
    "l2_deviation",
    "deviation_series",
    "geometric_times",
    "fit_power_law",
    "central_asymptotics",
    "max_gradient_stats",
    "gradient_ratio_coeffs",
    "applicability",
    "relative_fluctuation",
]

METRICS = (
    "rho_rw_te", "rho_rw_g", "rho_te_g",
    "grad_rw_te", "grad_rw_g", "grad_te_g",
    "flux_rw_te", "flux_rw_g", "flux_te_g",
)

_FIELDS = ("rho", "grad", "flux")
_TAGS = ("rw", "te", "g")


def _parse_metric(pair):
    """Resolve a metric id to (canonical index | None-for-self, field)."""
    parts = str(pair).lower().split("_")
    if len(parts) != 3 or parts[0] not in _FIELDS or parts[1] not in _TAGS \
            or parts[2] not in _TAGS:
        raise UnknownMetricError(pair)
    field, a, b = parts
    if a == b:
        return None, field
    canon = f"{field}_{a}_{b}"
    if canon not in METRICS:
        canon = f"{field}_{b}_{a}"
    return METRICS.index(canon), field


@dataclass
class DeviationSeries:
    """(t, value) samples of one deviation metric on an increasing t grid."""

    metric: str
    ts: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        self.ts = np.asarray(self.ts, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.ts.shape != self.values.shape or self.ts.ndim != 1:
            raise DomainError("ts and values must be matching 1D arrays")
        if self.ts.size > 1 and not np.all(np.diff(self.ts) > 0):
            raise DomainError("ts must be strictly increasing")
        if np.any(self.values < 0):
            raise DomainError("L2 deviation values cannot be negative")


@dataclass(frozen=True)
class PowerLawFit:
    exponent: float
    log_amplitude: float
    rms_residual: float
    window: tuple


def l2_deviation(pair: str, t: float, p: Params = DEFAULT_PARAMS) -> float:
    """One Eq-23-style metric at time t. Self pairs (e.g. rho_g_g) are 0."""
    idx, field = _parse_metric(pair)
    if not t > 0.0:
        raise DomainError(f"l2_deviation requires t > 0, got {t}")
    if idx is None:
        return 0.0
    val = core.l2_metric(idx, t / p.dt)
    if p.is_default():
        return val
    if field == "rho":
        return val / math.sqrt(p.dx)
    if field == "grad":
        return val / (p.dx * math.sqrt(p.dx))
    return val * math.sqrt(p.dx) / p.dt


def geometric_times(t_min: float, t_max: float, n: int) -> np.ndarray:
    if not (0 < t_min < t_max and n >= 2):
        raise DomainError("need 0 < t_min < t_max and n >= 2")
    return np.geomspace(t_min, t_max, n)


def deviation_series(pair: str, ts, p: Params = DEFAULT_PARAMS) -> DeviationSeries:
    ts = np.asarray(ts, dtype=float)
    vals = np.array([l2_deviation(pair, t, p) for t in ts])
    return DeviationSeries(metric=pair, ts=ts, values=vals)


def fit_power_law(series: DeviationSeries, window=None) -> PowerLawFit:
    """OLS of ln(value) on ln(t) inside the window; slope is the exponent.

    The fit is deterministic and invariant under positive scaling of the
    values except for the amplitude."""
    if window is None:
        window = (float(series.ts[0]), float(series.ts[-1]))
    t_min, t_max = window
    mask = (series.ts >= t_min) & (series.ts <= t_max)
    ts = series.ts[mask]
    vals = series.values[mask]
    if ts.size < 5:
        raise DomainError(f"need >= 5 samples in window, have {ts.size}")
    if np.any(vals <= 0):
        raise DomainError("power-law fit requires strictly positive values")
    lx = np.log(ts)
    ly = np.log(vals)
    A = np.column_stack([lx, np.ones_like(lx)])
    coef, _, _, _ = np.linalg.lstsq(A, ly, rcond=None)
    resid = ly - A @ coef
    return PowerLawFit(
        exponent=float(coef[0]),
        log_amplitude=float(coef[1]),
        rms_residual=float(math.sqrt(np.mean(resid * resid))),
        window=(float(t_min), float(t_max)),
    )


def central_asymptotics(model, t: float):
    """(exact, two-term expansion) of the kernel at x = 0, lattice units.

    exact:      rho_model(0, t)
    expansion:  (2 pi t)^{-1/2} * {1 - 1/(4t) | 1 + 1/(8t) | 1}  (RW|TE|G)

    |exact - asymptotic| * t^{5/2} stays bounded (the next-order term).
    """
    model = Model.parse(model)
    if not t >= 10.0:
        raise DomainError(f"expansion regime needs t >= 10, got {t}")
    base = core.rho_g(0.0, t, 0.5)
    if model is Model.G:
        return base, base
    if model is Model.RW:
        return core.rho_rw(0.0, t), base * (1.0 - 0.25 / t)
    return core.rho_te(0.0, t, 0.5, 0.5), base * (1.0 + 0.125 / t)


_INV_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def _golden_max(f, lo, hi, xtol):
    a, b = lo, hi
    c = b - _INV_GOLDEN * (b - a)
    d = a + _INV_GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    while b - a > xtol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - _INV_GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_GOLDEN * (b - a)
            fd = f(d)
    xm = 0.5 * (a + b)
    return xm, f(xm)


def _bisect_root(f, lo, hi, target, increasing, tol=1e-9):
    # f monotone on [lo, hi]; find f(x) = target
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if hi - lo < tol:
            return mid
        if (f(mid) < target) == increasing:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def max_gradient_stats(model, t: float, p: Params = DEFAULT_PARAMS):
    """(x_max, g_max, halfwidth) of |gradient| over x in (0, Vt).

    Golden-section search (1e-6 in x); the profiles are unimodal there,
    which is asserted against a coarse grid scan. halfwidth is the full
    width at half maximum."""
    model = Model.parse(model)
    if not t > 1.0:
        raise DomainError(f"max_gradient_stats requires t > 1, got {t}")
    if model is Model.G:
        g = lambda x: abs(core.grad_g(x, t, p.D))
        hi = p.V * t
    elif model is Model.TE:
        g = lambda x: abs(core.grad_te(x, t, p.D, p.tau))
        hi = p.V * t
    else:
        g = lambda x: abs(core.grad_rw(x / p.dx, t / p.dt)) / (p.dx * p.dx)
        hi = p.V * t
    x_max, g_max = _golden_max(g, 1e-12, hi, 1e-6)
    probe = np.linspace(hi / 64.0, hi * (1.0 - 1e-9), 32)
    if any(g(xp) > g_max * (1.0 + 1e-9) for xp in probe):
        raise RuntimeError("gradient profile is not unimodal (kernel bug)")
    half = 0.5 * g_max
    x_lo = _bisect_root(g, 1e-12, x_max, half, increasing=True)
    x_hi = _bisect_root(g, x_max, hi, half, increasing=False)
    return x_max, g_max, x_hi - x_lo


def gradient_ratio_coeffs(t: float):
    """(c_te, c_g) = t * (1 - g_RW^m / g_TE^m), t * (1 - g_RW^m / g_G^m)
    where g^m is each curve's own maximum |gradient| over x.

    Both coefficients plateau in t (the 1/t law of the maximum-value gap);
    measured plateaus are c_te -> 3/4 and c_g -> 1/2.
    """
    if not t >= 100.0:
        raise DomainError(f"gradient_ratio_coeffs requires t >= 100, got {t}")
    _, g_rw, _ = max_gradient_stats(Model.RW, t)
    _, g_te, _ = max_gradient_stats(Model.TE, t)
    _, g_g, _ = max_gradient_stats(Model.G, t)
    return t * (1.0 - g_rw / g_te), t * (1.0 - g_rw / g_g)


def applicability(x: float, t: float, p: Params = DEFAULT_PARAMS,
                  factor: float = 10.0):
    """(ok, time_ratio, space_ratio) of the coarse-graining criterion:
    t/dt >= factor and |x| dt / (t dx) <= 1/factor."""
    if not t > 0.0:
        raise DomainError(f"applicability requires t > 0, got {t}")
    time_ratio = t / p.dt
    space_ratio = abs(x) * p.dt / (t * p.dx)
    ok = time_ratio >= factor and space_ratio <= 1.0 / factor
    return ok, time_ratio, space_ratio


def relative_fluctuation(n: int) -> float:
    """Relative equilibrium fluctuation of an N-particle subsystem: 1/sqrt(N)."""
    if n < 1:
        raise DomainError(f"relative_fluctuation requires n >= 1, got {n}")
    return 1.0 / math.sqrt(n)

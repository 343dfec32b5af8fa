"""Tail masses and fluxes.

The flux at x* is the time derivative of the tail mass to the right of x*,
so positive flux means rightward probability current and Fick's law holds
with positive D: for the Gaussian, J = -D grad rho exactly, which fixes the
orientation used everywhere. (The closed-form identity also shows the flux
J_G = (x*/2t) rho_G carries no explicit D; the x*/(2Dt) prefactor sometimes
quoted equals -grad rho_G, i.e. J/D.)

For the walk at integer t, tail_mass reports the exact parity-lattice sum
(spacing-2 cells, proportional split of the cell containing x*, so that
tail_mass(0) = 1/2 exactly); at non-integer t it integrates the smooth
gamma continuation, which is also what flux() differentiates.
"""

import math
from dataclasses import dataclass

import numpy as np

from ._backends import core
from .errors import DomainError
from .kernels import DEFAULT_PARAMS, DensityProfile, Model, Params

__all__ = [
    "FluxSample",
    "tail_mass",
    "flux",
    "flux_value",
    "discrete_bond_flux",
    "fick_check",
    "default_time_step",
    "flux_profile",
]


@dataclass(frozen=True)
class FluxSample:
    model: Model
    x_star: float
    t: float
    j: float


def default_time_step(t: float) -> float:
    """Centered-difference step for time derivatives: max(1e-3 t, 1e-2).

    Relative scaling keeps the O(h^2) truncation error uniform across
    decades of t."""
    return max(1e-3 * t, 1e-2)


def _lattice_tail(xi_star: float, n: int) -> float:
    # exact tail of the parity lattice: full cells right of x*, proportional
    # part of the cell (c-1, c+1] that contains x*
    k = math.floor((xi_star + n + 1) / 2.0)
    c = 2 * int(k) - n
    if c > n:
        return 0.0
    if c < -n:
        return 1.0
    total = 0.0
    x = n
    while x > c:
        total += 2.0 * core.rho_rw(float(x), float(n))
        x -= 2
    total += (c + 1 - xi_star) * core.rho_rw(float(c), float(n))
    return total


def tail_mass(model, x_star: float, t: float, p: Params = DEFAULT_PARAMS) -> float:
    """Probability mass right of x*: int_{x*}^{Vt} rho dx (to infinity for G)."""
    model = Model.parse(model)
    if not t > 0.0:
        raise DomainError(f"tail_mass requires t > 0, got {t}")
    if model is Model.G:
        return core.tail_mass_g(x_star, t, p.D)
    if model is Model.TE:
        return core.tail_mass_te(x_star, t, p.D, p.tau)
    xi = x_star / p.dx
    th = t / p.dt
    n = round(th)
    if abs(th - n) < 1e-9 and n > 0:
        return _lattice_tail(xi, int(n))
    return core.tail_mass_rw(xi, th)


def flux_value(model, x_star: float, t: float, p: Params = DEFAULT_PARAMS,
               h: float | None = None) -> float:
    """Flux J(x*, t) as a bare float; see flux()."""
    model = Model.parse(model)
    if h is None:
        h = default_time_step(t)
    if not t > h > 0.0:
        raise DomainError(f"flux requires t > h > 0, got t={t}, h={h}")
    if model is Model.G:
        # d/dt of the erfc tail in closed form (exact; Fick-consistent)
        return core.flux_g(x_star, t, p.D)
    if model is Model.TE:
        return core.flux_fd_te(x_star, t, h, p.D, p.tau)
    return core.flux_fd_rw(x_star / p.dx, t / p.dt, h / p.dt) / p.dt


def flux(model, x_star: float, t: float, p: Params = DEFAULT_PARAMS,
         h: float | None = None) -> FluxSample:
    """Centered-difference flux [tail(t+h) - tail(t-h)] / 2h.

    The Gaussian branch differentiates its closed-form tail analytically
    (the centered difference converges to the same value as h -> 0; the
    closed form is what makes fick_check exact)."""
    m = Model.parse(model)
    return FluxSample(m, x_star, t, flux_value(m, x_star, t, p, h))


def discrete_bond_flux(x_bond: float, t: int) -> float:
    """Exact instantaneous probability current of the hopping rule across
    the bond between adjacent sites: [P(left, t) - P(right, t)] / 2 per hop.

    Note this oscillates with the lattice parity (amplitude ~P/2 around the
    smooth flux); averaging over a two-step window recovers the continuum
    value. Bond positions are half-integers."""
    t = int(t)
    if t < 0:
        raise DomainError(f"discrete_bond_flux requires t >= 0, got {t}")
    left = math.floor(x_bond)
    if abs(x_bond - (left + 0.5)) > 1e-9:
        raise DomainError(f"bond position must be half-integer, got {x_bond}")

    def P(y):
        if abs(y) > t or (y + t) % 2 != 0:
            return 0.0
        if t == 0:
            return 1.0
        return 2.0 * core.rho_rw(float(y), float(t))

    return 0.5 * (P(left) - P(left + 1))


def fick_check(x: float, t: float, p: Params = DEFAULT_PARAMS) -> float:
    """flux(G) - (-D grad_G); zero to rounding (Fick's law is exact for G)."""
    if not t > 0.0:
        raise DomainError(f"fick_check requires t > 0, got {t}")
    return core.flux_g(x, t, p.D) - (-p.D * core.grad_g(x, t, p.D))


def flux_profile(model, t: float, xs, p: Params = DEFAULT_PARAMS,
                 h: float | None = None) -> DensityProfile:
    model = Model.parse(model)
    xs = np.asarray(xs, dtype=float)
    vals = np.array([flux_value(model, x, t, p, h) for x in xs])
    return DensityProfile(model=model, t=t, xs=xs, values=vals, kind="flux")

"""The three candidate fundamental solutions and their spatial gradients.

Models
------
RW  exact random-walk density: the binomial law on the parity lattice and
    its gamma-function continuation to real (x, t),
G   the Gaussian (local-equilibrium) kernel,
TE  the telegraph (finite-velocity, nonlocal) kernel.

Conventions: the walk hops +-dx every dt with equal probability, so
V = dx/dt, D = dx^2/(2 dt), tau = dt/2. The default Params give the
dimensionless lattice units dx = dt = 1 (V = 1, D = 1/2, tau = 1/2).
The lattice density is P/2, which integrates to 1 over the spacing-2
parity cells. The RW continuation is clamped to 0 outside |x| <= t,
where its sign would otherwise oscillate; the telegraph front point
|x| = V t is included in the support (Theta(0) = 1), where the kernel
takes its I0(0) limit.
"""

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from ._backends import core
from .errors import DomainError, OutOfConeError, ParityMismatchError, StencilError

__all__ = [
    "Params",
    "DEFAULT_PARAMS",
    "Model",
    "DensityProfile",
    "rho_g",
    "rho_te",
    "rho_rw",
    "rho_rw_lattice",
    "grad_g",
    "grad_te",
    "grad_rw",
    "model_residual",
    "profile",
]


@dataclass(frozen=True)
class Params:
    """Microparameters of the hopping process: lattice step and hop time."""

    dx: float = 1.0
    dt: float = 1.0

    def __post_init__(self):
        if not (self.dx > 0.0 and self.dt > 0.0):
            raise DomainError(f"dx and dt must be positive, got {self.dx}, {self.dt}")

    @property
    def V(self) -> float:
        return self.dx / self.dt

    @property
    def D(self) -> float:
        return self.dx * self.dx / (2.0 * self.dt)

    @property
    def tau(self) -> float:
        return self.dt / 2.0

    def is_default(self) -> bool:
        return self.dx == 1.0 and self.dt == 1.0


DEFAULT_PARAMS = Params()


class Model(enum.Enum):
    RW = "rw"
    G = "g"
    TE = "te"

    @classmethod
    def parse(cls, tag):
        if isinstance(tag, cls):
            return tag
        try:
            return cls(str(tag).strip().lower())
        except ValueError:
            raise DomainError(f"unknown model tag {tag!r}; expected rw, g or te")


_KINDS = ("density", "gradient", "flux")


@dataclass
class DensityProfile:
    """Sampled values of a density, gradient or flux on a grid at fixed t."""

    model: Model
    t: float
    xs: np.ndarray
    values: np.ndarray
    kind: str = "density"

    def __post_init__(self):
        self.xs = np.asarray(self.xs, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.kind not in _KINDS:
            raise DomainError(f"kind must be one of {_KINDS}, got {self.kind!r}")
        if self.xs.ndim != 1 or self.xs.shape != self.values.shape:
            raise DomainError("xs and values must be matching 1D arrays")
        if self.xs.size > 1 and not np.all(np.diff(self.xs) > 0):
            raise DomainError("xs must be strictly increasing")


def _check_t_positive(t):
    if not t > 0.0:
        raise DomainError(f"requires t > 0, got {t}")


def rho_g(x: float, t: float, p: Params = DEFAULT_PARAMS) -> float:
    """Gaussian kernel (4 pi D t)^{-1/2} exp(-x^2 / (4 D t))."""
    _check_t_positive(t)
    return core.rho_g(x, t, p.D)


def rho_te(x: float, t: float, p: Params = DEFAULT_PARAMS) -> float:
    """Telegraph kernel; exp(-t) I0(sqrt(t^2 - x^2)) inside the cone at
    default Params, 0 outside. Evaluated through the scaled Bessel form."""
    if t < 0.0:
        raise DomainError(f"rho_te requires t >= 0, got {t}")
    return core.rho_te(x, t, p.D, p.tau)


def rho_rw(x: float, t: float) -> float:
    """Gamma-continuation of the walk density (lattice units).

    Gamma(t+1) / (Gamma((t-x)/2+1) Gamma((t+x)/2+1) 2^{t+1}) for |x| <= t,
    0 beyond the cone. Coincides with rho_rw_lattice at parity points
    (identical code path). Log-space evaluation; underflows to 0 near the
    front at large t.
    """
    _check_t_positive(t)
    return core.rho_rw(x, t)


def rho_rw_lattice(x: int, t: int) -> float:
    """Exact lattice density t! / (2 ((t-x)/2)! ((t+x)/2)! 2^t) = P(x,t)/2."""
    x = int(x)
    t = int(t)
    if t < 0:
        raise DomainError(f"rho_rw_lattice requires t >= 0, got {t}")
    if abs(x) > t:
        raise OutOfConeError(f"|x|={abs(x)} exceeds t={t}")
    if (x + t) % 2 != 0:
        raise ParityMismatchError(f"x={x} unreachable after t={t} steps")
    if t == 0:
        return 0.5
    return core.rho_rw(float(x), float(t))


def grad_g(x: float, t: float, p: Params = DEFAULT_PARAMS) -> float:
    """d/dx of the Gaussian kernel: -(x / 2Dt) rho_G; odd in x."""
    _check_t_positive(t)
    return core.grad_g(x, t, p.D)


def grad_te(x: float, t: float, p: Params = DEFAULT_PARAMS) -> float:
    """d/dx of the telegraph kernel: -x e^{-t} I1(s)/s, s = sqrt(t^2-x^2),
    at default Params. At the front s -> 0 and I1(s)/s -> 1/2, so the
    limit value -(x/2) e^{-t} is returned there."""
    _check_t_positive(t)
    if abs(x) > p.V * t:
        raise OutOfConeError(f"|x|={abs(x)} outside light cone V*t={p.V * t}")
    return core.grad_te(x, t, p.D, p.tau)


def grad_rw(x: float, t: float) -> float:
    """d/dx of the gamma-continued walk density (lattice units):

        (rho_RW / 2) * (psi((t-x)/2 + 1) - psi((t+x)/2 + 1)).

    This is the exact derivative of rho_rw with the shifted (+1) arguments;
    verified against central finite differences of rho_rw.
    """
    _check_t_positive(t)
    if abs(x) >= t:
        raise OutOfConeError(f"|x|={abs(x)} not strictly inside cone t={t}")
    return core.grad_rw(x, t)


def model_residual(model, x: float, t: float, h: float = 1e-2,
                   p: Params = DEFAULT_PARAMS) -> float:
    """Centered finite-difference residual of each model's governing equation.

    G:  d rho/dt - D d2 rho/dx2            (residual is pure O(h^2) noise)
    TE: d rho/dt + tau d2 rho/dt2 - D d2 rho/dx2
    RW: the exact lattice master equation
        rho(x, t+1) - [rho(x-1, t) + rho(x+1, t)]/2   (h ignored; zero
        to rounding by Pascal's rule)
    """
    model = Model.parse(model)
    if model is Model.RW:
        x = int(x)
        t = int(t)
        if abs(x) + 1 > t:
            raise StencilError(f"lattice stencil at x={x} leaves cone t={t}")
        if (x + t + 1) % 2 != 0:
            raise ParityMismatchError(f"x={x} unreachable at step t+1={t + 1}")
        return rho_rw_lattice(x, t + 1) - 0.5 * (
            rho_rw_lattice(x - 1, t) + rho_rw_lattice(x + 1, t))
    if not (t > 0.0 and h > 0.0):
        raise DomainError(f"requires t > 0 and h > 0, got t={t}, h={h}")
    if model is Model.G:
        if t - h <= 0.0:
            raise StencilError(f"time stencil leaves domain: t={t}, h={h}")
        ddt = (core.rho_g(x, t + h, p.D) - core.rho_g(x, t - h, p.D)) / (2.0 * h)
        ddx2 = (core.rho_g(x - h, t, p.D) - 2.0 * core.rho_g(x, t, p.D)
                + core.rho_g(x + h, t, p.D)) / (h * h)
        return ddt - p.D * ddx2
    # TE: the whole stencil must stay strictly inside the cone
    if abs(x) + h >= p.V * t or abs(x) >= p.V * (t - h):
        raise StencilError(
            f"stencil at (x={x}, t={t}, h={h}) leaves light cone")
    r0 = core.rho_te(x, t, p.D, p.tau)
    ddt = (core.rho_te(x, t + h, p.D, p.tau)
           - core.rho_te(x, t - h, p.D, p.tau)) / (2.0 * h)
    ddt2 = (core.rho_te(x, t + h, p.D, p.tau) - 2.0 * r0
            + core.rho_te(x, t - h, p.D, p.tau)) / (h * h)
    ddx2 = (core.rho_te(x - h, t, p.D, p.tau) - 2.0 * r0
            + core.rho_te(x + h, t, p.D, p.tau)) / (h * h)
    return ddt + p.tau * ddt2 - p.D * ddx2


def _rw_scaled(x, t, p, what):
    # gamma-form walk quantities for general Params via lattice rescaling
    xi = x / p.dx
    th = t / p.dt
    if what == "density":
        return core.rho_rw(xi, th) / p.dx
    return core.grad_rw(xi, th) / (p.dx * p.dx)


def profile(model, t: float, xs, kind: str = "density",
            p: Params = DEFAULT_PARAMS) -> DensityProfile:
    """Evaluate a density or gradient profile on a grid (flux profiles live
    in walklab.transport)."""
    model = Model.parse(model)
    if kind not in ("density", "gradient"):
        raise DomainError(f"profile kind must be density or gradient, got {kind!r}")
    xs = np.asarray(xs, dtype=float)
    vals = np.empty_like(xs)
    for i, x in enumerate(xs):
        if model is Model.G:
            vals[i] = (core.rho_g(x, t, p.D) if kind == "density"
                       else core.grad_g(x, t, p.D))
        elif model is Model.TE:
            vals[i] = (core.rho_te(x, t, p.D, p.tau) if kind == "density"
                       else core.grad_te(x, t, p.D, p.tau))
        else:
            vals[i] = _rw_scaled(x, t, p, kind)
    return DensityProfile(model=model, t=t, xs=xs, values=vals, kind=kind)

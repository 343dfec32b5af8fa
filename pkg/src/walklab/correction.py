"""The corrected flux-gradient relationship for the walk.

The local law J = -D grad rho is exact for the Gaussian; for the walk the
relaxed (Cattaneo-type) combination J + tau dJ/dt still misses -D grad rho
by a defect that decays with t. The multiplicative correction factor

    F(x, t) = -(J_RW + tau dJ_RW/dt) / (D grad rho_RW)

makes the law exact by construction and approaches 1 at long times. Its
closed-form approximation is F_approx = (1 - exp(-2Vt/|x|)) inside the
cone, 0 beyond; that captures the front-region rise, while the long-time
approach to 1 is governed by 1 - F = 1/(4t) - x^2/(12 t^2) + O(t^-3)
(uniform in x), measured and tested as (1-F)*4t -> 1.

Fluxes and their time derivatives come from a 5-point tail-mass stencil
with the shared centered-difference step policy (one extra differencing
level for dJ/dt = second derivative of the tail mass).
"""

import math
from dataclasses import dataclass

from ._backends import core
from .errors import DegenerateGradientError, DomainError, OutOfConeError
from .kernels import DEFAULT_PARAMS, Params
from .transport import default_time_step

__all__ = [
    "CorrectionField",
    "cattaneo_residual_profile",
    "f_exact",
    "f_approx",
    "x_epsilon",
    "modified_law_residual",
    "evaluate_field",
]

_GRAD_FLOOR = 1e-280


@dataclass(frozen=True)
class CorrectionField:
    x: float
    t: float
    f_exact: float  # nan when the gradient is below the evaluation floor
    f_approx: float


def cattaneo_residual_profile(t: float, p: Params = DEFAULT_PARAMS,
                              h: float | None = None) -> float:
    """L2 norm over x in (0, t) of (-D grad rho_RW) - (J_RW + tau dJ_RW/dt).

    The orientation is the Fick-consistent one (both sides are fluxes and
    vanish together as F -> 1); the literally-printed difference against
    the raw gradient would not vanish even for the Gaussian. Measured
    decay is ~ t^{-7/4}; the defect shape would cancel exactly for an
    effective relaxation time dt/3 rather than tau = dt/2.
    """
    if not t > 0.0:
        raise DomainError(f"cattaneo_residual_profile requires t > 0, got {t}")
    th = t / p.dt
    if h is None:
        hh = default_time_step(th)
    else:
        hh = h / p.dt
    val = core.cattaneo_l2(th, hh)
    if p.is_default():
        return val
    return val * math.sqrt(p.dx) / p.dt


def f_exact(x: float, t: float, p: Params = DEFAULT_PARAMS,
            h: float | None = None) -> float:
    """Exact correction factor -(J + tau dJ/dt)/(D grad rho) for the walk."""
    if not t > 0.0:
        raise DomainError(f"f_exact requires t > 0, got {t}")
    if x == 0.0:
        raise DegenerateGradientError("F is 0/0 at x = 0; exclude the origin")
    if abs(x) >= p.V * t:
        raise OutOfConeError(f"|x|={abs(x)} not strictly inside cone V*t={p.V * t}")
    xi = x / p.dx
    th = t / p.dt
    if abs(0.5 * core.grad_rw(xi, th)) < _GRAD_FLOOR:
        raise DegenerateGradientError(
            f"gradient below evaluation floor at (x={x}, t={t})")
    hh = default_time_step(th) if h is None else h / p.dt
    return core.f_exact_val(xi, th, hh)


def f_approx(x: float, t: float, p: Params = DEFAULT_PARAMS) -> float:
    """(1 - exp(-2Vt/|x|)) Theta(Vt - |x|); the front point is included."""
    if x == 0.0:
        raise DomainError("f_approx is undefined at x = 0 (limit is 1)")
    if abs(x) > p.V * t:
        return 0.0
    return -math.expm1(-2.0 * p.V * t / abs(x))


def x_epsilon(eps: float, t: float, p: Params = DEFAULT_PARAMS) -> float:
    """Position where 1 - F_approx = eps: x_eps = 2 V t / ln(1/eps).

    (Round-trips with f_approx exactly; for eps = 1e-3 this is 0.2895 t
    at V = 1.)"""
    if not 0.0 < eps < 1.0:
        raise DomainError(f"x_epsilon requires 0 < eps < 1, got {eps}")
    if not t > 0.0:
        raise DomainError(f"x_epsilon requires t > 0, got {t}")
    return 2.0 * p.V * t / math.log(1.0 / eps)


def modified_law_residual(x: float, t: float, p: Params = DEFAULT_PARAMS,
                          h: float | None = None) -> float:
    """Pointwise defect (J + tau dJ/dt) + D F_approx grad rho of the proposed
    modified nonlocal law. Zero outside the cone (every term vanishes)."""
    if not t > 0.0:
        raise DomainError(f"modified_law_residual requires t > 0, got {t}")
    if x == 0.0:
        raise DomainError("exclude x = 0 (odd integrand, trivial zero)")
    xi = x / p.dx
    th = t / p.dt
    if abs(xi) >= th:
        return 0.0
    hh = default_time_step(th) if h is None else h / p.dt
    j, djdt = core.flux_terms_rw(xi, th, hh)
    fa = -math.expm1(-2.0 * th / abs(xi))
    resid = (j + 0.5 * djdt) + 0.5 * fa * core.grad_rw(xi, th)
    if p.is_default():
        return resid
    return resid / p.dt


def evaluate_field(x: float, t: float, p: Params = DEFAULT_PARAMS) -> CorrectionField:
    """Both correction factors at one point; f_exact is nan where degenerate."""
    fa = f_approx(x, t, p)
    try:
        fe = f_exact(x, t, p)
    except (DegenerateGradientError, OutOfConeError):
        fe = float("nan")
    return CorrectionField(x=x, t=t, f_exact=fe, f_approx=fa)

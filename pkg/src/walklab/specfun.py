"""Numerically stable scalar special functions.

Every kernel evaluation routes through these scaled forms (log-gamma,
exponentially scaled Bessels); raw Gamma or I0 values are never
materialized, since the long-time regime (t up to 1e4 hop times) would
overflow doubles immediately.
"""

import math

from ._backends import core
from .errors import DomainError

__all__ = [
    "log_gamma",
    "digamma",
    "bessel_i0e",
    "bessel_i1e",
    "stirling_approx",
    "gammainc_q",
]


def log_gamma(z: float) -> float:
    """ln Gamma(z) for z > 0.

    Stirling series with upward recurrence below z=8; relative error is
    below 1e-13 on [0.5, 1e6] (measured ~2e-15 worst case).
    """
    if not z > 0.0:
        raise DomainError(f"log_gamma requires z > 0, got {z}")
    return core.log_gamma(z)


def digamma(z: float) -> float:
    """psi(z) = d/dz ln Gamma(z) for z > 0; absolute error below 1e-12."""
    if not z > 0.0:
        raise DomainError(f"digamma requires z > 0, got {z}")
    return core.digamma(z)


def bessel_i0e(z: float) -> float:
    """exp(-z) I0(z) for z >= 0. Never overflows; relative error < 1e-12."""
    if not z >= 0.0:
        raise DomainError(f"bessel_i0e requires z >= 0, got {z}")
    return core.bessel_i0e(z)


def bessel_i1e(z: float) -> float:
    """exp(-z) I1(z) for z >= 0. Never overflows; relative error < 1e-12."""
    if not z >= 0.0:
        raise DomainError(f"bessel_i1e requires z >= 0, got {z}")
    return core.bessel_i1e(z)


_BRACE_TERMS = (1.0, 1.0 / 12.0, 1.0 / 288.0)


def stirling_approx(z: float, terms: int) -> float:
    """Truncated Stirling approximation of z! = Gamma(z+1).

    z^z e^{-z} sqrt(2 pi z) * (1 + 1/(12 z) + 1/(288 z^2)) keeping the
    first `terms` brace terms. Diagnostic only (quantifies the error of
    keeping one term); production kernels never use it.
    """
    if not z >= 1.0:
        raise DomainError(f"stirling_approx requires z >= 1, got {z}")
    if terms not in (1, 2, 3):
        raise DomainError(f"terms must be 1, 2 or 3, got {terms}")
    brace = 0.0
    for k in range(terms):
        brace += _BRACE_TERMS[k] / z**k
    return math.exp(z * math.log(z) - z + 0.5 * math.log(2.0 * math.pi * z)) * brace


def gammainc_q(a: float, x: float) -> float:
    """Upper regularized incomplete gamma Q(a, x) (chi-square tail helper)."""
    if not (a > 0.0 and x >= 0.0):
        raise DomainError(f"gammainc_q requires a > 0, x >= 0, got ({a}, {x})")
    return core.gammainc_q(a, x)

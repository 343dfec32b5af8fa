"""Exception types raised by the library."""


class DomainError(ValueError):
    """Argument outside the documented domain of an operation."""


class ParityMismatchError(DomainError):
    """Lattice site and step count have opposite parity."""


class OutOfConeError(DomainError):
    """Point lies outside the light cone |x| <= V*t where that is disallowed."""


class DegenerateGradientError(DomainError):
    """Gradient magnitude below the evaluation floor (0/0 region of F)."""


class UnknownMetricError(KeyError):
    """Deviation metric identifier not recognized."""


class StencilError(DomainError):
    """Finite-difference stencil leaves the kernel's domain."""


class ResourceLimitError(RuntimeError):
    """Requested simulation exceeds the configured memory bound."""

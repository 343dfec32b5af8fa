"""walklab: a numerical laboratory for 1D diffusive transport.

Three candidate fundamental solutions of 1D transport — the exact
random-walk density, the Gaussian kernel and the telegraph kernel — with
their gradients, tail masses and fluxes, plus the machinery to quantify
how fast the models converge to each other: L2 deviation integrals,
power-law fits, maximum-gradient statistics, the corrected flux-gradient
law with its correction factor F(x, t), and a Monte Carlo oracle.
"""

from ._backends import BACKEND_NAME, available_backends

__version__ = "0.1.0"

__all__ = ["BACKEND_NAME", "available_backends", "__version__"]

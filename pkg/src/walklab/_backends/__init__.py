"""Backend selection: compiled extension if available, pure Python otherwise.

Set WALKLAB_BACKEND=python (or =compiled) to force a choice. The selected
module is exposed as ``core``; both backends implement the same API and
produce bit-identical results.
"""

import os

from . import _pycore

_requested = os.environ.get("WALKLAB_BACKEND", "").strip().lower()

if _requested == "python":
    core = _pycore
elif _requested == "compiled":
    from . import _fastcore
    core = _fastcore
else:
    try:
        from . import _fastcore
        core = _fastcore
    except ImportError:
        core = _pycore

BACKEND_NAME = core.BACKEND


def available_backends():
    """Names of importable backends (for the benchmark and tests)."""
    names = ["python"]
    try:
        from . import _fastcore  # noqa: F401
        names.insert(0, "compiled")
    except ImportError:
        pass
    return names


def get_backend(name):
    if name == "python":
        return _pycore
    if name == "compiled":
        from . import _fastcore
        return _fastcore
    raise ValueError(f"unknown backend {name!r}")

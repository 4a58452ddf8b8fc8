"""Kernel backend selection.

The compiled extension is preferred when importable; the pure-Python
fallback implements the identical bit-level algorithm.  Set
``CHROMANOISE_KERNELS=python`` (or ``cython``) to force a backend, e.g.
for the benchmark or the parity test.
"""

import os

from . import pykernels

try:
    from . import _noise_cy
except ImportError:  # extension not built; pure fallback
    _noise_cy = None

_BACKENDS = {"python": pykernels}
if _noise_cy is not None:
    _BACKENDS["cython"] = _noise_cy


def get_backend(name=None):
    """Return a kernel module by name, or the active default."""
    if name is None:
        name = os.environ.get("CHROMANOISE_KERNELS")
    if name is None:
        name = "cython" if _noise_cy is not None else "python"
    try:
        return _BACKENDS[name]
    except KeyError:
        raise ImportError(
            f"kernel backend {name!r} is not available; "
            f"built backends: {', '.join(sorted(_BACKENDS))}"
        ) from None


def available_backends():
    return tuple(sorted(_BACKENDS))


def backend_name():
    return get_backend().BACKEND


def fill_standard_normal(seed, h, w, c):
    return get_backend().fill_standard_normal(seed, h, w, c)

"""Kernel backend selection.

The compiled Cython extension is used when it imports; otherwise the numpy
implementation is used.  Set ``APPELL_LAB_PURE_PYTHON=1`` to force the
fallback (the benchmark and the backend-parity tests do this explicitly via
:func:`load_backend`).
"""

import importlib
import os

from . import _kernels_py

KERNEL_NAMES = ("theta_sum", "appell_sum", "r_sum", "r_dbar_sum", "mordell_trap")


def load_backend(name):
    """Return the kernel module for ``"c"`` or ``"python"``."""
    if name == "python":
        return _kernels_py
    if name == "c":
        return importlib.import_module("appell_lab._ckernels")
    raise ValueError(f"unknown backend {name!r}")


def _select():
    if os.environ.get("APPELL_LAB_PURE_PYTHON", "") not in ("", "0"):
        return _kernels_py, "python"
    try:
        return load_backend("c"), "c"
    except ImportError:
        return _kernels_py, "python"


_backend, BACKEND = _select()

theta_sum = _backend.theta_sum
appell_sum = _backend.appell_sum
r_sum = _backend.r_sum
r_dbar_sum = _backend.r_dbar_sum
mordell_trap = _backend.mordell_trap

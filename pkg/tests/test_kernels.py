import math
import os
import subprocess
import sys

import numpy as np
import pytest

from appell_lab import kernels
from appell_lab.kernels import KERNEL_NAMES, load_backend
from appell_lab.sampling import make_rng

try:
    C = load_backend("c")
except ImportError:  # the extension is optional
    C = None
PY = load_backend("python")

needs_c = pytest.mark.skipif(C is None, reason="compiled kernels not built")


def cases(n=25):
    rng = make_rng(17, 0)
    for _ in range(n):
        tau = complex(rng.uniform(-0.5, 0.5), rng.uniform(0.15, 1.5))
        lx = complex(rng.uniform(-3, 3), rng.uniform(-math.pi, math.pi))
        y = complex(*rng.uniform(-0.9, 0.9, 2))
        u = complex(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5))
        yield tau, lx, y, u


def agree(a, b, rtol=1e-12):
    (va, ta), (vb, tb) = a, b
    return abs(va - vb) <= rtol * max(1.0, abs(va)) and math.isclose(ta, tb, rel_tol=1e-6, abs_tol=1e-300)


class TestBackendSelection:
    def test_backend_named(self):
        assert kernels.BACKEND in ("c", "python")

    def test_both_backends_export_every_kernel(self):
        for name in KERNEL_NAMES:
            assert callable(getattr(PY, name))
            if C is not None:
                assert callable(getattr(C, name))

    def test_unknown_backend(self):
        with pytest.raises(ValueError):
            load_backend("fortran")

    def test_env_forces_fallback(self):
        env = dict(os.environ, APPELL_LAB_PURE_PYTHON="1")
        out = subprocess.run([sys.executable, "-c", "from appell_lab import kernels; print(kernels.BACKEND)"],
                             env=env, capture_output=True, text=True, check=True)
        assert out.stdout.strip() == "python"


@needs_c
class TestParity:
    @pytest.mark.parametrize("deriv", [0, 1])
    def test_theta_sum(self, deriv):
        for tau, lx, _, _ in cases():
            assert agree(C.theta_sum(tau, lx, 60, deriv), PY.theta_sum(tau, lx, 60, deriv))

    def test_appell_sum(self):
        for tau, lx, y, _ in cases():
            assert agree(C.appell_sum(tau, lx, y, 60), PY.appell_sum(tau, lx, y, 60))

    def test_r_sum(self):
        for tau, _, _, u in cases():
            assert agree(C.r_sum(tau, u, 40), PY.r_sum(tau, u, 40))

    def test_r_dbar_sum(self):
        for tau, _, _, u in cases():
            assert agree(C.r_dbar_sum(tau, u, 40), PY.r_dbar_sum(tau, u, 40))

    def test_mordell_trap(self):
        for tau, _, _, u in cases(10):
            a, b = C.mordell_trap(tau, u, 8.0, 0.05), PY.mordell_trap(tau, u, 8.0, 0.05)
            assert abs(np.asarray(a) - np.asarray(b)).max() <= 1e-12 * max(1.0, float(np.abs(np.asarray(a)).max()))

    def test_tail_bound_is_honest(self):
        # the truncated value plus its tail bound covers a long truncation
        for backend in (C, PY):
            for tau, lx, _, _ in cases(10):
                short, tail = backend.theta_sum(tau, lx, 6)
                long, _ = backend.theta_sum(tau, lx, 80)
                assert abs(short - long) <= tail * (1 + 1e-9) + 1e-13 * max(1.0, abs(long))

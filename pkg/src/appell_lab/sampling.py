"""Seeded sampling of test points.

All random draws go through numpy's counter-based Philox generator so a
seed reproduces the same points on every platform.  Boxes:

* nome q: |q| uniform in [0.05, 0.5], arg q uniform in [-pi, pi)
* x: log|x| uniform in [log 0.1, log 10], arg x uniform
* elliptic parameters: u = alpha + beta*tau with alpha, beta uniform in [-1/2, 1/2)
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from .qseries import JacobiPoint, TauPoint, lattice_distance

Q_BOX = (0.05, 0.5)
X_BOX = (0.1, 10.0)


def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """Independent Philox stream ``stream`` for ``seed``."""
    return np.random.Generator(np.random.Philox(key=int(seed), counter=[0, 0, 0, int(stream)]))


def random_tau(rng, q_box=Q_BOX) -> TauPoint:
    r = rng.uniform(*q_box)
    phi = rng.uniform(-math.pi, math.pi)
    return TauPoint.from_q(cmath.rect(r, phi))


def random_x(rng, x_box=X_BOX) -> complex:
    r = math.exp(rng.uniform(math.log(x_box[0]), math.log(x_box[1])))
    return cmath.rect(r, rng.uniform(-math.pi, math.pi))


def random_elliptic(rng, tau: TauPoint) -> complex:
    a, b = rng.uniform(-0.5, 0.5, size=2)
    return complex(a + b * tau.tau)


def far_from_lattice(w: complex, tau: TauPoint, margin: float = 1e-2) -> bool:
    return lattice_distance(w, tau)[1] > margin


def random_jacobi_point(rng, tau: TauPoint | None = None, q_box=Q_BOX, margin: float = 1e-2,
                        avoid=("u", "v", "u+v", "u-v")) -> JacobiPoint:
    """Random (u, v; tau) kept ``margin`` away from the lattice in the listed combinations."""
    for _ in range(1000):
        t = tau if tau is not None else random_tau(rng, q_box)
        u = random_elliptic(rng, t)
        v = random_elliptic(rng, t)
        combos = {"u": u, "v": v, "u+v": u + v, "u-v": u - v}
        if all(far_from_lattice(combos[k], t, margin) for k in avoid):
            return JacobiPoint(u, v, t)
    raise RuntimeError("could not sample a point away from the lattice")

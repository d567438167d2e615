"""Compare the compiled and pure-Python kernel backends.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--json]

Each kernel is timed on the same fixed batch of arguments with both
backends; the table reports the best-of-``repeat`` wall time per call and
the largest disagreement between the two results.
"""

import argparse
import json
import math
import sys
import timeit

import numpy as np

from appell_lab.kernels import load_backend
from appell_lab.sampling import make_rng


def batch(n=200):
    rng = make_rng(1, 0)
    tau = rng.uniform(-0.5, 0.5, n) + 1j * rng.uniform(0.15, 1.5, n)
    lx = rng.uniform(-3, 3, n) + 1j * rng.uniform(-math.pi, math.pi, n)
    y = rng.uniform(-0.9, 0.9, n) + 1j * rng.uniform(-0.9, 0.9, n)
    u = rng.uniform(-0.5, 0.5, n) + 1j * rng.uniform(-0.5, 0.5, n)
    return [complex(t) for t in tau], [complex(v) for v in lx], [complex(v) for v in y], [complex(v) for v in u]


def workloads(tau, lx, y, u):
    return {
        "theta_sum": lambda k: [k.theta_sum(t, l, 60) for t, l in zip(tau, lx)],
        "appell_sum": lambda k: [k.appell_sum(t, l, w, 60) for t, l, w in zip(tau, lx, y)],
        "r_sum": lambda k: [k.r_sum(t, v, 40) for t, v in zip(tau, u)],
        "r_dbar_sum": lambda k: [k.r_dbar_sum(t, v, 40) for t, v in zip(tau, u)],
        "mordell_trap": lambda k: [k.mordell_trap(t, v, 8.0, 0.05) for t, v in zip(tau[:20], u[:20])],
    }


def value_of(result):
    return np.asarray(result[0] if isinstance(result, tuple) else result, dtype=complex)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--json", action="store_true", help="print machine-readable results")
    args = ap.parse_args(argv)

    py = load_backend("python")
    try:
        c = load_backend("c")
    except ImportError:
        print("compiled kernels are not built; only the Python backend is available", file=sys.stderr)
        return 1

    data = batch()
    rows = []
    for name, work in workloads(*data).items():
        calls = len(work(py))
        t_py = min(timeit.repeat(lambda: work(py), number=1, repeat=args.repeat)) / calls
        t_c = min(timeit.repeat(lambda: work(c), number=1, repeat=args.repeat)) / calls
        diff = max(float(np.max(np.abs(value_of(a) - value_of(b)) / np.maximum(1.0, np.abs(value_of(b)))))
                   for a, b in zip(work(c), work(py)))
        rows.append({"kernel": name, "python_us": t_py * 1e6, "c_us": t_c * 1e6, "speedup": t_py / t_c,
                     "max_rel_diff": diff})

    if args.json:
        print(json.dumps(rows, indent=2))
    else:
        print(f"{'kernel':<14}{'python (us)':>14}{'c (us)':>12}{'speedup':>10}{'max rel diff':>15}")
        for r in rows:
            print(f"{r['kernel']:<14}{r['python_us']:>14.1f}{r['c_us']:>12.2f}{r['speedup']:>9.1f}x"
                  f"{r['max_rel_diff']:>15.2e}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

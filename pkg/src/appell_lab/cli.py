"""Command-line front end: ``appell-lab eval | verify | scan``.

Exit codes: 0 success, 1 evaluation or check failure, 2 usage error.
Complex arguments are written ``re+imi`` (``0.1``, ``2i``, ``1-0.5i``).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import __version__, mock, qseries as qs, toy
from .errors import DomainError, EvaluationError, NonFiniteInputError
from .suites import DEFAULT_TOLERANCES, SCHEMA, RunConfig, run_suite

FUNCTIONS = ("theta", "kappa", "mordell_h", "mu", "R", "mu_tilde", "s_toy", "F_toy")
SUITE_NAMES = ("qseries", "solver", "automorphy", "mock", "toy", "all")
POINT_OPTIONS = ("x", "y", "q", "tau", "u", "v", "z")


class UsageError(Exception):
    pass


def parse_complex(text: str) -> complex:
    """'re+imi' (or Python's 're+imj') -> complex; also accepts a bare real or imaginary part."""
    s = text.strip().replace(" ", "")
    if not s:
        raise argparse.ArgumentTypeError("empty complex number")
    try:
        return complex(s.replace("i", "j")) if s[-1] in "ij" else complex(float(s))
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot parse complex number {text!r} (use re+imi)") from None


def attach_negative_values(argv: list[str]) -> list[str]:
    """Rewrite ``--v -0.3+0.1i`` as ``--v=-0.3+0.1i`` so argparse does not read the value as an option."""
    out, i = [], 0
    value_opts = {f"--{n}" for n in POINT_OPTIONS} | {"--circle", "--range"}
    while i < len(argv):
        tok = argv[i]
        if tok in value_opts and i + 1 < len(argv) and argv[i + 1].startswith("-") and len(argv[i + 1]) > 1:
            try:
                parse_complex(argv[i + 1].split(":")[0].split("@")[0])
            except argparse.ArgumentTypeError:
                pass
            else:
                out.append(f"{tok}={argv[i + 1]}")
                i += 2
                continue
        out.append(tok)
        i += 1
    return out


def format_complex(z: complex) -> str:
    return f"{z.real:.15g}{z.imag:+.15g}i"


def _jnum(x: float):
    return x if math.isfinite(x) else str(x)


# -- argument parsing -------------------------------------------------------


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--nmax", type=int, default=qs.DEFAULT_TRUNCATION.n_max, help="series truncation |n| <= nmax")
    p.add_argument("--tol", type=float, default=qs.DEFAULT_TRUNCATION.tol, help="series tail tolerance")
    p.add_argument("--quad-width", type=float, default=None, help="Mordell integral half-width W (default: auto)")
    p.add_argument("--quad-step", type=float, default=None, help="trapezoid step (default: auto)")
    p.add_argument("--format", choices=("json", "csv", "human"), default="human", dest="output_format")


def _point_args(p: argparse.ArgumentParser) -> None:
    for name in POINT_OPTIONS:
        p.add_argument(f"--{name}", type=parse_complex, default=None)
    p.add_argument("--ablate-R", action="store_true", help="drop the R correction (mu_tilde)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="appell-lab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    ev = sub.add_parser("eval", help="evaluate a function at one point")
    ev.add_argument("function", choices=FUNCTIONS)
    _point_args(ev)
    _common(ev)

    ve = sub.add_parser("verify", help="run a seeded verification suite")
    ve.add_argument("suite", choices=SUITE_NAMES)
    ve.add_argument("--seed", type=int, default=0)
    ve.add_argument("--points", type=int, default=200, help="sample points for the large-sample checks")
    ve.add_argument("--ablate-R", action="store_true", help="run the splitting checks without R")
    ve.add_argument("--timing", action="store_true", help="include wall-clock seconds in the report")
    ve.add_argument("--suite-tol", action="append", default=[], metavar="KEY=VALUE",
                    help=f"override a tolerance ({', '.join(DEFAULT_TOLERANCES)})")
    _common(ve)
    ve.set_defaults(output_format="json")

    sc = sub.add_parser("scan", help="evaluate a function along a grid")
    sc.add_argument("function", choices=FUNCTIONS)
    sc.add_argument("--over", required=True, choices=POINT_OPTIONS)
    grid = sc.add_mutually_exclusive_group(required=True)
    grid.add_argument("--circle", metavar="R[@CENTER]", help="points CENTER + R e^{2 pi i k / count}")
    grid.add_argument("--range", metavar="START:STOP", help="points on the segment, endpoints included")
    sc.add_argument("--count", type=int, default=100)
    sc.add_argument("--skip-bad", action="store_true", help="mark failing rows instead of aborting")
    _point_args(sc)
    _common(sc)
    sc.set_defaults(output_format="csv")
    return parser


def _truncation(args) -> qs.Truncation:
    try:
        return qs.Truncation(args.nmax, args.tol)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _quadrature(args) -> mock.QuadratureParams:
    try:
        return mock.QuadratureParams(args.quad_width, args.quad_step)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


# -- evaluation -------------------------------------------------------------


def _tau_of(params: dict) -> qs.TauPoint:
    if params.get("tau") is not None:
        return qs.TauPoint(params["tau"])
    if params.get("q") is not None:
        return qs.TauPoint.from_q(params["q"])
    raise UsageError("one of --tau or --q is required")


def _need(params: dict, *names: str) -> list:
    missing = [n for n in names if params.get(n) is None]
    if missing:
        raise UsageError("missing " + ", ".join(f"--{n}" for n in missing))
    return [params[n] for n in names]


def evaluate(function: str, params: dict, trunc: qs.Truncation, quad: mock.QuadratureParams,
             ablate_R: bool = False) -> qs.Estimate:
    """Value and error estimate of ``function`` at the given parameters."""
    tau = _tau_of(params)
    if function == "theta":
        (x,) = _need(params, "x")
        return qs.theta_estimate(x, tau, trunc)
    if function == "kappa":
        x, y = _need(params, "x", "y")
        return qs.kappa_estimate(x, y, tau, trunc)
    if function == "mordell_h":
        (z,) = _need(params, "z")
        return mock.mordell_h_estimate(z, tau, quad)
    if function == "mu":
        u, v = _need(params, "u", "v")
        return mock.zwegers_mu_estimate(u, v, tau, trunc)
    if function == "R":
        (u,) = _need(params, "u")
        return mock.zwegers_R_estimate(u, tau, trunc)
    if function == "mu_tilde":
        u, v = _need(params, "u", "v")
        mu = mock.zwegers_mu_estimate(u, v, tau, trunc)
        if ablate_R:
            return mu
        r = mock.zwegers_R_estimate(u - v, tau, trunc)
        return qs.Estimate(mu.value + 0.5j * r.value, mu.error + 0.5 * r.error)
    lattice = toy.ToyLattice(tau)
    (z,) = _need(params, "z")
    if function == "s_toy":
        return qs.Estimate(toy.normalized_s(z, lattice, trunc), trunc.tol)
    return qs.Estimate(toy.toy_F(z, lattice), 0.0)


def _params(args) -> dict:
    return {k: getattr(args, k) for k in POINT_OPTIONS}


def cmd_eval(args, out) -> int:
    params = _params(args)
    est = evaluate(args.function, params, _truncation(args), _quadrature(args), args.ablate_R)
    inputs = {k: [v.real, v.imag] for k, v in params.items() if v is not None}
    if args.output_format == "json":
        doc = {"schema": SCHEMA, "function": args.function, "inputs": inputs,
               "value": [est.value.real, est.value.imag], "error": _jnum(est.error)}
        out.write(json.dumps(doc, sort_keys=True) + "\n")
    elif args.output_format == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["function", "value_re", "value_im", "error"])
        w.writerow([args.function, repr(est.value.real), repr(est.value.imag), repr(est.error)])
    else:
        out.write(f"{args.function} = {format_complex(complex(est.value))}  (tail bound {est.error:.3g})\n")
    return 0


# -- verify -----------------------------------------------------------------


def _tolerances(items) -> dict:
    tols = dict(DEFAULT_TOLERANCES)
    for item in items:
        key, _, val = item.partition("=")
        if key not in tols:
            raise UsageError(f"unknown tolerance key {key!r}")
        try:
            tols[key] = float(val)
        except ValueError:
            raise UsageError(f"bad tolerance value {val!r}") from None
    return tols


def cmd_verify(args, out) -> int:
    if args.seed < 0:
        raise UsageError("--seed must be a nonnegative integer")
    if args.points < 2:
        raise UsageError("--points must be at least 2")
    cfg = RunConfig(seed=args.seed, trunc=_truncation(args), quad=_quadrature(args),
                    tolerances=_tolerances(args.suite_tol), output_format=args.output_format,
                    ablate_R=args.ablate_R, n_points=args.points)
    report = run_suite(args.suite, cfg)
    if args.output_format == "json":
        out.write(json.dumps(report.to_json(args.timing), indent=2) + "\n")
    elif args.output_format == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["check", "residual", "tolerance", "pass"])
        for c in report.checks:
            w.writerow([c.name, repr(c.residual), repr(c.tolerance), c.passed])
    else:
        for c in report.checks:
            out.write(f"{'PASS' if c.passed else 'FAIL'}  {c.name}: {c.residual:.3g} (tol {c.tolerance:g})\n")
        for c in report.findings:
            out.write(f"note  {c.name}: {c.residual:.3g}\n")
        out.write(f"{args.suite}: {'PASS' if report.passed else 'FAIL'}\n")
    return 0 if report.passed else 1


# -- scan -------------------------------------------------------------------


def grid_points(args) -> list[complex]:
    n = args.count
    if n < 1:
        raise UsageError("--count must be positive")
    try:
        if args.circle is not None:
            radius, _, center = args.circle.partition("@")
            r = float(radius)
            c = parse_complex(center) if center else 0j
            return [c + r * complex(np.exp(2j * np.pi * k / n)) for k in range(n)]
        start, sep, stop = args.range.partition(":")
        if not sep:
            raise UsageError("--range needs START:STOP")
        a, b = parse_complex(start), parse_complex(stop)
    except (ValueError, argparse.ArgumentTypeError) as exc:
        raise UsageError(str(exc)) from None
    if n == 1:
        return [a]
    return [a + (b - a) * k / (n - 1) for k in range(n)]


def cmd_scan(args, out) -> int:
    trunc, quad = _truncation(args), _quadrature(args)
    base = _params(args)
    rows = []
    for w in grid_points(args):
        params = dict(base, **{args.over: w})
        try:
            est = evaluate(args.function, params, trunc, quad, args.ablate_R)
            rows.append((w, est.value, est.error, "ok"))
        except UsageError:
            raise
        except EvaluationError as exc:
            if not args.skip_bad:
                sys.stderr.write(f"error [{exc.rule}] at {args.over}={format_complex(w)}: {exc}\n")
                return 1
            rows.append((w, complex(math.nan, math.nan), math.nan, exc.rule))
    if args.output_format == "json":
        doc = {"schema": SCHEMA, "function": args.function, "over": args.over,
               "rows": [{"input": [w.real, w.imag], "value": [_jnum(v.real), _jnum(v.imag)],
                         "error": _jnum(e), "status": s} for w, v, e, s in rows]}
        out.write(json.dumps(doc) + "\n")
    else:
        w_ = csv.writer(out, lineterminator="\n")
        w_.writerow([f"{args.over}_re", f"{args.over}_im", "value_re", "value_im", "error", "status"])
        for w, v, e, s in rows:
            w_.writerow([repr(w.real), repr(w.imag), repr(v.real), repr(v.imag), repr(e), s])
    return 1 if all(s != "ok" for *_, s in rows) else 0


COMMANDS = {"eval": cmd_eval, "verify": cmd_verify, "scan": cmd_scan}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(attach_negative_values(list(sys.argv[1:] if argv is None else argv)))
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        sys.stderr.write(f"appell-lab: usage error: {exc}\n")
        return 2
    except (DomainError, NonFiniteInputError) as exc:
        sys.stderr.write(f"appell-lab: invalid parameter [{exc.rule}]: {exc}\n")
        return 2
    except EvaluationError as exc:
        sys.stderr.write(f"appell-lab: evaluation failed [{exc.rule}]: {exc}\n")
        return 1


def run(argv) -> tuple[int, str]:
    """Run the CLI in-process and capture stdout (used by tests)."""
    buf = io.StringIO()
    code = main(argv, buf)
    return code, buf.getvalue()


if __name__ == "__main__":
    sys.exit(main())


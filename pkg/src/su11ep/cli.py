"""Command-line entry point: ``su11ep <command> [options]``.

Exit codes: 0 success, 1 check or solver failure, 2 invalid configuration.
Floats are written with 17 significant digits.
"""
import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from .classical import Frame, PhasePoint, integrate
from .errors import ConvergenceError, DimensionError, RegimeError, StepError, Su11Error
from .exact_eigenfunctions import Half, evaluate, generate_polynomial
from .grid_resonance import STENCILS, GridSpec, complex_scaled_spectrum
from .model import ModelParams, potential_profile
from .spectra import spectrum_sweep
from .verification import FIG1_COUPLINGS, VerifyConfig, run_verification

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


class ConfigError(ValueError):
    pass


def fmt(v) -> str:
    return f"{float(v):.17g}"


def parse_complex(text: str) -> complex:
    """Parse "a+bi" style input ("1", "2i", "-i", "0.5-1.5i")."""
    s = text.strip().replace(" ", "").replace("i", "j")
    try:
        return complex(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from None


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _g_grid(args):
    if args.g is not None:
        if any(v is not None for v in (args.g_min, args.g_max, args.g_step)):
            raise ConfigError("use either --g or --g-min/--g-max/--g-step")
        return sorted(args.g)
    if None in (args.g_min, args.g_max, args.g_step):
        raise ConfigError("give --g or all of --g-min, --g-max, --g-step")
    if args.g_step <= 0 or args.g_max < args.g_min:
        raise ConfigError("need g-step > 0 and g-max >= g-min")
    count = int(math.floor((args.g_max - args.g_min) / args.g_step + 1e-9)) + 1
    return [round(args.g_min + k * args.g_step, 12) for k in range(count)]


def _emit_table(rows, header, args):
    if args.format == "json":
        text = json.dumps([dict(zip(header, r)) for r in rows], indent=1) + "\n"
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        text = buf.getvalue()
    _write(text, args.out)


def _write(text, path):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def cmd_spectrum(args):
    grid = _g_grid(args)
    sweep = spectrum_sweep(args.omega, grid, args.truncation, args.levels, tol=args.tol,
                           threads=args.threads)
    rows = []
    for p in sweep.points:
        for n, v in p.levels:
            rows.append([fmt(p.g), n, fmt(v.real), fmt(v.imag), p.branch.value])
    _emit_table(rows, ["g", "level", "re_eigenvalue", "im_eigenvalue", "branch"], args)
    return EXIT_OK


def cmd_potential(args):
    gs = args.g if args.g is not None else [g * args.omega for g in FIG1_COUPLINGS]
    if args.points < 1 or args.x_min > args.x_max:
        raise ConfigError("need points >= 1 and x-min <= x-max")
    xs = np.linspace(args.x_min, args.x_max, args.points)
    rows = []
    for g in gs:
        for x, v in potential_profile(ModelParams(args.omega, g, tol=args.tol), xs, args.convention):
            rows.append([fmt(g), fmt(x), fmt(v)])
    _emit_table(rows, ["g", "x", "v"], args)
    return EXIT_OK


def _coeff_record(power, c):
    return {"power": power, "text": str(c), "re": str(c.re), "im": str(c.im)}


def cmd_eigenfunction(args):
    if args.n < 0:
        raise ConfigError("--n must be non-negative")
    if args.freq <= 0:
        raise ConfigError("--freq must be positive")
    half = generate_polynomial(Half(args.branch), args.n)
    xs = np.linspace(args.x_min, args.x_max, args.points)
    vals = evaluate(half, xs, args.freq)
    if args.format == "csv":
        rows = [[fmt(x), fmt(v.real), fmt(v.imag)] for x, v in zip(xs, vals)]
        _emit_table(rows, ["x", "re_psi", "im_psi"], args)
        return EXIT_OK
    meta = half.norm_meta
    doc = {
        "branch": half.half.value,
        "n": half.n,
        "gaussian": "exp(-i x^2/2)" if half.half is Half.KET else "exp(+i x^2/2)",
        "coefficients": [_coeff_record(k, half.poly.coeff(k))
                         for k in range(half.poly.degree, -1, -1)],
        "polynomial": str(half.poly),
        "norm_meta": {"power_of_two": str(meta.two_exp), "power_of_i": str(meta.i_exp),
                      "factorial": meta.factorial, "sqrt_pi_over_i": meta.sqrt_pi_over_i},
        "freq": args.freq,
        "samples": [{"x": fmt(x), "re": fmt(v.real), "im": fmt(v.imag)} for x, v in zip(xs, vals)],
    }
    _write(json.dumps(doc, indent=1) + "\n", args.out)
    return EXIT_OK


def cmd_resonances(args):
    spec = GridSpec(args.x_min, args.x_max, args.points, args.theta, args.stencil)
    res = complex_scaled_spectrum(args.omega, spec, args.levels)
    rows = [[n, fmt(e.real), fmt(e.imag), fmt(t.real), fmt(t.imag), fmt(d)]
            for n, (e, t, d) in enumerate(zip(res.eigenvalues, res.targets, res.deviations))]
    _emit_table(rows, ["level", "re_eigenvalue", "im_eigenvalue", "re_target", "im_target",
                       "deviation"], args)
    return EXIT_OK


def cmd_classical(args):
    if args.steps < 1 or args.every < 1 or not args.dt > 0:
        raise ConfigError("need steps >= 1, every >= 1 and dt > 0")
    params = ModelParams(args.omega, args.g, tol=args.tol)
    frame = Frame.ORIGINAL if args.frame == "original" else Frame.TRANSFORMED
    tr = integrate(PhasePoint(args.x0, args.p0, 0.0, frame), args.dt, args.steps, params)
    keep = sorted(set(range(0, len(tr), args.every)) | {len(tr) - 1})
    rows = [[fmt(tr.t[k]), fmt(tr.q[k].real), fmt(tr.q[k].imag), fmt(tr.mom[k].real),
             fmt(tr.mom[k].imag), fmt(tr.hamiltonian_values[k].real),
             fmt(tr.hamiltonian_values[k].imag)] for k in keep]
    _emit_table(rows, ["t", "re_x", "im_x", "re_p", "im_p", "re_H", "im_H"], args)
    return EXIT_OK


def cmd_verify(args):
    cfg = VerifyConfig(omega=args.omega, truncation=args.truncation, seed=args.seed,
                       eta_perturbation=args.eta_perturbation, threads=args.threads or 0)
    report = run_verification(cfg)
    _write(json.dumps(report, indent=1, default=float) + "\n", args.out)
    for c in report["checks"]:
        print(f"{c['status']:>7}  {c['name']}", file=sys.stderr)
    return EXIT_OK if report["status"] == "pass" else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="su11ep", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, fmt_default="csv"):
        p.add_argument("--omega", type=float, default=1.0)
        p.add_argument("--tol", type=float, default=1e-3)
        p.add_argument("--format", choices=("csv", "json"), default=fmt_default)
        p.add_argument("--out", default=None, help="output path (default: stdout)")
        p.add_argument("--threads", type=_positive_int, default=None)

    p = sub.add_parser("spectrum", help="lowest levels and branch over a coupling grid")
    common(p)
    p.add_argument("--g", type=float, nargs="+")
    p.add_argument("--g-min", type=float)
    p.add_argument("--g-max", type=float)
    p.add_argument("--g-step", type=float)
    p.add_argument("--truncation", type=int, default=128)
    p.add_argument("--levels", type=_positive_int, default=3)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("potential", help="transformed potential V(x) per coupling")
    common(p)
    p.add_argument("--g", type=float, nargs="+")
    p.add_argument("--x-min", type=float, default=-3.0)
    p.add_argument("--x-max", type=float, default=3.0)
    p.add_argument("--points", type=int, default=61)
    p.add_argument("--convention", choices=("frequency", "squared"), default="frequency")
    p.set_defaults(func=cmd_potential)

    p = sub.add_parser("eigenfunction", help="exact polynomial and samples of psi_n")
    common(p, fmt_default="json")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--branch", choices=("ket", "bra"), default="ket")
    p.add_argument("--freq", type=float, default=1.0)
    p.add_argument("--x-min", type=float, default=-3.0)
    p.add_argument("--x-max", type=float, default=3.0)
    p.add_argument("--points", type=int, default=61)
    p.set_defaults(func=cmd_eigenfunction)

    p = sub.add_parser("resonances", help="complex-scaled grid eigenvalues")
    common(p)
    p.add_argument("--theta", type=float, default=-math.pi / 4)
    p.add_argument("--x-min", type=float, default=-12.0)
    p.add_argument("--x-max", type=float, default=12.0)
    p.add_argument("--points", type=int, default=801)
    p.add_argument("--stencil", choices=STENCILS, default="fd4")
    p.add_argument("--levels", type=_positive_int, default=5)
    p.set_defaults(func=cmd_resonances)

    p = sub.add_parser("classical", help="integrate the complex classical flow")
    common(p)
    p.add_argument("--g", type=float, default=0.0)
    p.add_argument("--x0", type=parse_complex, default=0j)
    p.add_argument("--p0", type=parse_complex, default=1 + 0j)
    p.add_argument("--dt", type=float, default=1e-3)
    p.add_argument("--steps", type=int, default=3000)
    p.add_argument("--every", type=int, default=1, help="write every k-th sample")
    p.add_argument("--frame", choices=("original", "transformed"), default="original")
    p.set_defaults(func=cmd_classical)

    p = sub.add_parser("verify", help="run the invariant suite and write a JSON report")
    common(p, fmt_default="json")
    p.add_argument("--truncation", type=int, default=128)
    p.add_argument("--seed", type=int, default=VerifyConfig.seed)
    p.add_argument("--eta-perturbation", type=float, default=0.0,
                   help="debug: shift eta in the gauge check")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, RegimeError, DimensionError, argparse.ArgumentTypeError) as exc:
        print(f"su11ep: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ConvergenceError, StepError, Su11Error) as exc:
        print(f"su11ep: failure: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except ValueError as exc:
        print(f"su11ep: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())

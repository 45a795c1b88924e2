"""Command-line front end: ``bisphere <command> [flags]``.

Settings resolve as flags > ``--config`` INI section > built-in defaults.
Exit codes: 0 ok, 2 usage, 3 domain error, 4 resource or guard limit, 5 I/O.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import io
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .errors import (
    CountOverflowError,
    DomainError,
    GuardExceededError,
    QuadratureError,
    TableRangeError,
)
from .lattice import RepresentationTable, build_representation_table, count_N, sphere_points

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_RESOURCE, EXIT_IO = 0, 2, 3, 4, 5
CACHE_VERSION = 1

EXPERIMENTS = ("scaling", "sharpness", "holder", "weyl", "error-decay", "multiplier")

# operation parameters each subcommand must expose (checked by the help-parity test)
OPERATION_FLAGS = {
    "count": ("--dim", "--lambda", "--arity", "--lambda-max", "--cache-dir"),
    "sphere": ("--dim", "--lambda", "--threads"),
    "sigma-hat": ("--dim", "--lambda", "--xi", "--arity"),
    "arcs": ("--N",),
    "gauss": ("--l", "--a", "--modulus"),
    "weyl": ("--N", "--theta", "--xi"),
    "average": ("--dim", "--lambda", "--inputs", "--guard", "--direct"),
    "maximal": ("--dim", "--lambda-min", "--lambda-max", "--inputs"),
    "multiplier": ("--which", "--dim", "--lambda", "--xi", "--q-max", "--N", "--a", "--modulus", "--variant", "--arity"),
    "experiment": ("--dim", "--sizes", "--p", "--q-exp", "--r", "--n", "--R-max", "--lambdas", "--q-max", "--family", "--arity"),
}
COMMON_FLAGS = ("--seed", "--out", "--threads", "--config")


class UsageError(Exception):
    pass


# ------------------------------------------------------------------ parsing


def _floats(text: str) -> list[float]:
    try:
        return [float(Fraction(t.strip())) for t in str(text).split(",") if t.strip()]
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def _ints(text: str) -> list[int]:
    try:
        return [int(t) for t in str(text).split(",") if t.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _exponent(text: str) -> float:
    x = float(text)
    if not x >= 1:
        raise argparse.ArgumentTypeError(f"exponent must be >= 1 or inf, got {text!r}")
    return x


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=20240517, help="random seed for generated inputs")
    p.add_argument("--out", type=Path, default=None, help="output directory for result files (none: print only)")
    p.add_argument("--threads", type=int, default=1, help="worker thread cap for parallel loops")
    p.add_argument("--config", type=Path, default=None, help="INI file; section [<command>] supplies defaults")


def _dim(p, default=3):
    p.add_argument("--dim", "-d", "--d", dest="dim", type=int, default=default, help="lattice dimension d of Z^d")


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentDefaultsHelpFormatter
    parser = argparse.ArgumentParser(prog="bisphere", description=__doc__.splitlines()[0], formatter_class=fmt)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="command")
    sub.required = True

    p = sub.add_parser("count", help="representation count r_{ld}(lambda)", formatter_class=fmt)
    _dim(p, 3)
    p.add_argument("--lambda", dest="lam", type=int, required=True, help="squared radius lambda (integer)")
    p.add_argument("--arity", type=int, default=1, help="l: counts lattice points of Z^{l d}")
    p.add_argument("--lambda-max", type=int, default=None, help="table size to build and dump (default: lambda)")
    p.add_argument("--cache-dir", type=Path, default=None, help="directory for cached representation tables")
    _common(p)

    p = sub.add_parser("sphere", help="lattice points with |u|^2 = lambda", formatter_class=fmt)
    _dim(p, 3)
    p.add_argument("--lambda", dest="lam", type=int, required=True, help="squared radius lambda (integer)")
    _common(p)

    p = sub.add_parser("sigma-hat", help="exact normalized symbol of the lattice sphere measure", formatter_class=fmt)
    _dim(p, 3)
    p.add_argument("--lambda", dest="lam", type=int, required=True, help="squared radius lambda (integer)")
    p.add_argument("--xi", type=_floats, required=True, help="frequency in T^d, comma separated (fractions allowed)")
    p.add_argument("--arity", type=int, default=2, help="l: the sphere lives in Z^{l d}")
    _common(p)

    p = sub.add_parser("arcs", help="Farey major arcs of half-width 1/(8qN)", formatter_class=fmt)
    p.add_argument("--N", type=int, required=True, help="dissection parameter N (max denominator)")
    _common(p)

    p = sub.add_parser("gauss", help="one-coordinate Gauss sum g(l, a, q)", formatter_class=fmt)
    p.add_argument("--l", type=int, default=0, help="linear frequency l (integer)")
    p.add_argument("--a", type=int, default=1, help="numerator a, coprime to the modulus")
    p.add_argument("--modulus", type=int, required=True, help="modulus q >= 1")
    _common(p)

    p = sub.add_parser("weyl", help="Weyl sum S_N(theta, xi)", formatter_class=fmt)
    p.add_argument("--N", type=int, required=True, help="summation length (u = 0..N)")
    p.add_argument("--theta", type=lambda s: _floats(s)[0], default=0.0, help="quadratic frequency theta in T")
    p.add_argument("--xi", type=_floats, default=[0.0], help="linear frequency xi in T (first entry used)")
    _common(p)

    inputs_help = (
        "comma list of slot inputs: delta, const, box:L, random:SIZE:RADIUS, or a .csv/.json file; "
        "the count of entries sets the arity"
    )
    p = sub.add_parser("average", help="l-linear spherical average T_lambda", formatter_class=fmt)
    _dim(p, 3)
    p.add_argument("--lambda", dest="lam", type=int, required=True, help="squared radius lambda (integer)")
    p.add_argument("--inputs", default="delta,const", help=inputs_help)
    p.add_argument("--direct", action="store_true", help="use the direct enumeration oracle")
    p.add_argument("--guard", type=int, default=10**7, help="work cap (tuples x points) for --direct")
    _common(p)

    p = sub.add_parser("maximal", help="max over lambda of |T_lambda|", formatter_class=fmt)
    _dim(p, 3)
    p.add_argument("--lambda-min", type=int, default=0, help="smallest squared radius in the range")
    p.add_argument("--lambda-max", type=int, required=True, help="largest squared radius in the range")
    p.add_argument("--inputs", default="delta,const", help=inputs_help)
    _common(p)

    p = sub.add_parser("multiplier", help="sigma_hat or a major-arc multiplier at xi", formatter_class=fmt)
    p.add_argument("--which", choices=("sigma", "A", "B", "M"), default="M", help="symbol to evaluate")
    _dim(p, 3)
    p.add_argument("--lambda", dest="lam", type=int, required=True, help="squared radius lambda (integer)")
    p.add_argument("--xi", type=_floats, required=True, help="frequency in T^d, comma separated")
    p.add_argument("--q-max", type=int, default=None, help="largest denominator summed in M (default: N)")
    p.add_argument("--N", type=int, default=None, help="dissection parameter (default: isqrt(lambda))")
    p.add_argument("--a", type=int, default=1, help="arc numerator for A and B")
    p.add_argument("--modulus", type=int, default=1, help="arc denominator q for A and B")
    p.add_argument("--variant", choices=("literal", "arithmetic"), default="literal", help="v-factor convention for M")
    p.add_argument("--arity", type=int, default=2, help="l: the sphere lives in Z^{l d}")
    _common(p)

    p = sub.add_parser("experiment", help="run a scripted experiment and write a report", formatter_class=fmt)
    p.add_argument("name", choices=EXPERIMENTS, help="experiment to run")
    _dim(p, 3)
    p.add_argument("--sizes", type=_ints, default=None, help="size schedule: box sides L, or N values (default per experiment)")
    p.add_argument("--p", type=_exponent, default=None, help="exponent p of the first slot (default per experiment)")
    p.add_argument("--q-exp", type=_exponent, default=2.0, help="exponent q of the other slots")
    p.add_argument("--r", type=_exponent, default=1.0, help="exponent r of the output norm")
    p.add_argument("--n", type=int, default=1, help="sharpness: lambda = n |x|^2")
    p.add_argument("--R-max", type=int, default=60, help="sharpness: radius cut-off of the partial sums")
    p.add_argument("--lambdas", type=_ints, default=None, help="multiplier: squared radii (default 20,36,50)")
    p.add_argument("--q-max", type=int, default=None, help="multiplier: largest denominator (default: isqrt(lambda))")
    p.add_argument("--family", choices=("box", "random_sparse", "delta_plus_constant"), default="box", help="holder: input family")
    p.add_argument("--arity", type=int, default=2, help="l: number of input slots")
    _common(p)
    return parser


def _subparser(parser: argparse.ArgumentParser, name: str) -> argparse.ArgumentParser:
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            return action.choices[name]
    raise KeyError(name)


def parse_args(argv) -> argparse.Namespace:
    parser = build_parser()
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config", type=Path)
    known, rest = pre.parse_known_args(argv)
    command = next((a for a in rest if a in COMMANDS), None)
    if known.config is not None and command is not None:
        cfg = configparser.ConfigParser()
        try:
            with open(known.config) as fh:
                cfg.read_file(fh)
        except OSError as exc:
            raise OSError(f"cannot read config {known.config}: {exc}") from exc
        if cfg.has_section(command):
            sub = _subparser(parser, command)
            known_dests = {a.dest: a for a in sub._actions}
            updates = {}
            for key, value in cfg.items(command):
                dest = key.replace("-", "_")
                dest = "lam" if dest == "lambda" else dest
                if dest not in known_dests:
                    raise UsageError(f"unknown key {key!r} in config section [{command}]")
                action = known_dests[dest]
                if isinstance(action, argparse._StoreTrueAction):
                    updates[dest] = cfg.getboolean(command, key)
                else:
                    try:
                        updates[dest] = action.type(value) if action.type else value
                    except (TypeError, ValueError, argparse.ArgumentTypeError) as exc:
                        raise UsageError(f"bad value for {key!r} in [{command}]: {exc}") from exc
                action.required = False
            sub.set_defaults(**updates)
    return parser.parse_args(argv)


# ------------------------------------------------------------------ inputs


def _parse_input(token: str, d: int, rng: np.random.Generator):
    from .operator import LatticeFunction

    token = token.strip()
    if token == "delta":
        return LatticeFunction.delta(d)
    if token in ("const", "one"):
        return LatticeFunction.constant(d)
    head, _, rest = token.partition(":")
    if head == "box":
        return LatticeFunction.box(d, int(rest))
    if head == "random":
        size, radius = (int(t) for t in rest.split(":"))
        return LatticeFunction.random_sparse(d, size, radius, rng)
    path = Path(token)
    text = path.read_text()
    f = LatticeFunction.from_json(text) if path.suffix == ".json" else LatticeFunction.from_csv(text)
    if f.dim != d:
        raise DomainError(f"{token}: dimension {f.dim} does not match --dim {d}")
    return f


def _inputs(args):
    rng = np.random.default_rng(args.seed)
    specs = [s for s in args.inputs.split(",") if s.strip()]
    if not specs:
        raise DomainError("--inputs is empty")
    return [_parse_input(s, args.dim, rng) for s in specs]


def _write(out: Path | None, name: str, text: str) -> Path | None:
    if out is None:
        return None
    out.mkdir(parents=True, exist_ok=True)
    path = out / name
    path.write_text(text)
    return path


def _function_csv(f) -> str:
    if f.kind == "constant":
        return f"constant\n{f.scale!r}\n"
    return f.to_csv()


def cached_table(k: int, lambda_max: int, cache_dir: Path | None) -> RepresentationTable:
    """Representation table, read from / written to ``cache_dir`` when given."""
    if cache_dir is None:
        return build_representation_table(k, lambda_max)
    path = Path(cache_dir) / f"r{k}_{lambda_max}.v{CACHE_VERSION}.csv"
    if path.exists():
        return RepresentationTable.from_csv(path, k)
    table = build_representation_table(k, lambda_max)
    path.parent.mkdir(parents=True, exist_ok=True)
    table.to_csv(path)
    return table


# ---------------------------------------------------------------- commands


def _cmd_count(args):
    lmax = args.lambda_max if args.lambda_max is not None else args.lam
    if lmax < args.lam:
        raise DomainError("--lambda-max must be >= --lambda")
    table = cached_table(args.arity * args.dim, lmax, args.cache_dir)
    value = count_N(args.dim, args.lam, args.arity, table)
    _write(args.out, f"count_r{table.dim}_{lmax}.csv", table.to_csv())
    print(value)


def _cmd_sphere(args):
    pts = sphere_points(args.dim, args.lam, threads=args.threads)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([f"coord_{i + 1}" for i in range(args.dim)])
    w.writerows(pts.tolist())
    _write(args.out, f"sphere_d{args.dim}_{args.lam}.csv", buf.getvalue())
    print(f"{pts.shape[0]} points with |u|^2 = {args.lam} in Z^{args.dim}")
    if args.out is None:
        for row in pts.tolist():
            print(" ".join(map(str, row)))


def _cmd_sigma_hat(args):
    from .spectral import sigma_hat_exact

    v = sigma_hat_exact(args.dim, args.lam, args.xi, arity=args.arity)
    print(repr(v.real) if abs(v.imag) < 1e-15 else repr(v))


def _cmd_arcs(args):
    from .spectral import farey_major_arcs

    arcs = farey_major_arcs(args.N)
    _write(args.out, f"arcs_N{args.N}.csv", arcs.to_csv())
    print(f"{len(arcs)} arcs, disjoint={arcs.is_disjoint()}, measure={float(arcs.measure()):.6f}")


def _cmd_gauss(args):
    from .spectral import gauss_sum_1d

    g = gauss_sum_1d(args.l, args.a, args.modulus)
    print(f"{g.real!r} {g.imag!r} |g|={abs(g)!r}")


def _cmd_weyl(args):
    from .spectral import weyl_sum

    s = weyl_sum(args.N, args.theta, args.xi[0])
    print(f"{s.real!r} {s.imag!r} |S|={abs(s)!r}")


def _cmd_average(args):
    from .operator import multilinear_average, multilinear_average_direct

    fs = _inputs(args)
    res = multilinear_average_direct(fs, args.lam, guard=args.guard) if args.direct else multilinear_average(fs, args.lam)
    f = res.values
    _write(args.out, f"average_l{res.arity}_{args.lam}.csv", _function_csv(f))
    if f.kind == "constant":
        print(f"constant {f.scale!r}")
    else:
        print(f"{len(f)} support points, value at 0 = {f(np.zeros(args.dim, np.int64))!r}")


def _cmd_maximal(args):
    from .operator import maximal_operator

    fs = _inputs(args)
    res = maximal_operator(fs, range(args.lambda_min, args.lambda_max + 1))
    f = res.values
    _write(args.out, f"maximal_l{len(fs)}_{args.lambda_min}_{args.lambda_max}.csv", _function_csv(f))
    skip = ",".join(map(str, res.skipped)) or "none"
    if f.kind == "constant":
        print(f"constant {f.scale!r}; skipped lambda: {skip}")
    else:
        print(f"{len(f)} support points, value at 0 = {f(np.zeros(args.dim, np.int64))!r}; skipped lambda: {skip}")


def _cmd_multiplier(args):
    from .spectral import multiplier_A, multiplier_B, multiplier_M, sigma_hat_exact

    N = args.N if args.N is not None else math.isqrt(args.lam)
    xi = np.asarray(args.xi, dtype=np.float64)
    rows = []
    if args.which == "sigma":
        v = sigma_hat_exact(args.dim, args.lam, xi, arity=args.arity)
        rows.append((v, 0))
    elif args.which in ("A", "B"):
        fn = multiplier_A if args.which == "A" else multiplier_B
        v = fn(args.a, args.modulus, args.lam, N, args.dim, xi, arity=args.arity)
        rows.append((v, args.modulus))
    else:
        q_max = args.q_max if args.q_max is not None else N
        v, layers = multiplier_M(args.lam, N, args.dim, xi, q_max, variant=args.variant, arity=args.arity, return_layers=True)
        rows += [(complex(layer), q) for q, layer in enumerate(layers, start=1)]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["lambda"] + [f"xi_{i + 1}" for i in range(args.dim)] + ["re", "im", "layer_q"])
    for val, q in rows:
        w.writerow([args.lam] + [repr(float(x)) for x in xi] + [repr(val.real), repr(val.imag), q])
    _write(args.out, f"multiplier_{args.which}_{args.lam}.csv", buf.getvalue())
    print(f"{v.real!r} {v.imag!r}")


def _cmd_experiment(args):
    from . import harness

    d, name = args.dim, args.name
    if name == "scaling":
        rec = harness.run_scaling_experiment(d, args.sizes or (2, 4, 8, 16), args.p or 2.0, args.q_exp, args.r, arity=args.arity)
        summary = f"fitted slope {rec.fit.slope:.4f} (target d/r = {rec.derived['target_slope']:.4f}, residual {rec.fit.residual:.3g})"
        records = [rec]
    elif name == "sharpness":
        rec = harness.run_sharpness_experiment(d, args.n, args.R_max, args.p or 1.0)
        summary = f"{rec.derived['label']}: S({args.R_max}) = {rec.values[-1]:.6g}, tail term {rec.derived['tail_point']:.3g}"
        records = [rec]
    elif name == "holder":
        grid = harness.SweepGrid(((args.p or 2.0, args.q_exp, args.r),), args.family, tuple(args.sizes or (2, 4, 8, 16)))
        records = harness.run_holder_sweep(grid, d, seed=args.seed, arity=args.arity)
        rec = records[0]
        slope = f"{rec.fit.slope:.4f}" if rec.fit else "n/a"
        summary = f"max ratio {rec.derived['max_ratio']:.6g}, trend slope {slope}"
    elif name == "weyl":
        rec = harness.run_weyl_experiment(args.sizes or tuple(2**k for k in range(5, 13)))
        summary = f"fitted exponent {rec.fit.slope:.4f} (residual {rec.fit.residual:.3g})"
        records = [rec]
    elif name == "error-decay":
        rec = harness.run_error_decay_experiment(d, args.sizes or (8, 16, 32, 64, 128), threads=args.threads)
        summary = f"delta_fit {rec.derived['delta_fit']:.4f}, raw slope {rec.derived['raw_slope']:.4f}"
        records = [rec]
    else:
        rec = harness.run_multiplier_comparison(d, args.lambdas or (20, 36, 50), None, args.q_max)
        trend = ", ".join(f"{k}: {v['first']:.3g}->{v['last']:.3g}" for k, v in rec.derived["trend"].items())
        summary = f"sup error by lambda {trend}"
        records = [rec]
    if args.out is not None:
        harness.emit_report(records, args.out, prefix=name.replace("-", "_"))
    print(summary)


COMMANDS = {
    "count": _cmd_count,
    "sphere": _cmd_sphere,
    "sigma-hat": _cmd_sigma_hat,
    "arcs": _cmd_arcs,
    "gauss": _cmd_gauss,
    "weyl": _cmd_weyl,
    "average": _cmd_average,
    "maximal": _cmd_maximal,
    "multiplier": _cmd_multiplier,
    "experiment": _cmd_experiment,
}


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = parse_args(argv)
    except SystemExit as exc:  # argparse usage errors and --help
        return int(exc.code or 0)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        COMMANDS[args.command](args)
    except (GuardExceededError, CountOverflowError, QuadratureError, MemoryError) as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (DomainError, TableRangeError, ZeroDivisionError) as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

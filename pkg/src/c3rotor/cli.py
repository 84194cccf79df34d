"""Command-line interface.

Subcommands expose each solver: ``spectrum`` (real-barrier eigenvalues),
``series`` (exact rational perturbation coefficients), ``splitting``
(quasi-degenerate A-pair gaps), ``ep`` (exceptional points of the
imaginary-barrier variant) and ``figure`` (plot datasets).

Output is CSV with '#'-prefixed parameter comments, or JSON with the same
content.  Rationals are always rendered as "num/den" strings; reals beyond
double precision are rendered as decimal strings.  Exit codes: 0 success,
1 usage error, 2 numerical failure.  A JSON config file can supply defaults
for any flag; explicit flags win.  The environment variable
``C3ROTOR_PRECISION`` supplies a default precision (decimal digits) when no
``--precision`` flag is given.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

from .blocks import Coupling, Species
from .fields import DOUBLE, NumericField
from .figures import figure_data, write_svg
from .recurrence import ConvergenceError
from .series import evaluate_series, rs_series
from .spectral import solve_spectrum, tunneling_splitting
from .stsym import ep_scan, find_a_exceptional_point, find_exceptional_point

USAGE_ERROR = 1
NUMERICAL_ERROR = 2


class _Parser(argparse.ArgumentParser):
    """argparse exits with code 2 on usage errors; the CLI contract wants 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        sys.exit(USAGE_ERROR)


def _field_from(precision):
    if precision is None:
        return DOUBLE
    return NumericField(int(precision))


def _render_real(x, field: NumericField):
    """Full-precision rendering: float for doubles, decimal string beyond."""
    if field.is_double:
        return float(x)
    return field.format(x)


def _write_csv(fp, columns, rows, meta, command):
    fp.write(f"# c3rotor {command}\n")
    for key in sorted(meta):
        fp.write(f"# {key}: {meta[key]}\n")
    fp.write(",".join(columns) + "\n")
    for row in rows:
        fp.write(",".join(_csv_cell(v) for v in row) + "\n")


def _csv_cell(v):
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _write_json(fp, columns, rows, meta, command):
    payload = {
        "command": command,
        "params": {k: meta[k] for k in sorted(meta)},
        "columns": list(columns),
        "rows": [list(r) for r in rows],
    }
    json.dump(payload, fp, indent=2)
    fp.write("\n")


def _emit(args, columns, rows, meta, command):
    def write(fp):
        if args.format == "json":
            _write_json(fp, columns, rows, meta, command)
        else:
            _write_csv(fp, columns, rows, meta, command)

    if args.output:
        with open(args.output, "w") as fp:
            write(fp)
    else:
        write(sys.stdout)


def _cmd_spectrum(args):
    species = Species.parse(args.species)
    field = _field_from(args.precision)
    coupling = Coupling.real(args.lam)
    spec = solve_spectrum(
        species, coupling, args.levels, args.tol, field, args.truncation
    )
    rows = [
        (e.species.value, e.level, _render_real(e.value, field), r)
        for e, r in zip(spec.entries, spec.residuals)
    ]
    meta = {
        "species": species.value,
        "lambda": args.lam,
        "levels": args.levels,
        "tolerance": args.tol,
        "truncation": spec.truncation_used,
        "precision": args.precision or "double",
    }
    _emit(args, ("species", "level", "energy", "residual"), rows, meta, "spectrum")


def _cmd_series(args):
    species = Species.parse(args.species)
    series = rs_series(species, args.level, args.order)
    rows = [
        (2 * j, f"{c.numerator}/{c.denominator}" if c.denominator != 1 else str(c.numerator))
        for j, c in enumerate(series.coeffs)
    ]
    meta = {
        "species": species.value,
        "level": args.level,
        "order": args.order,
    }
    if args.eval_at is not None:
        val = evaluate_series(series, lam=args.eval_at)
        meta["value_at_lambda"] = repr(val.value)
        meta["lambda"] = args.eval_at
        meta["last_term"] = repr(val.last_term)
    _emit(args, ("order", "coefficient"), rows, meta, "series")


def _cmd_splitting(args):
    lams = [s for s in str(args.lam).split(",") if s]
    field = _field_from(args.precision)
    rows = []
    deltas = []
    for lam_text in lams:
        delta = tunneling_splitting(args.n, lam_text, args.tol, field)
        deltas.append(float(delta))
        rows.append((args.n, lam_text, _render_real(delta, field)))
    meta = {
        "n": args.n,
        "tolerance": args.tol,
        "precision": args.precision or "double",
    }
    if args.fit:
        if len(lams) < 2:
            raise ValueError("--fit needs at least two lambda values")
        xs = [math.log(float(t)) for t in lams]
        ys = [math.log(d) for d in deltas]
        n = len(xs)
        xbar, ybar = sum(xs) / n, sum(ys) / n
        slope = sum((x - xbar) * (y - ybar) for x, y in zip(xs, ys)) / sum(
            (x - xbar) ** 2 for x in xs
        )
        meta["loglog_slope"] = repr(slope)
    _emit(args, ("n", "lambda", "delta"), rows, meta, "splitting")


def _parse_pair(text):
    parts = text.split(",")
    if len(parts) != 2:
        raise ValueError(f"pair must be 'i,j', got {text!r}")
    i, j = int(parts[0]), int(parts[1])
    if not 0 <= i < j:
        raise ValueError(f"pair must satisfy 0 <= i < j, got {text!r}")
    return (i, j)


def _parse_range(text):
    parts = text.split(":")
    if len(parts) != 2:
        raise ValueError(f"range must be 'lo:hi', got {text!r}")
    return float(parts[0]), float(parts[1])


def _cmd_ep(args):
    pair = _parse_pair(args.pair)
    g_range = _parse_range(args.scan)
    digits = args.digits
    species_text = args.species.strip().lower()
    meta = {
        "pair": args.pair,
        "digits": digits,
        "scan": args.scan,
        "step": args.step,
    }
    if species_text in ("a", "rawa"):
        try:
            ep = find_a_exceptional_point(pair, g_range, args.step, digits)
        except ConvergenceError:
            meta["result"] = "no exceptional point in range"
            _emit(args, ("species", "g_e", "eps_e"), [], meta, "ep")
            return
    else:
        species = Species.parse(args.species)
        seeds = [s for s in ep_scan(species, g_range, args.step, max(pair[1] + 1, 2))
                 if s.pair == pair]
        if not seeds:
            meta["result"] = "no exceptional point in range"
            _emit(args, ("species", "g_e", "eps_e"), [], meta, "ep")
            return
        ep = find_exceptional_point(species, pair, (seeds[0].g, seeds[0].energy), digits)
    ep_field = NumericField(max(30, digits + 10))
    rows = [
        (
            ep.species.value,
            ep_field.format(ep.g, digits),
            ep_field.format(ep.energy, digits),
            ep.residual_d,
            ep.residual_dd,
            ep.precision_digits,
            ep.truncation,
        )
    ]
    columns = (
        "species", "g_e", "eps_e", "residual_D", "residual_dD",
        "precision_digits", "truncation",
    )
    _emit(args, columns, rows, meta, "ep")


def _cmd_figure(args):
    options = {}
    if args.id == 1:
        if args.lam is not None:
            options["lam"] = args.lam
        if args.samples:
            options["samples"] = args.samples
    elif args.id == 2:
        if args.lam_max is not None:
            options["lam_max"] = args.lam_max
        if args.samples:
            options["samples"] = args.samples
    elif args.id == 3 and args.samples:
        options["samples"] = args.samples
    elif args.id == 4 and args.g_max is not None:
        options["g_max"] = args.g_max
    fig = figure_data(args.id, **options)
    if args.plot:
        write_svg(fig, args.plot)
    meta = dict(fig.meta)
    meta["figure"] = args.id
    _emit(args, fig.columns, fig.rows, meta, "figure")


def _add_common(p):
    p.add_argument("--format", choices=("csv", "json"), default=None)
    p.add_argument("--output", default=None, help="output path (default stdout)")
    p.add_argument("--config", default=None, help="JSON file with flag defaults")
    p.add_argument(
        "--precision",
        type=int,
        default=None,
        help="working precision in decimal digits (default: machine doubles)",
    )


def build_parser() -> _Parser:
    parser = _Parser(prog="c3rotor", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="eigenvalues of a real-barrier block")
    p.add_argument("--species", required=True)
    p.add_argument("--lambda", dest="lam", required=True,
                   help="barrier strength (decimal string)")
    p.add_argument("--levels", type=int, default=None)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--truncation", type=int, default=None)
    _add_common(p)
    p.set_defaults(func=_cmd_spectrum)

    p = sub.add_parser("series", help="exact rational perturbation series")
    p.add_argument("--species", required=True)
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--order", type=int, default=None)
    p.add_argument("--eval-at", type=float, default=None,
                   help="also evaluate the series at this barrier strength")
    _add_common(p)
    p.set_defaults(func=_cmd_series)

    p = sub.add_parser("splitting", help="quasi-degenerate A-pair splittings")
    p.add_argument("--n", type=int, required=True, help="pair index, from 1")
    p.add_argument("--lambda", dest="lam", required=True,
                   help="barrier strength, or comma list")
    p.add_argument("--fit", action="store_true",
                   help="report the log-log slope across the lambda list")
    p.add_argument("--tol", type=float, default=None)
    _add_common(p)
    p.set_defaults(func=_cmd_splitting)

    p = sub.add_parser("ep", help="exceptional points of the imaginary barrier")
    p.add_argument("--species", required=True,
                   help="EA, EB, A+, A-, or A (search both parity blocks)")
    p.add_argument("--pair", default="0,1")
    p.add_argument("--digits", type=int, default=None)
    p.add_argument("--scan", default=None, help="g range lo:hi for seeding")
    p.add_argument("--step", type=float, default=None)
    _add_common(p)
    p.set_defaults(func=_cmd_ep)

    p = sub.add_parser("figure", help="emit a figure dataset (optionally an SVG)")
    p.add_argument("--id", type=int, required=True, choices=(1, 2, 3, 4))
    p.add_argument("--lambda", dest="lam", default=None)
    p.add_argument("--lambda-max", dest="lam_max", type=float, default=None)
    p.add_argument("--g-max", dest="g_max", type=float, default=None)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--plot", default=None, help="also write an SVG plot here")
    _add_common(p)
    p.set_defaults(func=_cmd_figure)
    return parser


_CONFIG_KEYS = (
    "format", "output", "precision", "tol", "levels", "order", "digits",
    "scan", "step", "samples", "truncation",
)
_BUILTIN_DEFAULTS = {
    "format": "csv",
    "tol": 1e-12,
    "levels": 5,
    "order": 6,
    "digits": 20,
    "scan": "0:10",
    "step": 0.05,
}


def _apply_config(args):
    """Resolve each flag: explicit value, else config file, else environment,
    else the built-in default."""
    config = {}
    if args.config:
        with open(args.config) as fp:
            config = json.load(fp)
        bad = set(config) - set(_CONFIG_KEYS)
        if bad:
            raise ValueError(f"unknown config keys: {sorted(bad)}")
    for key in _CONFIG_KEYS:
        if getattr(args, key, None) is None and key in config:
            setattr(args, key, config[key])
    if getattr(args, "precision", None) is None:
        env = os.environ.get("C3ROTOR_PRECISION")
        if env:
            args.precision = int(env)
    for key, value in _BUILTIN_DEFAULTS.items():
        if hasattr(args, key) and getattr(args, key) is None:
            setattr(args, key, value)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _apply_config(args)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return USAGE_ERROR
    try:
        args.func(args)
    except (ValueError, ZeroDivisionError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return USAGE_ERROR
    except ConvergenceError as exc:
        sys.stderr.write(f"numerical failure: {exc}\n")
        return NUMERICAL_ERROR
    return 0


if __name__ == "__main__":
    sys.exit(main())

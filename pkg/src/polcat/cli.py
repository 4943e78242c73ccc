"""Command line entry point: tables as CSV on stdout or to --out.

Exit status is 0 on success, 2 for bad arguments and 3 for numerical
failures (degenerate states, cutoff too small, unstable steps, ...).
"""

import argparse
import sys
from dataclasses import fields, replace

from . import _kernels, sweep
from .errors import NumericFailure

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERIC = 3

_SUBCOMMANDS = ("figure", "variance", "criterion", "entropy", "fidelity", "adiabatic", "sweep")

# flag dest -> SweepConfig field
_SWEEP_FIELDS = {f.name for f in fields(sweep.SweepConfig)}
_ADIA_FIELDS = {f.name for f in fields(sweep.AdiabaticConfig)}


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _add_state_args(p):
    p.add_argument("--basis", choices=("circular", "linear"))
    p.add_argument("--alpha-re", type=float)
    p.add_argument("--alpha-im", type=float)
    p.add_argument("--beta-re", type=float, help="defaults to alpha")
    p.add_argument("--beta-im", type=float, help="defaults to alpha")
    p.add_argument("--ratio", type=float, help="lambda1/|lambda2|, in [0, 1)")
    p.add_argument("--sign", type=int, choices=(1, -1), help="sign of lambda2 (default -1)")
    p.add_argument("--tau-max", type=float)
    p.add_argument("--steps", type=int, help="number of grid intervals")
    p.add_argument("--prep", help="macro+, macro- or product:N")
    p.add_argument("--natoms", type=int)
    p.add_argument("--outcome", type=int, choices=(1, -1))
    p.add_argument("--weighted", action="store_true", default=None)
    p.add_argument("--cutoff", type=int, help="Fock cutoff for the cross-check columns (sweep only)")
    p.add_argument("--workers", type=int)


def _add_common(p):
    p.add_argument("--out", help="output file (default stdout)")
    p.add_argument("--config", help="key=value file; command line flags take precedence")


def build_parser():
    parser = _Parser(prog="polcat", description="Cat-state and entanglement tables for polarized coherent fields.")
    parser.add_argument("--version", action="version", version="polcat 0.1.0")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("figure", help="tabulate one figure")
    p.add_argument("fig_id", choices=sweep.FIGURES)
    _add_state_args(p)
    p.add_argument("--parity", choices=("even", "odd"))
    p.add_argument("--theta", type=float)
    _add_common(p)

    for name, text in (("variance", "quadrature variances"), ("criterion", "inseparability sum"),
                       ("entropy", "linear entropy of mode 0"), ("sweep", "all observables")):
        p = sub.add_parser(name, help=f"{text} versus tau")
        _add_state_args(p)
        _add_common(p)

    p = sub.add_parser("fidelity", help="cat / squeezed-vacuum fidelity versus |xi|")
    p.add_argument("--alpha-re", type=float)
    p.add_argument("--alpha-im", type=float)
    p.add_argument("--parity", choices=("even", "odd"))
    p.add_argument("--theta", type=float)
    p.add_argument("--xi-max", type=float)
    p.add_argument("--steps", type=int)
    _add_common(p)

    p = sub.add_parser("adiabatic", help="mean-field check of the elimination")
    p.add_argument("--g", type=float)
    p.add_argument("--gamma", type=float)
    p.add_argument("--gamma-par", type=float, help="defaults to gamma/2")
    p.add_argument("--delta", type=float)
    p.add_argument("--a-plus-re", type=float)
    p.add_argument("--a-plus-im", type=float)
    p.add_argument("--a-minus-re", type=float)
    p.add_argument("--a-minus-im", type=float)
    p.add_argument("--t-end", type=float, help="physical end time (default 50/gamma)")
    p.add_argument("--dt", type=float, help="physical step (default 0.05/max(gamma, |delta|))")
    p.add_argument("--record-every", type=int)
    p.add_argument("--no-symmetrize", dest="symmetrized", action="store_false", default=None)
    _add_common(p)
    return parser


def read_config(path):
    """Parse a key=value file; '#' starts a comment. Keys use - or _."""
    out = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise ValueError(f"{path}:{lineno}: expected key=value")
            out[key.strip().replace("-", "_")] = value.strip()
    return out


def _coerce(value, default):
    if isinstance(default, bool):
        low = str(value).lower()
        if low not in ("1", "0", "true", "false", "yes", "no"):
            raise ValueError(f"not a boolean: {value!r}")
        return low in ("1", "true", "yes")
    if isinstance(default, int):
        return int(value)
    if isinstance(default, float) or default is None:
        try:
            return float(value)
        except ValueError:
            return value
    return value


def _settings(args, allowed):
    """Merge --config values under explicit flags; returns (values, keys set)."""
    values = {}
    if args.config:
        for key, raw in read_config(args.config).items():
            if key not in allowed:
                raise ValueError(f"unknown config key {key!r}")
            values[key] = raw
    for key, val in vars(args).items():
        if key in allowed and val is not None:
            values[key] = val
    return values


def _sweep_config(args):
    values = _settings(args, _SWEEP_FIELDS - {"subcommand"})
    defaults = sweep.SweepConfig()
    typed = {}
    for key, raw in values.items():
        default = getattr(defaults, key)
        if key in ("beta_re", "beta_im"):
            typed[key] = float(raw)
        elif key == "natoms":
            typed[key] = int(raw)
        else:
            typed[key] = _coerce(raw, default)
    if args.command == "fidelity" and "steps" not in typed:
        typed["steps"] = 50
    return replace(defaults, subcommand=args.command, **typed), set(typed)


def _adiabatic_config(args):
    keys = (_ADIA_FIELDS - {"a_plus", "a_minus"}) | {"a_plus_re", "a_plus_im", "a_minus_re", "a_minus_im"}
    values = _settings(args, keys)
    defaults = sweep.AdiabaticConfig()
    typed = {}
    amps = {"a_plus": complex(defaults.a_plus), "a_minus": complex(defaults.a_minus)}
    for key, raw in values.items():
        if key.startswith(("a_plus_", "a_minus_")):
            name, part = key.rsplit("_", 1)
            cur = amps[name]
            amps[name] = complex(float(raw), cur.imag) if part == "re" else complex(cur.real, float(raw))
        elif key == "record_every":
            typed[key] = int(raw)
        elif key == "symmetrized":
            typed[key] = _coerce(raw, True)
        else:
            typed[key] = float(raw)
    return replace(defaults, **amps, **typed)


def _emit(args, cols, rows, meta, footer=None):
    meta = dict(meta)
    meta["command"] = args.command if args.command != "figure" else f"figure {args.fig_id}"
    meta["backend"] = _kernels.BACKEND
    if args.out:
        with open(args.out, "w", newline="") as fh:
            sweep.write_csv(fh, cols, rows, meta, footer)
    else:
        sweep.write_csv(sys.stdout, cols, rows, meta, footer)


def run(args):
    if args.command == "adiabatic":
        acfg = _adiabatic_config(args)
        cols, rows, report = sweep.adiabatic_table(acfg)
        footer = {f"report.{k}": v for k, v in report.as_dict().items()} if report else None
        _emit(args, cols, rows, sweep.config_meta(acfg), footer)
        return EXIT_OK

    cfg, overrides = _sweep_config(args)
    if cfg.cutoff and args.command != "sweep":
        raise ValueError("--cutoff is only used by the sweep subcommand")
    if args.command == "figure":
        cols, rows = sweep.figure_table(args.fig_id, cfg, overrides)
    elif args.command == "variance":
        cols, rows = sweep.variance_table(cfg)
    elif args.command == "criterion":
        cols, rows = sweep.criterion_table(cfg)
    elif args.command == "entropy":
        cols, rows = sweep.entropy_table(cfg)
    elif args.command == "fidelity":
        cols, rows = sweep.fidelity_table(cfg)
    else:
        cols, rows = sweep.sweep_table(cfg)
    meta = sweep.config_meta(cfg)
    meta.pop("workers")
    _emit(args, cols, rows, meta)
    return EXIT_OK


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return run(args)
    except _UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"polcat: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericFailure as exc:
        print(f"polcat: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, OSError) as exc:
        print(f"polcat: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

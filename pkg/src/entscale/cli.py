"""Command line front end.

`entscale <experiment> [--config PATH] [--preset NAME] [--out PATH]
[--seed INT] [--n INT] [--t-grid A:B:STEPS] [--m-list A,B,...]`

Exit codes: 0 success, 1 configuration error (bad flags, bad config file,
out-of-range parameters), 2 numerical failure during the run.
"""
import argparse
import os
import sys

_EXPERIMENTS = ("quench", "w-hierarchy", "lightcone", "kcheck", "quasilocal",
                "fermion-scaling", "ring-check", "property-suite")


def _set_threads():
    # Must run before numpy is first imported anywhere in this process.
    requested = os.environ.get("ENTSCALE_THREADS")
    if not requested:
        return
    if not requested.isdigit() or int(requested) < 1:
        raise _UsageError(f"ENTSCALE_THREADS must be a positive integer, got {requested!r}")
    for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS",
                "MKL_NUM_THREADS", "NUMEXPR_NUM_THREADS"):
        os.environ.setdefault(var, requested)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors; remap to the config-error code.
    def error(self, message):
        raise _UsageError(message)


def _parse_t_grid(text):
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise _UsageError(f"t grid must be A:B:STEPS or a single value, got {text!r}")
        try:
            a, b, steps = float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError:
            raise _UsageError(f"bad t grid {text!r}") from None
        if steps < 1:
            raise _UsageError("t grid needs at least one step")
        if steps == 1:
            return (a,)
        return tuple(a + (b - a) * i / (steps - 1) for i in range(steps))
    try:
        return (float(text),)
    except ValueError:
        raise _UsageError(f"bad t value {text!r}") from None


def _parse_m_list(text):
    try:
        values = tuple(int(tok) for tok in text.split(",") if tok.strip())
    except ValueError:
        raise _UsageError(f"bad m list {text!r}") from None
    if not values:
        raise _UsageError("m list must be nonempty")
    return values


def _build_parser():
    parser = _Parser(prog="entscale",
                     description="entanglement scaling experiments on spin chains "
                                 "and quasi-free fermion rings")
    sub = parser.add_subparsers(dest="experiment", metavar="EXPERIMENT")
    for name in _EXPERIMENTS:
        p = sub.add_parser(name, help=f"run the {name} experiment")
        p.add_argument("--config", help="model or symbol definition file")
        p.add_argument("--preset", help="named built-in model or symbol")
        p.add_argument("--out", help="output CSV path (default <experiment>.csv)")
        p.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
        p.add_argument("--n", type=int, help="system size override")
        p.add_argument("--t-grid", dest="t_grid", help="time grid A:B:STEPS or a single value")
        p.add_argument("--m-list", dest="m_list", help="comma-separated cut sizes")
    return parser


def main(argv=None):
    try:
        _set_threads()
        parser = _build_parser()
        args = parser.parse_args(argv)
        if args.experiment is None:
            raise _UsageError("an experiment name is required; "
                              f"choose from {', '.join(_EXPERIMENTS)}")
        t_grid = _parse_t_grid(args.t_grid) if args.t_grid else None
        m_list = _parse_m_list(args.m_list) if args.m_list else None
    except _UsageError as exc:
        print(f"entscale: error: {exc}", file=sys.stderr)
        return 1

    from . import reports
    from .errors import ConfigError, NumericalError
    config = reports.ExperimentConfig(
        experiment=args.experiment, preset=args.preset, config_path=args.config,
        n=args.n, t_grid=t_grid, m_list=m_list, seed=args.seed, out=args.out)
    try:
        envelope = reports.run(config)
    except ConfigError as exc:
        print(f"entscale: error: {exc}", file=sys.stderr)
        return 1
    except (NumericalError, FloatingPointError, ZeroDivisionError) as exc:
        print(f"entscale: numerical failure: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"entscale: numerical failure: {exc}", file=sys.stderr)
        return 2
    print(envelope.path)
    return 0


if __name__ == "__main__":
    sys.exit(main())

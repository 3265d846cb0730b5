"""Command line: run, sweep, list, describe, check."""

from __future__ import annotations

import argparse
import logging
import sys

from .. import __version__
from ..solver import SimulationDiverged
from .config import ConfigError, load_config
from .scenarios import SCENARIOS, describe, get_scenario, list_scenarios


def _load(target):
    """A config file path or the name of a built-in scenario."""
    if target in SCENARIOS:
        return get_scenario(target).config()
    return load_config(target)


def _print_checks(checks):
    from .checks import format_table
    if checks:
        print(format_table(checks))


def cmd_run(args) -> int:
    from .runner import run_scenario
    cfg = _load(args.config)
    if cfg.sweep:
        print("config has sweep axes; use `sweep`", file=sys.stderr)
        return 2
    res = run_scenario(cfg, args.out)
    print(f"{cfg.name}: wrote {res.directory} ({res.seconds:.2f} s)")
    _print_checks(res.checks)
    return 0 if res.passed else 1


def cmd_sweep(args) -> int:
    from .runner import run_sweep
    cfg = _load(args.config)
    results, summary = run_sweep(cfg, args.out, args.workers)
    print(f"{cfg.name}: {len(results)} runs, summary in {summary.directory / 'summary.csv'}")
    _print_checks(summary.checks)
    return 0 if summary.passed else 1


def cmd_list(args) -> int:
    for name in list_scenarios():
        print(f"{name:<28} {SCENARIOS[name].summary}")
    return 0


def cmd_describe(args) -> int:
    print(describe(args.name))
    return 0


def cmd_check(args) -> int:
    from .checks import run_checks
    checks = run_checks()
    _print_checks(checks)
    return 0 if all(c.passed for c in checks) else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bivelocity", description="Bivelocity and volume-diffusion hydrodynamics")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="run one scenario (config file or built-in name)")
    r.add_argument("config")
    r.add_argument("--out", help="output directory (default: output.directory)")
    r.set_defaults(fn=cmd_run)
    s = sub.add_parser("sweep", help="run every point of the config's sweep axes")
    s.add_argument("config")
    s.add_argument("--out")
    s.add_argument("--workers", type=int, help="worker processes (default: $BIVELOCITY_WORKERS or 1)")
    s.set_defaults(fn=cmd_sweep)
    sub.add_parser("list", help="list built-in scenarios").set_defaults(fn=cmd_list)
    d = sub.add_parser("describe", help="describe a built-in scenario")
    d.add_argument("name")
    d.set_defaults(fn=cmd_describe)
    sub.add_parser("check", help="run the mechanical and entropy property suite").set_defaults(fn=cmd_check)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(exc, file=sys.stderr)
        return 2
    except KeyError as exc:
        print(exc.args[0], file=sys.stderr)
        return 2
    except SimulationDiverged as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

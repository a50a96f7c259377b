"""Command-line driver.

    fslab <command> --config <file> [--out <dir>] [--seed <int>]
    fslab suite [--config <file>] [--out <dir>] [--only 1,3,9]

Exit status: 0 when every assertion passes, 1 when some assertion fails (the
report is still written), 2 for an invalid configuration (a JSON error object
on stdout and no output files).
"""

from __future__ import annotations

import argparse
import os
import sys

from .config import COMMANDS, ConfigError, load_config
from .errors import FslabError
from .experiments import prepare
from .io import dumps, write_outputs
from .suite import run_suite

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fslab", description="Difference-defined function space experiments.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        p = sub.add_parser(name, help=f"run a configured {name} experiment")
        p.add_argument("--config", required=True, help="JSON experiment config")
        p.add_argument("--out", default=None, help="output directory (default fslab-out/<command>)")
        p.add_argument("--seed", type=int, default=None, help="override the config seed")
    p = sub.add_parser("suite", help="run the full acceptance grid")
    p.add_argument("--config", default=None,
                   help='JSON object {"tolerances": {command: {...}}} overriding defaults')
    p.add_argument("--out", default=None, help="output directory (default fslab-out/suite)")
    p.add_argument("--only", default=None, help="comma-separated criterion ids")
    return parser


def _error(exc: Exception) -> int:
    print(dumps({"error": type(exc).__name__, "message": str(exc)}))
    return EXIT_CONFIG


def _parse_only(text):
    if text is None:
        return None
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ConfigError(f"--only expects comma-separated integers, got {text!r}") from None


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        out = args.out or os.path.join("fslab-out", args.command)
        if args.command == "suite":
            cfg = load_config(args.config) if args.config else {}
            unknown = set(cfg) - {"tolerances"}
            if unknown:
                raise ConfigError(f"unknown suite config keys {sorted(unknown)}")
            only = _parse_only(args.only)
            log = lambda msg: print(msg, file=sys.stderr)  # noqa: E731
            results = run_suite(out, cfg.get("tolerances", {}), only, log)
            ok = all(r.passed for r in results)
            print(f"suite {'PASS' if ok else 'FAIL'}: "
                  f"{sum(r.passed for r in results)}/{len(results)} criteria; reports in {out}")
            return EXIT_OK if ok else EXIT_FAIL
        cfg = load_config(args.config)
        runner = prepare(args.command, cfg, args.seed,
                         base_dir=os.path.dirname(os.path.abspath(args.config)))
    except FslabError as exc:
        return _error(exc)
    try:
        outcome = runner()
    except FslabError as exc:
        return _error(exc)
    write_outputs(out, outcome)
    failed = [a["name"] for a in outcome.report["assertions"] if not a["passed"]]
    print(f"{args.command} {'PASS' if not failed else 'FAIL'}; report in {os.path.join(out, 'report.json')}")
    for name in failed:
        print(f"  failed: {name}")
    return EXIT_OK if not failed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())

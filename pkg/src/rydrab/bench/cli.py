"""Command-line entry point: ``rydrab {run,list-scenarios,emit-defaults,check,manifest}``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from ..dynamics import IntegratorError
from .checks import run_checks
from .runners import run_scenario
from .scenarios import BUILTIN, ConfigError, builtin, emit_config, load_scenario

log = logging.getLogger("rydrab")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3

#: How each output column maps onto the figure panels.
MANIFEST = {
    "fig2a": {"x": "t", "curves": ["P11_full", "Prr_full", "P11_eff", "Prr_eff"]},
    "fig2b": {"x": "t", "curves": ["F_avg", "F_psi_prime"]},
    "fig2c": {"x": "t", "curves": ["phase_full", "phase_effective_prediction"]},
    "fig2d": {"x": "t", "curves": ["F_avg", "F_psi_prime"]},
    "fig3a": {"x": "d", "curves": ["F_final"]},
    "fig3b": {"x": "d", "curves": ["F_final"]},
    "fig4": {"x": "tau", "curves": ["F_final_RAB", "F_final_Broken"]},
}


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rydrab", description=__doc__)
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run a scenario file and write its CSV")
    run.add_argument("scenario", help="scenario file, or the name of a built-in scenario")
    run.add_argument("--out", help="override the scenario's output_path")
    run.add_argument("--threads", type=int, default=None, help="sweep worker threads")
    sub.add_parser("list-scenarios", help="list built-in scenarios")
    emit = sub.add_parser("emit-defaults", help="print a built-in scenario file")
    emit.add_argument("name", nargs="?", default="fig2a", choices=sorted(BUILTIN))
    sub.add_parser("check", help="run the oracle and invariant checks")
    sub.add_parser("manifest", help="print the figure/column mapping as JSON")
    return ap


def _resolve(arg: str):
    if Path(arg).exists() or arg not in BUILTIN:
        return load_scenario(arg)
    return builtin(arg)


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    if args.command == "list-scenarios":
        for name, (desc, s) in BUILTIN.items():
            print(f"{name:7s} {s.experiment.value:15s} {desc}")
        return EXIT_OK
    if args.command == "emit-defaults":
        sys.stdout.write(emit_config(builtin(args.name)))
        return EXIT_OK
    if args.command == "manifest":
        print(json.dumps(MANIFEST, indent=2))
        return EXIT_OK
    if args.command == "check":
        try:
            return EXIT_OK if run_checks() else EXIT_NUMERIC
        except IntegratorError as exc:
            print(f"integrator failure: {exc}", file=sys.stderr)
            return EXIT_NUMERIC

    try:
        scenario = _resolve(args.scenario)
        if args.threads is not None and args.threads < 1:
            raise ConfigError("--threads must be at least 1")
        log.info("running %s (%s)", scenario.name, scenario.experiment.value)
        table = run_scenario(scenario, threads=args.threads)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except IntegratorError as exc:
        print(f"integrator failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    out = table.write_csv(args.out or scenario.output_path)
    print(f"wrote {len(table)} rows to {out}")
    for key, value in table.summary.items():
        print(f"{key} = {value:.6g}" if isinstance(value, float) else f"{key} = {value}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

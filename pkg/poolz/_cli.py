import argparse
import logging
import sys
from pathlib import Path

from poolz._config import ExperimentSpec, parse_config_text, resolve_spec
from poolz._experiments import (
    cmd_pii,
    cmd_run,
    cmd_snapshot,
    cmd_sweep,
    cmd_thresholds,
    get_recipe,
    list_recipes,
)
from poolz.errors import PoolzError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2

# flag -> config key
_OVERRIDE_FLAGS = {
    "net": "net",
    "n": "n",
    "m": "m",
    "m0": "m0",
    "side": "side",
    "r": "r",
    "alpha": "alpha",
    "tau": "tau",
    "kappa": "kappa",
    "generations": "generations",
    "transient": "transient",
    "density": "density",
    "realizations": "realizations",
    "seed": "seed",
    "update": "update",
    "workers": "workers",
    "out": "out",
    "pii_r": "pii_r",
    "bins": "bins",
    "gnuplot": "gnuplot",
}


class UsageError(PoolzError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _add_overrides(parser: argparse.ArgumentParser):
    parser.add_argument("--config", help="key = value file; flags override it")
    parser.add_argument("--recipe", choices=list_recipes(), help="reference parameter set")
    parser.add_argument("--net", choices=["lattice", "ba"])
    parser.add_argument("--n", help="BA network size")
    parser.add_argument("--m", help="BA edges per new vertex")
    parser.add_argument("--m0", help="BA seed graph size")
    parser.add_argument("--side", help="lattice side length")
    parser.add_argument("--r", help="interest rates: list 'a,b' or range 'lo:hi:step'")
    parser.add_argument("--alpha", help="investment strategies: list or range")
    parser.add_argument("--tau", help="cost of state change")
    parser.add_argument("--kappa", help="imitation noise")
    parser.add_argument("--generations")
    parser.add_argument("--transient")
    parser.add_argument("--density", help="initial cooperator density")
    parser.add_argument("--realizations")
    parser.add_argument("--seed", help="master seed")
    parser.add_argument("--update", choices=["sync", "async", "synchronous", "asynchronous"])
    parser.add_argument("--workers")
    parser.add_argument("--out", help="output directory")
    parser.add_argument("--pii-r", dest="pii_r", help="interest rate of the P_ii tables")
    parser.add_argument("--bins", help="P_ii histogram bins")
    parser.add_argument(
        "--gnuplot", action="store_const", const="true", help="emit a .gp script per table"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="poolz", description="Public goods game with pool-size investment")
    parser.add_argument("--log-level", default="WARNING")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    commands = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    for name, handler, summary in (
        ("run", cmd_run, "single run: trajectory and final state"),
        ("sweep", cmd_sweep, "equilibrium cooperation over alpha x r"),
        ("pii", cmd_pii, "static self-return analysis"),
        ("thresholds", cmd_thresholds, "locate r_c and r_d"),
    ):
        command = commands.add_parser(name, help=summary)
        _add_overrides(command)
        command.set_defaults(handler=handler)

    snapshot = commands.add_parser("snapshot", help="lattice state as a PGM image")
    snapshot.add_argument("state_file", help="final_state.csv written by 'run'")
    _add_overrides(snapshot)
    snapshot.set_defaults(handler=lambda spec, args: cmd_snapshot(args.state_file, spec))
    return parser


def resolve_args(args: argparse.Namespace) -> ExperimentSpec:
    layers = []
    if args.recipe:
        layers.append(get_recipe(args.recipe))
    if args.config:
        layers.append(parse_config_text(Path(args.config).read_text()))
    layers.append(
        {
            key: str(getattr(args, flag))
            for flag, key in _OVERRIDE_FLAGS.items()
            if getattr(args, flag) is not None
        }
    )
    return resolve_spec(*layers)


def _configure_logging(args: argparse.Namespace):
    level = args.log_level.upper()
    if args.verbose == 1:
        level = "INFO"
    elif args.verbose > 1:
        level = "DEBUG"
    logging.basicConfig(
        level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s"
    )


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        _configure_logging(args)
        spec = resolve_args(args)
        if args.command == "snapshot":
            args.handler(spec, args)
        else:
            args.handler(spec)
    except PoolzError as e:
        print(e, file=sys.stderr)
        return EXIT_USAGE
    except ValueError as e:
        print(f"poolz: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"poolz: {e}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK

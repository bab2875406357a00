import argparse
import logging
import os
import sys
import traceback

import app_constants
from app.core.errors import InputError
from app.core.runner import EXIT_INPUT_ERROR, RunConfig, run

sys.path.append(os.path.dirname(os.path.abspath(__file__)))

FORMAT_BY_SUFFIX = {".json": "json", ".csv": "csv", ".txt": "text"}


def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--action", help="plugin action; 'list' prints the action menu")
    fmt = parser.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="fmt", action="store_const", const="json")
    fmt.add_argument("--csv", dest="fmt", action="store_const", const="csv")
    fmt.add_argument("--text", dest="fmt", action="store_const", const="text")
    parser.add_argument("--out", dest="output_path")
    parser.add_argument("--seed", type=int, default=app_constants.DEFAULT_SEED)
    parser.add_argument("--tolerance", type=float, default=app_constants.DEFAULT_TOLERANCE)
    parser.add_argument("-v", "--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=app_constants.APP_NAME,
        description="Double torus quotient invariants Psi_sigma and their checks.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {app_constants.APP_VERSION}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("psi", help=app_constants.APP_FEATURES["psi"]["description"])
    p.add_argument("inputs", nargs="+", metavar="FILE", help="matrix.json [fixture.json]")
    p.add_argument("--mode", choices=["pgl", "sl"])
    _common(p)

    p = sub.add_parser("magic-decompose", help=app_constants.APP_FEATURES["magic_decompose"]["description"])
    p.add_argument("inputs", nargs=1, metavar="SQUARE")
    _common(p)

    p = sub.add_parser("relations", help=app_constants.APP_FEATURES["relations"]["description"])
    p.add_argument("--verify", action="store_true", help="randomized verification instead of the basis")
    p.add_argument("n", type=int)
    p.add_argument("trials", type=int, nargs="?")
    p.add_argument("--matrix", dest="inputs", action="append", default=[], metavar="FILE",
                   help="verify on this matrix instead of random ones")
    _common(p)

    p = sub.add_parser("galois-verify", help=app_constants.APP_FEATURES["galois_verify"]["description"])
    p.add_argument("inputs", nargs="+", metavar="FILE", help="fixture.json [matrix.json]")
    p.add_argument("--sigma0", help="fixed-point-free permutation in cycle notation")
    p.add_argument("--allow-intransitive", action="store_true")
    _common(p)

    p = sub.add_parser("discriminant", help=app_constants.APP_FEATURES["discriminant"]["description"])
    p.add_argument("inputs", nargs=1, metavar="FIXTURE")
    p.add_argument("--trials", type=int)
    _common(p)

    p = sub.add_parser("certify", help=app_constants.APP_FEATURES["certify"]["description"])
    p.add_argument("inputs", nargs=2, metavar="FILE", help="fixture.json lambda.json")
    p.add_argument("--ramified", action="store_true")
    _common(p)

    p = sub.add_parser("entropy-bounds", help=app_constants.APP_FEATURES["entropy_bounds"]["description"])
    p.add_argument("n", type=int, nargs="?")
    p.add_argument("weights", type=float, nargs="*")
    p.add_argument("--powers", type=int)
    p.add_argument("--r-max", type=int)
    _common(p)

    p = sub.add_parser("threshold", help=app_constants.APP_FEATURES["threshold"]["description"])
    p.add_argument("inputs", nargs="*", metavar="MATRIX", help="matrix.json for the membership action")
    p.add_argument("--D", dest="D", type=int)
    p.add_argument("--Dram", dest="Dram", type=int)
    p.add_argument("--kappa", type=float)
    p.add_argument("--weights", type=float, nargs="+")
    p.add_argument("--radius", type=float)
    p.add_argument("--tau", type=int)
    p.add_argument("--mode", choices=["pgl", "gl"])
    _common(p)

    p = sub.add_parser("decay", help=app_constants.APP_FEATURES["decay"]["description"])
    p.add_argument("--n", type=int)
    p.add_argument("--weights", type=float, nargs="+")
    p.add_argument("--radius", type=float)
    p.add_argument("--tau-max", type=int)
    p.add_argument("--samples", type=int)
    _common(p)

    p = sub.add_parser("pgl2-experiment", help=app_constants.APP_FEATURES["pgl2_experiment"]["description"])
    p.add_argument("--d-max", type=int, default=200)
    p.add_argument("--d", type=int)
    p.add_argument("--radius", type=float, default=0.1)
    p.add_argument("--kappa", type=float, default=0.0)
    p.add_argument("--decay-constant", type=float, dest="C")
    p.add_argument("--maximal", action="store_true")
    p.add_argument("--identity-trials", type=int, default=20)
    _common(p)

    p = sub.add_parser("acceptance", help=app_constants.APP_FEATURES["acceptance"]["description"])
    p.add_argument("--filter")
    p.add_argument("--scale", type=float)
    _common(p)

    return parser


_RUN_KEYS = {"command", "inputs", "action", "fmt", "output_path", "seed", "tolerance", "verbose", "verify"}


def to_config(args: argparse.Namespace) -> RunConfig:
    values = vars(args)
    params = {k: v for k, v in values.items() if k not in _RUN_KEYS and v is not None}
    action = args.action
    if values.get("verify") and action is None:
        action = "verify"
    fmt = args.fmt
    if fmt is None and args.output_path:
        fmt = FORMAT_BY_SUFFIX.get(os.path.splitext(args.output_path)[1].lower())
    return RunConfig(
        command=args.command,
        inputs=list(values.get("inputs") or []),
        params=params,
        action=action,
        seed=args.seed,
        tolerance=args.tolerance,
        output_path=args.output_path,
        fmt=fmt,
    )


def start_app(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="[%(name)s] %(message)s",
    )
    try:
        config = to_config(args)
    except InputError as e:
        logging.getLogger(app_constants.APP_NAME).error("input error: %s", e)
        return EXIT_INPUT_ERROR
    return run(config)


if __name__ == '__main__':
    try:
        sys.exit(start_app())
    except KeyboardInterrupt:
        sys.exit(130)
    except Exception:
        traceback.print_exc()
        sys.exit(EXIT_INPUT_ERROR)

"""Command-line entry point: ``wsteen <command> [flags]`` or ``python -m wsteen``."""

import argparse
import logging
import sys
from typing import List, Optional

from wsteen.models.errors import WsteenError
from wsteen.models.service import EngineConfig
from wsteen.routers import act, basis, pair, report, reset_service, verify

ROUTERS = [basis.router, act.router, pair.router, verify.router, report.router]


def init_logging(level: str = "WARNING") -> None:
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(asctime)s %(levelname)s %(name)s: %(message)s"))
    root = logging.getLogger("wsteen")
    root.handlers[:] = [handler]
    root.setLevel(getattr(logging, level.upper(), logging.WARNING))
    root.propagate = False


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", default="qcl", help="qcl, fq1, fq3 or custom:<file>")
    common.add_argument("--json", action="store_true", help="Emit JSON instead of a table")
    common.add_argument("--cache", help="Cache directory (default $WSTEEN_CACHE or .wsteen-cache)")
    common.add_argument("--gen-cap", type=int, help="Largest generator index")
    common.add_argument("--log-level", help="DEBUG, INFO, WARNING or ERROR")
    common.add_argument("--debug", action="store_true", help="Check lift independence on every call")

    parser = argparse.ArgumentParser(prog="wsteen", description="Motivic dual Steenrod and Witt Steenrod verification engine")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for router in ROUTERS:
        router.install(subparsers, parents=[common])
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    config = EngineConfig.from_env(
        cache_dir=args.cache,
        gen_cap=args.gen_cap,
        log_level=args.log_level.upper() if args.log_level else None,
        lift_check="always" if args.debug else None,
    )
    init_logging(config.log_level)
    service = reset_service(config)

    try:
        result = args.router(service, args)
    except WsteenError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code

    print(result.as_json() if args.json else result.as_text(), end="" if not args.json else "\n")
    return 0 if result.passed else 1


if __name__ == "__main__":
    sys.exit(main())

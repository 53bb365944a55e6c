"""Command line entry point: scenario runner and verification suites.

Exit codes: 0 everything succeeded, 1 a verification suite failed, 2 the
input could not be parsed or validated.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from .errors import LatticeError
from .scenario import dumps, execute_scenario
from .verify import run_suites


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lplattice",
        description="Computable conditional expectations, slices, types, and "
        "independence over finite weighted measure algebras.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="execute a scenario document")
    run_p.add_argument("path", help="path to a scenario JSON file")
    run_p.add_argument("--tol", type=float, default=1e-9)

    ver_p = sub.add_parser("verify", help="run the verification suites")
    ver_p.add_argument("--seed", type=int, default=0)
    ver_p.add_argument("--size", type=int, default=6)
    ver_p.add_argument("--trials", type=int, default=60)
    ver_p.add_argument("--tol", type=float, default=1e-9)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command == "run":
        try:
            report = execute_scenario(args.path, args.tol)
        except LatticeError as exc:
            print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
            return 2
        sys.stdout.write(dumps(report))
        return 0
    if args.command == "verify":
        results = run_suites(args.seed, args.size, args.trials, args.tol)
        failed = False
        for res in results:
            mark = "PASS" if res.passed else "FAIL"
            print(f"{mark} {res.name}: {res.detail}")
            if not res.passed:
                failed = True
                if res.replay is not None:
                    print("replay scenario:")
                    sys.stdout.write(dumps(res.replay))
        return 1 if failed else 0
    return 2


if __name__ == "__main__":
    sys.exit(main())

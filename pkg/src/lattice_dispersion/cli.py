"""Command line entry point.

Exit codes: 0 success, 1 budget or validation error (including malformed
flags), 2 invariant violation.
"""

from __future__ import annotations

import argparse
import json
import sys

from .config import DEFAULT, BudgetExceededError, InvariantViolation, LatticeError
from .dilation import PointSet, format_point_set, point_set_for_N
from .dispersion import dispersion
from .experiments import (
    boundedness_csv,
    boundedness_study,
    discrepancy_csv,
    discrepancy_study,
    scaling_csv,
    scaling_study,
)
from .lattice import Lattice, frolov_lattice, golden_lattice, integer_lattice, load_lattice


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def resolve_lattice(spec: str, dim: int | None) -> Lattice:
    if spec == "golden":
        if dim not in (None, 2):
            raise ValueError("the golden lattice is 2-dimensional")
        return golden_lattice()
    if spec == "frolov":
        return frolov_lattice(2 if dim is None else dim)
    if spec == "integer":
        return integer_lattice(2 if dim is None else dim)
    if spec.startswith("custom:"):
        lat = load_lattice(spec[len("custom:"):])
        if dim is not None and dim != lat.dim:
            raise ValueError(f"--dim {dim} does not match the lattice file (d={lat.dim})")
        return lat
    raise ValueError(f"unknown lattice {spec!r}; use golden, frolov, integer or custom:<file>")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--lattice", default="golden", help="golden | frolov | integer | custom:<file>")
    common.add_argument("--dim", type=int, default=None)
    common.add_argument("--seed", type=int, default=DEFAULT.seed)
    common.add_argument("--out", default=None, help="output file (default: standard output)")
    common.add_argument("--format", choices=("csv", "json"), default=None)

    parser = _Parser(prog="lattice-dispersion", description="Admissible lattices and their dispersion.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("generate", parents=[common], help="write the N-point set P_N")
    p.add_argument("--n", type=int, required=True)

    p = sub.add_parser("dispersion", parents=[common], help="dispersion of a point-set file")
    p.add_argument("--in", dest="infile", required=True)

    p = sub.add_parser("scaling", parents=[common], help="N * disp(P_N) for a list of N")
    p.add_argument("--n", type=_int_list, required=True)

    p = sub.add_parser("bounded", parents=[common], help="windowed lattice-dispersion for growing M")
    p.add_argument("--m", type=_float_list, default=[8.0, 16.0, 32.0])

    p = sub.add_parser("counting", parents=[common], help="counting discrepancy of shifted cubes")
    p.add_argument("--volumes", type=_float_list, default=[10.0, 100.0, 1000.0])
    p.add_argument("--shifts", type=int, default=50)
    p.add_argument("--shift-range", type=float, default=100.0)

    sub.add_parser("selftest", parents=[common], help="run the built-in invariant checks")
    return parser


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _run(args) -> int:
    fmt = args.format
    if args.command == "generate":
        ps = point_set_for_N(resolve_lattice(args.lattice, args.dim), args.n)
        _emit(format_point_set(ps), args.out)
    elif args.command == "dispersion":
        result = dispersion(PointSet.read(args.infile))
        if fmt == "csv":
            w = result.witness
            row = ",".join([f"{result.volume:.17g}", result.algorithm, str(result.certified_exact).lower()]
                           + [f"{v:.17g}" for v in (*w.lower, *w.upper)])
            _emit("volume,algorithm,certified_exact,witness\n" + row + "\n", args.out)
        else:
            _emit(result.to_json() + "\n", args.out)
    elif args.command == "scaling":
        rows = scaling_study(resolve_lattice(args.lattice, args.dim), args.n)
        _emit(_json([r.to_dict() for r in rows]) if fmt == "json" else scaling_csv(rows), args.out)
    elif args.command == "bounded":
        rows = boundedness_study(resolve_lattice(args.lattice, args.dim), args.m)
        if fmt == "json":
            text = _json([{"M": r.M, "disp_star_window": r.disp_star_window,
                           "growth_ratio": None if r.growth_ratio != r.growth_ratio else r.growth_ratio,
                           "witness": r.witness.to_dict()} for r in rows])
        else:
            text = boundedness_csv(rows)
        _emit(text, args.out)
    elif args.command == "counting":
        rows = discrepancy_study(resolve_lattice(args.lattice, args.dim), args.volumes, args.shifts,
                                 seed=args.seed, shift_range=args.shift_range)
        if fmt == "json":
            text = _json([{"vol": r.vol, "max_discrepancy": r.max_discrepancy,
                           "max_log_bound_ratio": r.max_log_bound_ratio} for r in rows])
        else:
            text = discrepancy_csv(rows)
        _emit(text, args.out)
    elif args.command == "selftest":
        from .selftest import run_selftest

        failures = run_selftest(seed=args.seed)
        if failures:
            for line in failures:
                print(f"FAIL {line}", file=sys.stderr)
            return 2
        print("selftest: all invariants hold")
    return 0


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    try:
        return _run(args)
    except InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return 2
    except (BudgetExceededError, LatticeError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

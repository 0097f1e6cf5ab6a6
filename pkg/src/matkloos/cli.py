"""Command-line surface: compute, verify, tabulate, and scan.

All results go to stdout as JSON (or CSV for tables) with sorted keys so
identical inputs give byte-identical output; runtimes and diagnostics go
to stderr.  Exit codes: 0 success, 1 no exact path without a fallback,
2 budget exceeded, 64 usage or input error.
"""

from __future__ import annotations

import argparse
import csv
import itertools
import json
import sys
import time

from .combinat import partitions
from .errors import BudgetExceeded, MatKloosError, NoExactPath
from .ffield import cyclo_abs
from .matfq import DEFAULT_BUDGET, MatFq
from .oracle import CellSpec, cell_oracle, kloosterman_oracle
from .evaluator import (
    bound_report,
    conjecture_scan,
    eval_kn,
    eval_knab,
)
from .symbolic import n4_cell_table, partition_poly

USAGE_EXIT = 64


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors; 2 is reserved for budget exhaustion
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE_EXIT, f"{self.prog}: error: {message}\n")


class _UsageError(Exception):
    pass


def _load_matrix(path: str) -> MatFq:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
        return MatFq.from_json(obj)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise _UsageError(f"cannot load matrix from {path}: {exc}") from exc


def _emit(data) -> None:
    json.dump(data, sys.stdout, sort_keys=True, indent=2)
    sys.stdout.write("\n")


def _policy_kwargs(args) -> dict:
    return dict(
        allow_conjecture=args.allow_conjecture,
        allow_oracle=args.allow_oracle,
        budget=args.budget,
        kernel=args.kernel,
    )


def _evaluate(args):
    a = _load_matrix(args.matrix)
    if args.b is None:
        return a, None, eval_kn(a, **_policy_kwargs(args))
    b = _load_matrix(args.b)
    return a, b, eval_knab(a, b, **_policy_kwargs(args))


def _cmd_compute(args) -> int:
    _, _, result = _evaluate(args)
    _emit(result.to_json())
    return 0


def _parse_cell(spec: str, n: int) -> CellSpec:
    kind, _, rest = spec.partition(":")
    if kind == "borel":
        try:
            images = tuple(int(x) for x in rest.split(","))
        except ValueError:
            raise _UsageError(f"bad borel cell spec {spec!r}") from None
        if sorted(images) != list(range(1, n + 1)):
            raise _UsageError(
                f"borel cell needs a permutation of 1..{n}, got {rest!r}"
            )
        return CellSpec.borel(tuple(x - 1 for x in images))
    if kind == "parabolic":
        try:
            k = int(rest)
        except ValueError:
            raise _UsageError(f"bad parabolic cell spec {spec!r}") from None
        if not 1 <= k <= n:
            raise _UsageError(f"parabolic slice index must be in 1..{n}")
        return CellSpec.parabolic(k)
    raise _UsageError(f"unknown cell kind {kind!r}, expected borel: or parabolic:")


def _cmd_oracle(args) -> int:
    a = _load_matrix(args.matrix)
    b = _load_matrix(args.b) if args.b else None
    start = time.monotonic()
    if args.cell:
        spec = _parse_cell(args.cell, a.n)
        value = cell_oracle(a, spec, b=b, budget=args.budget, kernel=args.kernel)
    else:
        value = kloosterman_oracle(a, b, budget=args.budget, kernel=args.kernel)
    elapsed = time.monotonic() - start
    print(f"oracle run took {elapsed:.3f}s", file=sys.stderr)
    _emit({"value": value.to_json(), "abs": cyclo_abs(value)})
    return 0


def _cmd_compare(args) -> int:
    a, b, result = _evaluate(args)
    oracle_value = kloosterman_oracle(a, b, budget=args.budget, kernel=args.kernel)
    _emit(
        {
            "evaluator": result.to_json(),
            "oracle": {"value": oracle_value.to_json(), "abs": cyclo_abs(oracle_value)},
            "equal": result.value == oracle_value,
        }
    )
    return 0


def _cmd_tables(args) -> int:
    if args.n < 1:
        raise _UsageError("--n must be at least 1")
    lams = list(partitions(args.n))
    cells = [c for c in n4_cell_table() if sum(c.shape) == args.n] if args.n <= 4 else []
    if args.format == "json":
        _emit(
            {
                "partition_polynomials": [
                    {"lambda": list(lam), "poly": partition_poly(lam).to_json()}
                    for lam in lams
                ],
                "cells": [
                    {
                        "shape": list(c.shape),
                        "eps": list(c.eps),
                        "w": str(c.w),
                        "poly": c.poly.to_json(),
                    }
                    for c in cells
                ],
            }
        )
        return 0
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["lambda", "polynomial"])
    for lam in lams:
        writer.writerow(["[" + " ".join(map(str, lam)) + "]", partition_poly(lam).q_display()])
    if cells:
        writer.writerow([])
        writer.writerow(["shape", "eps", "w", "polynomial"])
        for c in cells:
            writer.writerow(
                [
                    "[" + " ".join(map(str, c.shape)) + "]",
                    "".join(map(str, c.eps)),
                    str(c.w),
                    c.poly.q_display(),
                ]
            )
    return 0


def _cmd_cells(args) -> int:
    a = _load_matrix(args.matrix)
    if args.q is not None and args.q != a.ctx.q:
        raise _UsageError(f"--q {args.q} does not match the matrix field q = {a.ctx.q}")
    b = _load_matrix(args.b) if args.b else None
    n = a.n
    rows = []
    total = None
    for images in itertools.permutations(range(n)):
        value = cell_oracle(
            a, CellSpec.borel(images), b=b, budget=args.budget, kernel=args.kernel
        )
        total = value if total is None else total + value
        is_involution = all(images[images[i]] == i for i in range(n))
        rows.append(
            {
                "w": [x + 1 for x in images],
                "involution": is_involution,
                "value": value.to_json(),
                "abs": cyclo_abs(value),
                "zero": not value,
            }
        )
    _emit(
        {
            "cells": rows,
            "total": {"value": total.to_json(), "abs": cyclo_abs(total)},
            "nonzero_cells_all_involutions": all(
                r["involution"] for r in rows if not r["zero"]
            ),
        }
    )
    return 0


def _cmd_scan(args) -> int:
    try:
        primes = [int(x) for x in args.primes.split(",") if x]
    except ValueError:
        raise _UsageError(f"bad prime list {args.primes!r}") from None
    if not primes:
        raise _UsageError("empty prime list")
    instances = conjecture_scan(
        args.n,
        primes,
        args.count,
        seed=args.seed,
        budget=args.budget,
        kernel=args.kernel,
    )
    _emit(
        {
            "instances": [inst.to_json() for inst in instances],
            "all_match": all(inst.match for inst in instances),
        }
    )
    return 0


def _cmd_bounds(args) -> int:
    a, b, result = _evaluate(args)
    conjectural = result.provenance.startswith("ConjecturalFormula")
    reports = bound_report(a, b, result.value, conjectural=conjectural)
    _emit(
        {
            "abs": result.complex_abs,
            "provenance": result.provenance,
            "bounds": [r.to_json() for r in reports],
        }
    )
    return 0


def _add_policy_flags(sub, oracle_default: bool = False):
    sub.add_argument("--allow-conjecture", action="store_true")
    sub.add_argument(
        "--allow-oracle",
        action="store_true",
        default=oracle_default,
        help="fall back to the group sum when no formula applies",
    )


def _add_common_flags(sub):
    sub.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    sub.add_argument(
        "--kernel",
        choices=["numba", "numpy", "python"],
        default=None,
        help="histogram backend override (default: MATKLOOS_KERNEL or numba)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="matkloos", description=__doc__)
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("compute", help="evaluate K_n(a) or K_n(a,b) by formula")
    p.add_argument("--matrix", required=True)
    p.add_argument("--b", default=None)
    _add_policy_flags(p)
    _add_common_flags(p)
    p.set_defaults(func=_cmd_compute)

    p = subs.add_parser("oracle", help="brute-force group or cell sum")
    p.add_argument("--matrix", required=True)
    p.add_argument("--b", default=None)
    p.add_argument(
        "--cell",
        default=None,
        help="borel:W with W a comma list of 1-based images, or parabolic:K",
    )
    _add_common_flags(p)
    p.set_defaults(func=_cmd_oracle)

    p = subs.add_parser("compare", help="formula vs oracle, exact verdict")
    p.add_argument("--matrix", required=True)
    p.add_argument("--b", default=None)
    _add_policy_flags(p)
    _add_common_flags(p)
    p.set_defaults(func=_cmd_compare)

    p = subs.add_parser("tables", help="partition polynomials and cell tables")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.set_defaults(func=_cmd_tables)

    p = subs.add_parser("cells", help="per-cell oracle sums for a matrix")
    p.add_argument("--matrix", required=True)
    p.add_argument("--b", default=None)
    p.add_argument("--q", type=int, default=None, help="sanity check against the matrix field")
    _add_common_flags(p)
    p.set_defaults(func=_cmd_cells)

    p = subs.add_parser("scan-conjecture", help="sampled oracle-vs-formula scan")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--primes", required=True, help="comma-separated primes")
    p.add_argument("--count", type=int, required=True, help="polynomials per prime")
    p.add_argument("--seed", type=int, default=0)
    _add_common_flags(p)
    p.set_defaults(func=_cmd_scan)

    p = subs.add_parser("bounds", help="report every applicable bound")
    p.add_argument("--matrix", required=True)
    p.add_argument("--b", default=None)
    _add_policy_flags(p, oracle_default=True)
    _add_common_flags(p)
    p.set_defaults(func=_cmd_bounds)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"matkloos: error: {exc}", file=sys.stderr)
        return USAGE_EXIT
    except NoExactPath as exc:
        print(f"matkloos: no exact path: {exc}", file=sys.stderr)
        return 1
    except BudgetExceeded as exc:
        print(f"matkloos: budget exceeded: {exc}", file=sys.stderr)
        return 2
    except MatKloosError as exc:
        print(f"matkloos: error: {exc}", file=sys.stderr)
        return USAGE_EXIT


if __name__ == "__main__":
    sys.exit(main())

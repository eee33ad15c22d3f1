"""Command-line driver.

Exit codes: 0 success, 2 parse or configuration error, 3 capacity guard,
4 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import SpcaError
from .net import ANGULAR_GRID, GREEDY_COVER, antipodal_reduce, build_sphere_net, covering_check
from .runner import (
    ALGORITHMS,
    JOINT,
    ORACLE,
    RunSpec,
    compare,
    cumulative_csv,
    report_json,
    resolve_dataset,
    run,
    topics,
    topics_text,
)
from .sketch import SketchSpec
from .solver import default_workers


def _add_dataset(p):
    p.add_argument("dataset", help="CSV path, psd:PATH, bow:DOCWORD, appendix:EPS,DELTA or synthetic[:N,D,SEED]")
    p.add_argument("--header", action="store_true", help="first CSV row holds variable names")
    p.add_argument("--vocab", help="word list, one per line (bag-of-words input)")
    p.add_argument("--center", action=argparse.BooleanOptionalAction, default=None,
                   help="center columns (default: on for CSV samples, off for bag-of-words)")


def _add_problem(p):
    p.add_argument("--k", type=int, default=2, help="number of components")
    p.add_argument("--s", type=int, default=2, help="nonzeros per component")


def _add_solver(p):
    p.add_argument("--eps", type=float, default=0.5, help="accuracy parameter in (0, 1)")
    p.add_argument("--rank", type=int, default=4, help="sketch rank")
    p.add_argument("--sketch", choices=["svd", "gauss"], default="svd")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--time-budget-ms", type=float, default=None)
    p.add_argument("--polish", action=argparse.BooleanOptionalAction, default=True,
                   help="replace each component by the leading eigenvector on its support")
    p.add_argument("--workers", type=int, default=default_workers(), help="default: $SPCA_WORKERS or 1")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--output", "-o", help="write the report here (plus .cumvar.csv / .topics.txt)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="disjoint-spca", description="Sparse PCA with disjoint supports.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="run one algorithm and print its report")
    _add_dataset(p)
    _add_problem(p)
    _add_solver(p)
    p.add_argument("--algorithm", choices=ALGORITHMS, default=JOINT)

    p = sub.add_parser("compare", help="tabulate several algorithms on one dataset")
    _add_dataset(p)
    _add_problem(p)
    _add_solver(p)
    p.add_argument("--algorithms", default="Joint,DeflateTPower,DeflateExact",
                   help="comma-separated subset of " + ",".join(ALGORITHMS))

    p = sub.add_parser("oracle", help="exact optimum by exhaustive enumeration")
    _add_dataset(p)
    _add_problem(p)
    p.add_argument("--format", choices=["json", "csv"], default="json")

    p = sub.add_parser("netinfo", help="net size and Monte-Carlo covering check")
    p.add_argument("--r", type=int, required=True, help="sphere dimension")
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--construction", choices=[ANGULAR_GRID, GREEDY_COVER], default=ANGULAR_GRID)
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=["json", "csv"], default="json")

    p = sub.add_parser("topics", help="solve and list the words of each component")
    _add_dataset(p)
    _add_problem(p)
    _add_solver(p)
    p.add_argument("--algorithm", choices=ALGORITHMS, default=JOINT)
    return parser


def _spec(args, algorithm, dataset):
    return RunSpec(
        dataset=dataset,
        algorithm=algorithm,
        k=args.k,
        s=args.s,
        eps=args.eps,
        sketch=SketchSpec(args.sketch, args.rank, args.seed),
        time_budget=None if args.time_budget_ms is None else args.time_budget_ms / 1000.0,
        seed=args.seed,
        output=args.output,
        polish=args.polish,
        workers=args.workers,
        center=args.center,
    )


def _emit(text, out):
    out.write(text if text.endswith("\n") else text + "\n")


def _main(args, out):
    if args.command == "netinfo":
        net = build_sphere_net(args.r, args.eps, args.construction, args.seed)
        chk = covering_check(net, args.eps, args.trials, args.seed)
        info = {"r": args.r, "eps": args.eps, "construction": args.construction, "points": len(net),
                "points_reduced": len(antipodal_reduce(net)), "radius": net.radius, **chk}
        if args.format == "json":
            _emit(json.dumps(info, indent=2), out)
        else:
            _emit(",".join(info) + "\n" + ",".join(str(v) for v in info.values()), out)
        return 0

    ds = resolve_dataset(args.dataset, args.header, args.vocab)
    if args.command == "oracle":
        spec = RunSpec(dataset=ds, algorithm=ORACLE, k=args.k, s=args.s, center=args.center)
        rep = run(spec)
        if args.format == "json":
            _emit(report_json(rep), out)
        else:
            _emit(cumulative_csv(rep), out)
        return 0
    if args.command in ("solve", "topics"):
        rep = run(_spec(args, args.algorithm, ds))
        if args.command == "topics":
            vocab = ds.vocabulary or [str(i) for i in range(ds.dim)]
            _emit(topics_text(topics(rep, vocab)), out)
        elif args.format == "json":
            _emit(report_json(rep), out)
        else:
            _emit(cumulative_csv(rep), out)
        return 0
    if args.command == "compare":
        algos = [a.strip() for a in args.algorithms.split(",") if a.strip()]
        specs = [_spec(args, a, ds) for a in algos]
        for sp in specs:
            sp.output = None
        csv_path = json_path = None
        if args.output:
            if args.format == "csv":
                csv_path = args.output
            else:
                json_path = args.output
        rows = compare(specs, csv_path, json_path)
        if args.format == "json":
            _emit(json.dumps(rows, indent=2), out)
        else:
            lines = ["algorithm,objective,elapsed_ms,guarantee_factor,termination"]
            lines += [f"{r['algorithm']},{r['objective']!r},{r['elapsed_ms']:.1f},"
                      f"{'' if r['guarantee_factor'] is None else r['guarantee_factor']},{r['termination']}"
                      for r in rows]
            _emit("\n".join(lines), out)
        return 0
    raise AssertionError(args.command)


def main(argv=None, out=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = sys.stdout if out is None else out
    try:
        return _main(args, out)
    except SpcaError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

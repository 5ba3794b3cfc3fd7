"""Command-line driver.

Exit status: 0 success, 1 verification failed (or degenerate chain query),
2 usage or input error.
"""
from __future__ import annotations

import argparse
import json
import sys
from itertools import combinations

from . import audit
from .core import INF, MAX_N, Tour, enumerate_tours, load_matrix, tour_length
from .geometry import adjacent
from .septree import dumps_trace, filter_nontrivial
from .solver import branch_bound

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _cost(v):
    return None if v is INF else v


def _parse_tour(text: str, n: int | None = None) -> Tour:
    try:
        verts = [int(tok) for tok in text.replace(",", " ").split()]
    except ValueError:
        raise UsageError(f"tour must list vertices, got {text!r}") from None
    try:
        t = Tour.from_cycle(verts)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if n is not None and t.n != n:
        raise UsageError(f"tour has {t.n} vertices, matrix has {n}")
    return t


def _matrix(path):
    if path is None:
        raise UsageError("--matrix is required")
    try:
        return load_matrix(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from None
    except (ValueError, KeyError, OverflowError) as exc:
        raise UsageError(f"malformed matrix in {path}: {exc}") from None


def _emit(args, text: str, data) -> None:
    if args.format == "structured":
        print(json.dumps(data, indent=2))
    else:
        print(text)


def cmd_solve(args) -> int:
    C = _matrix(args.matrix)
    if C.n < 3 or C.n > MAX_N:
        raise UsageError(f"solve needs 3 <= n <= {MAX_N}, got {C.n}")
    sol = branch_bound(C)
    trace = filter_nontrivial(sol.trace) if args.filter_trivial else sol.trace
    if args.trace_out:
        try:
            with open(args.trace_out, "w", encoding="utf-8") as fh:
                fh.write(dumps_trace(trace))
        except OSError as exc:
            raise UsageError(f"cannot write {args.trace_out}: {exc.strerror or exc}") from None
    order = list(sol.tour.order)
    text = [f"tour: {' -> '.join(map(str, order + order[:1]))}", f"length: {sol.length}",
            f"instances: {len(trace.instances)}",
            f"comparisons: {len(sol.trace.events)} ({len(sol.trace.nontrivial())} nontrivial)"]
    if args.verbose:
        text += [f"  {e.describe()}" for e in trace.events]
    data = {"tour": order, "length": _cost(sol.length), "instances": len(trace.instances),
            "events": len(sol.trace.events), "nontrivial": len(sol.trace.nontrivial())}
    _emit(args, "\n".join(text), data)
    return EXIT_OK


def cmd_audit(args) -> int:
    which = args.which
    if which == "section4":
        rep = audit.verify_section4()
    elif which == "section5":
        y = _parse_tour(args.tour, 4) if args.tour else None
        rep = audit.verify_section5(y=y)
    elif which == "chain":
        C = _matrix(args.matrix)
        if not 3 <= C.n <= MAX_N:
            raise UsageError(f"chain audit needs 3 <= n <= {MAX_N}, got {C.n}")
        if not args.tour:
            raise UsageError("--tour is required for a chain audit")
        rep = audit.audit_chain(C, _parse_tour(args.tour, C.n))
    else:  # lemma1
        n = args.n if args.n is not None else 5
        if not 4 <= n <= 6:
            raise UsageError("lemma1 suite needs 4 <= n <= 6")
        if args.cases < 1:
            raise UsageError("--cases must be positive")
        rep = audit.lemma1_property_suite(args.seed, args.cases, n)
    _emit(args, rep.summary(), rep.to_dict())
    if which == "chain":
        return EXIT_OK if rep.conclusion in ("VIOLATES(*)", "SATISFIES(*)") else EXIT_FAILED
    return EXIT_OK if rep.passed else EXIT_FAILED


def cmd_enumerate(args) -> int:
    if (args.n is None) == (args.matrix is None):
        raise UsageError("give exactly one of --n and --matrix")
    C = _matrix(args.matrix) if args.matrix else None
    n = C.n if C is not None else args.n
    if not 3 <= n <= MAX_N:
        raise UsageError(f"enumerate needs 3 <= n <= {MAX_N}, got {n}")
    rows, data = [], []
    for t in enumerate_tours(n):
        if C is None:
            rows.append(" ".join(map(str, t.order)))
            data.append({"tour": list(t.order)})
        else:
            v = tour_length(t, C)
            rows.append(f"{' '.join(map(str, t.order))}\t{v}")
            data.append({"tour": list(t.order), "length": _cost(v)})
    _emit(args, "\n".join(rows), data)
    return EXIT_OK


def cmd_adjacency(args) -> int:
    n = args.n
    if n is None or not 4 <= n <= 6:
        raise UsageError("adjacency needs --n with 4 <= n <= 6")
    tours = enumerate_tours(n)
    rows, pairs, hits = [], [], 0
    for a, b in combinations(tours, 2):
        ok = adjacent(a, b)
        hits += ok
        pairs.append({"x": list(a.order), "y": list(b.order), "adjacent": ok})
        rows.append(f"{' '.join(map(str, a.order))} | {' '.join(map(str, b.order))}\t"
                    f"{'adjacent' if ok else 'not adjacent'}")
    total = len(pairs)
    rows.append(f"{hits}/{total} adjacent; clique: {'yes' if hits == total else 'no'}")
    _emit(args, "\n".join(rows), {"n": n, "adjacent": hits, "pairs": total,
                                 "clique": hits == total, "verdicts": pairs})
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tspchain", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "structured"), default="text")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", parents=[common], help="run branch and bound on a matrix file")
    s.add_argument("--matrix", required=True)
    s.add_argument("--trace-out")
    s.add_argument("--filter-trivial", action="store_true")
    s.add_argument("--verbose", action="store_true", help="print every recorded comparison")
    s.set_defaults(func=cmd_solve)

    a = sub.add_parser("audit", parents=[common], help="run a built-in or custom audit")
    a.add_argument("which", choices=("section4", "section5", "chain", "lemma1"))
    a.add_argument("--matrix")
    a.add_argument("--tour")
    a.add_argument("--seed", type=int, default=1)
    a.add_argument("--cases", type=int, default=500)
    a.add_argument("--n", type=int)
    a.set_defaults(func=cmd_audit)

    e = sub.add_parser("enumerate", parents=[common], help="list all tours, with lengths")
    e.add_argument("--n", type=int)
    e.add_argument("--matrix")
    e.set_defaults(func=cmd_enumerate)

    d = sub.add_parser("adjacency", parents=[common], help="pairwise adjacency of all tours")
    d.add_argument("--n", type=int, required=True)
    d.set_defaults(func=cmd_adjacency)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"tspchain: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

Subcommands:

* ``construct``: build and verify one array, write it to a file;
* ``verify``: check an array file against its declared parameters;
* ``sweep``: construct and verify every admissible tuple in a range and
  write a CSV report;
* ``search``: run the exhaustive existence search on tiny parameters;
* ``selftest``: recheck the block catalog against its declared identities.

Exit codes: 0 success, 1 internal failure, 2 not constructible or invalid
parameters, 3 deliberately uncovered case, 4 verification failed,
5 exhaustive search found nothing, 6 search budget exceeded, 64 file parse
error.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from . import arrayio
from .assembler import construct
from .core import derive_parameters
from .errors import (
    DimensionMismatch,
    HeffterError,
    InvalidT,
    NonExistent,
    OpenCase,
    ParseError,
    PreconditionViolated,
)
from .oracle import BUDGET, EXHAUSTED, FOUND, SearchBudget, search_small
from .verifier import verify_full

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_NONEXISTENT = 2
EXIT_OPEN = 3
EXIT_VERIFY_FAIL = 4
EXIT_NO_SOLUTION = 5
EXIT_BUDGET = 6
EXIT_PARSE = 64


def _add_params(ap: argparse.ArgumentParser) -> None:
    for name in ("m", "n", "s", "k", "t"):
        ap.add_argument(f"--{name}", type=int, required=True)


def cmd_construct(args) -> int:
    try:
        result = construct(args.m, args.n, args.s, args.k, args.t)
    except OpenCase as exc:
        print(f"open case: {exc}", file=sys.stderr)
        return EXIT_OPEN
    except (NonExistent, PreconditionViolated, DimensionMismatch, InvalidT) as exc:
        print(f"not constructible: {exc}", file=sys.stderr)
        return EXIT_NONEXISTENT
    except HeffterError as exc:
        print(f"internal failure: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    doc = arrayio.ArrayFile(array=result.array, params=result.params, trace=result.trace)
    if args.out:
        arrayio.write_file(args.out, doc, fmt=args.format)
        print(f"wrote {args.out} [{'+'.join(result.trace)}]")
    else:
        text = arrayio.dumps_grid(doc) if args.format == "grid" else arrayio.dumps_json(doc)
        sys.stdout.write(text)
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        doc = arrayio.read_file(args.path)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    report = verify_full(doc.array, doc.params, mode=args.mode)
    if report.overall:
        print(f"{args.path}: all conditions hold ({args.mode} mode)")
        return EXIT_OK
    print(f"{args.path}: verification FAILED ({args.mode} mode)")
    for line in report.defects():
        print(f"  {line}")
    return EXIT_VERIFY_FAIL


def _divisors(x: int) -> list:
    out = []
    d = 1
    while d * d <= x:
        if x % d == 0:
            out.append(d)
            if d != x // d:
                out.append(x // d)
        d += 1
    return sorted(out)


def sweep_tuples(m_range, n_range, s_range, k_range):
    """Admissible (m, n, s, k) tuples: even s, k with matching fill totals."""
    for m in m_range:
        for n in n_range:
            for s in s_range:
                if s % 2 or not 4 <= s <= n:
                    continue
                for k in k_range:
                    if k % 2 or not 4 <= k <= m or m * s != n * k:
                        continue
                    yield m, n, s, k


def run_sweep(m_range, n_range, s_range, k_range):
    """Construct + verify every admissible (tuple, t); yields report rows.

    Row status is "pass", "fail", "open" (deliberately uncovered) or
    "nonexistent" (parity obstruction).
    """
    for m, n, s, k in sweep_tuples(m_range, n_range, s_range, k_range):
        for t in _divisors(2 * m * s):
            started = time.perf_counter()
            try:
                result = construct(m, n, s, k, t)
                status = "pass"
                branch = "+".join(result.trace)
            except OpenCase:
                status, branch = "open", "-"
            except NonExistent:
                status, branch = "nonexistent", "-"
            except HeffterError as exc:
                status, branch = "fail", f"error:{type(exc).__name__}"
            millis = (time.perf_counter() - started) * 1000.0
            yield {
                "m": m, "n": n, "s": s, "k": k, "t": t,
                "branch": branch, "pass": status, "millis": f"{millis:.3f}",
            }


def cmd_sweep(args) -> int:
    rows = list(
        run_sweep(
            range(args.m_min, args.m_max + 1),
            range(args.n_min, args.n_max + 1),
            range(args.s_min, args.s_max + 1),
            range(args.k_min, args.k_max + 1),
        )
    )
    lines = ["m,n,s,k,t,branch,pass,millis"]
    lines += [
        "{m},{n},{s},{k},{t},{branch},{pass},{millis}".format(**row) for row in rows
    ]
    text = "\n".join(lines) + "\n"
    if args.report:
        Path(args.report).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    failures = sum(1 for row in rows if row["pass"] == "fail")
    passed = sum(1 for row in rows if row["pass"] == "pass")
    print(
        f"sweep: {len(rows)} rows, {passed} pass, {failures} fail,"
        f" {len(rows) - passed - failures} skipped",
        file=sys.stderr,
    )
    return EXIT_OK if failures == 0 else EXIT_VERIFY_FAIL


def cmd_search(args) -> int:
    try:
        params = derive_parameters(args.m, args.n, args.s, args.k, args.t)
    except (PreconditionViolated, DimensionMismatch, InvalidT) as exc:
        print(f"bad parameters: {exc}", file=sys.stderr)
        return EXIT_NONEXISTENT
    budget = SearchBudget(
        max_nodes=args.max_nodes,
        max_seconds=args.max_seconds,
        fix_sign=not args.no_sign_fix,
        fix_cell=not args.no_cell_fix,
    )
    outcome = search_small(params, budget)
    print(
        f"search: {outcome.status} after {outcome.nodes} nodes,"
        f" {outcome.skeletons} skeletons, {outcome.seconds:.2f}s"
    )
    if outcome.status == FOUND:
        doc = arrayio.ArrayFile(array=outcome.array, params=params, trace=("search",))
        if args.out:
            arrayio.write_file(args.out, doc)
            print(f"wrote {args.out}")
        else:
            sys.stdout.write(arrayio.dumps_grid(doc))
        return EXIT_OK
    return EXIT_NO_SOLUTION if outcome.status == EXHAUSTED else EXIT_BUDGET


def cmd_selftest(args) -> int:
    from .catalog import load_catalog, self_test_catalog

    defects = self_test_catalog()
    print(f"catalog entries: {len(load_catalog())}, defects: {len(defects)}")
    for d in defects:
        print(f"  {d.name} {d.params}: {d.kind} {d.detail}")
    return EXIT_OK if not defects else EXIT_VERIFY_FAIL


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="heffter",
        description="Construct, verify and search integer relative Heffter arrays.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", help="build and verify one array")
    _add_params(c)
    c.add_argument("--out", help="output path (.json or .csv)")
    c.add_argument("--format", choices=("json", "grid"), default="json")
    c.set_defaults(func=cmd_construct)

    v = sub.add_parser("verify", help="verify an array file")
    v.add_argument("path")
    v.add_argument("--mode", choices=("integer", "simple"), default="integer")
    v.set_defaults(func=cmd_verify)

    w = sub.add_parser("sweep", help="construct + verify a parameter range")
    w.add_argument("--m-min", type=int, default=4)
    w.add_argument("--m-max", type=int, default=12)
    w.add_argument("--n-min", type=int, default=4)
    w.add_argument("--n-max", type=int, default=12)
    w.add_argument("--s-min", type=int, default=4)
    w.add_argument("--s-max", type=int, default=14)
    w.add_argument("--k-min", type=int, default=4)
    w.add_argument("--k-max", type=int, default=14)
    w.add_argument("--report", help="CSV report path (default: stdout)")
    w.set_defaults(func=cmd_sweep)

    q = sub.add_parser("search", help="exhaustive search on tiny parameters")
    _add_params(q)
    q.add_argument("--max-nodes", type=int, default=5_000_000)
    q.add_argument("--max-seconds", type=float, default=120.0)
    q.add_argument("--no-sign-fix", action="store_true")
    q.add_argument("--no-cell-fix", action="store_true")
    q.add_argument("--out")
    q.set_defaults(func=cmd_search)

    st = sub.add_parser("selftest", help="recheck the block catalog")
    st.set_defaults(func=cmd_selftest)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())

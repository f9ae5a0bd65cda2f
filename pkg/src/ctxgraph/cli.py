"""Command-line interface: ``ctxgraph enumerate | invariants | scan | witness``.

Exit codes: 0 success, 1 computation or self-check failure, 2 usage error.
Settings are taken from flags first, then the CTX_EPS / CTX_JOBS environment
variables, then the built-in defaults.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass

from . import analysis, graphs, invariants, quantum
from .scan import MAX_ORDER as SCAN_MAX_ORDER, resume, scan, survivor_analysis

log = logging.getLogger("ctxgraph")


@dataclass
class Config:
    eps: float = invariants.DEFAULT_EPS
    tol: float = invariants.DEFAULT_SDP_TOL
    workers: int = os.cpu_count() or 1
    fmt: str = "csv"

    def __post_init__(self):
        if not (self.eps > 0 and self.tol > 0):
            raise ValueError("tolerances must be positive")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")


class UsageError(Exception):
    pass


def _env(name: str, conv, default):
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return default
    try:
        return conv(raw)
    except ValueError:
        raise UsageError(f"environment variable {name}={raw!r} is not a valid {conv.__name__}") from None


def make_config(args) -> Config:
    eps = args.eps if getattr(args, "eps", None) is not None else _env("CTX_EPS", float, invariants.DEFAULT_EPS)
    jobs = getattr(args, "jobs", None)
    if jobs is None:
        jobs = _env("CTX_JOBS", int, os.cpu_count() or 1)
    try:
        return Config(
            eps=eps,
            tol=invariants.DEFAULT_SDP_TOL if getattr(args, "tol", None) is None else args.tol,
            workers=jobs,
            fmt=getattr(args, "format", None) or "csv",
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid integer {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


# -- commands --------------------------------------------------------------------


def cmd_enumerate(args) -> int:
    if args.n > graphs.MAX_ORDER:
        raise UsageError(f"n must be at most {graphs.MAX_ORDER}")
    if args.connected:
        stream = graphs.enumerate_connected(args.n)
    else:
        if args.n > graphs.kernels.MAX_KEY_ORDER:
            raise UsageError("enumeration of all (possibly disconnected) graphs supports n <= 11")
        stream = (graphs.Graph.from_key(args.n, int(k)) for k in graphs.all_graph_keys(args.n))
    count = 0
    out = sys.stdout
    for g in stream:
        if args.format == "edges":
            out.write(" ".join(f"{i}-{j}" for i, j in g.edges()) + "\n")
        else:
            out.write(graphs.write_graph6(g) + "\n")
        count += 1
    out.flush()
    print(count, file=sys.stderr)
    return 0


def _format_record(rec: invariants.InvariantRecord, fmt: str) -> str:
    if fmt == "jsonl":
        return json.dumps(rec.to_json(), sort_keys=True)
    if fmt == "table":
        astar = "-" if rec.alphastar is None else str(rec.alphastar)
        return f"{rec.graph6:<12} {rec.alpha:>3} {rec.theta:>10.6f} {astar:>7}  {rec.flags}"
    return rec.to_csv()


def cmd_invariants(args) -> int:
    cfg = make_config(args)
    failed = False
    out = sys.stdout
    if cfg.fmt == "csv":
        out.write(invariants.InvariantRecord.CSV_HEADER + "\n")
    elif cfg.fmt == "table":
        out.write(f"{'graph6':<12} {'a':>3} {'theta':>10} {'a*':>7}  flags\n")
    for lineno, line in enumerate(args.input, start=1):
        if not line.strip():
            continue
        try:
            g = graphs.parse_graph6(line)
            rec = invariants.classify(g, cfg.eps, cfg.tol)
        except graphs.GraphFormatError as exc:
            print(f"line {lineno}: {exc}", file=sys.stderr)
            failed = True
            continue
        except (invariants.SolverError, ValueError) as exc:
            print(f"line {lineno}: {exc}", file=sys.stderr)
            failed = True
            continue
        out.write(_format_record(rec, cfg.fmt) + "\n")
        if rec.status != "ok":
            failed = True
    return 1 if failed else 0


def cmd_scan(args) -> int:
    cfg = make_config(args)
    if args.n == SCAN_MAX_ORDER and not args.long:
        raise UsageError("n=10 is a multi-hour run; pass --long to confirm")
    if args.n > SCAN_MAX_ORDER:
        raise UsageError(f"n must be at most {SCAN_MAX_ORDER}")
    os.makedirs(args.out, exist_ok=True)
    records_path = os.path.join(args.out, "records.jsonl")
    if args.checkpoint and os.path.exists(args.checkpoint):
        log.info("resuming from %s", args.checkpoint)
        report = resume(args.checkpoint, workers=cfg.workers)
        if report.n_max != args.n or report.eps != cfg.eps:
            print("warning: checkpoint settings differ from the flags; the checkpoint wins", file=sys.stderr)
    else:
        report = scan(
            args.n, cfg.eps, cfg.workers, args.checkpoint, tol=cfg.tol, records_path=records_path
        )
    summary = report.summary()
    summary["survivor_notes"] = [
        {"graph6": s.record.graph6, "fig1_isomorphic": s.fig1_isomorphic,
         "witness_value": s.witness_value, "note": s.note}
        for s in survivor_analysis(report)
    ]
    text = json.dumps(summary, indent=2, sort_keys=True) + "\n"
    with open(os.path.join(args.out, "summary.json"), "w") as fh:
        fh.write(text)
    sys.stdout.write(text)
    return 0 if report.complete else 1


def cmd_witness(args) -> int:
    checks = quantum.self_check()
    for name, ok in checks:
        print(f"[{'ok' if ok else 'FAIL'}] {name}", file=sys.stderr)
    records = None
    if args.data is not None:
        try:
            records = analysis.load_experiment_csv(args.data)
            report = analysis.table_report(records=records)
        except (OSError, ValueError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
    else:
        report = analysis.table_report()
    sys.stdout.write(report)
    return 0 if all(ok for _, ok in checks) else 1


# -- parser ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ctxgraph", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("enumerate", help="list non-isomorphic graphs in graph6")
    e.add_argument("n", type=_positive_int)
    e.add_argument("--connected", action="store_true", help="connected graphs only")
    e.add_argument("--format", choices=("graph6", "edges"), default="graph6")
    e.set_defaults(func=cmd_enumerate)

    i = sub.add_parser("invariants", help="alpha, theta and alpha* for graph6 lines on stdin")
    i.add_argument("--eps", type=float)
    i.add_argument("--tol", type=float, help="SDP gap tolerance")
    i.add_argument("--format", choices=("csv", "jsonl", "table"), default="csv")
    i.add_argument("input", nargs="?", type=argparse.FileType("r"), default=sys.stdin)
    i.set_defaults(func=cmd_invariants)

    s = sub.add_parser("scan", help="scan connected graphs for alpha < theta = alpha*")
    s.add_argument("-n", type=_positive_int, required=True, help="largest order")
    s.add_argument("--eps", type=float)
    s.add_argument("--tol", type=float, help="SDP gap tolerance")
    s.add_argument("--jobs", type=_positive_int)
    s.add_argument("--checkpoint", help="checkpoint file (resumed if it exists)")
    s.add_argument("--long", action="store_true", help="allow the multi-hour n=10 run")
    s.add_argument("--out", default="scan-out", help="directory for records.jsonl and summary.json")
    s.set_defaults(func=cmd_scan)

    w = sub.add_parser("witness", help="quantum checks and the measured-data table")
    w.add_argument("--data", nargs="?", const="bundled", help="CSV proposition,measured,sigma (default: bundled data)")
    w.set_defaults(func=cmd_witness)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    if getattr(args, "data", None) == "bundled":
        args.data = str(analysis.bundled_table1_path())
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"ctxgraph: error: {exc}", file=sys.stderr)
        return 2
    except KeyboardInterrupt:
        return 130


if __name__ == "__main__":
    sys.exit(main())

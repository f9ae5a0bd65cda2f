"""Scan every connected graph up to a given order for alpha < theta = alpha*.

Per graph the cascade is:

1. alpha by branch and bound, and whether the vertices split into alpha
   cliques.  If they do, alpha = theta = alpha* and nothing else is needed.
2. theta with a certified interval.
3. alpha* (exact) only for graphs with alpha < theta.

Graphs are processed in chunks of 1024 in ascending certificate order; a
pool of workers computes chunk results and the parent merges them in order,
so the output does not depend on the worker count.  Progress can be
checkpointed after any chunk and resumed.
"""

from __future__ import annotations

import json
import logging
import multiprocessing
import os
import tempfile
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from ._backend import kernels
from .graphs import Graph, are_isomorphic, connected_keys, parse_graph6, write_graph6
from .invariants import (
    DEFAULT_EPS,
    DEFAULT_SDP_TOL,
    InvariantRecord,
    SolverError,
    classify,
    decide_eq,
    decide_lt,
    fractional_packing,
    lovasz_theta,
    theta_lower_bound_from_representation,
)

log = logging.getLogger(__name__)

FORMAT_VERSION = "ctxgraph-scan/1"
CHUNK_SIZE = 1024
MAX_ORDER = 10


class CheckpointError(RuntimeError):
    pass


@dataclass
class ScanReport:
    n_max: int
    eps: float
    tol: float
    counts: dict = field(default_factory=dict)  # n -> [graphs, alpha_lt_theta, survivors]
    survivors: list = field(default_factory=list)
    indeterminate: list = field(default_factory=list)
    records: Optional[list] = None  # alpha < theta records when kept in memory
    records_path: Optional[str] = None
    complete: bool = False

    def totals(self) -> tuple[int, int, int]:
        t = [0, 0, 0]
        for c in self.counts.values():
            for i in range(3):
                t[i] += c[i]
        return tuple(t)

    def summary(self) -> dict:
        graphs, lt, surv = self.totals()
        return {
            "format": FORMAT_VERSION,
            "n_max": self.n_max,
            "eps": self.eps,
            "sdp_tol": self.tol,
            "complete": self.complete,
            "per_order": {
                str(n): {"graphs": c[0], "alpha_lt_theta": c[1], "survivors": c[2]}
                for n, c in sorted(self.counts.items())
            },
            "totals": {"graphs": graphs, "alpha_lt_theta": lt, "survivors": surv},
            "survivors": [r.to_json() for r in self.survivors],
            "indeterminate": list(self.indeterminate),
        }

    def summary_json(self) -> str:
        return json.dumps(self.summary(), indent=2, sort_keys=True) + "\n"


def _record_from_json(d: dict) -> InvariantRecord:
    return InvariantRecord(
        d["graph6"],
        d["alpha"],
        d["theta"],
        d["theta_gap"],
        None if d["alphastar"] is None else Fraction(d["alphastar"]),
        d["alpha_lt_theta"],
        d["theta_eq_alphastar"],
        d["status"],
    )


def _record_line(r: InvariantRecord) -> str:
    return json.dumps(r.to_json(), sort_keys=True) + "\n"


# -- chunk worker --------------------------------------------------------------


def _theta_decision(g: Graph, alpha: int, eps: float, tol: float):
    th = lovasz_theta(g, tol)
    lt = decide_lt(alpha, th, eps)
    if lt is None:
        th = lovasz_theta(g, tol / 10)
        lt = decide_lt(alpha, th, eps)
    return th, lt


def process_chunk(task) -> tuple[int, list, list, list]:
    """Returns (graph count, alpha<theta records, survivor candidates, indeterminate ids)."""
    n, keys, eps, tol = task
    keys = np.ascontiguousarray(keys, dtype=np.uint64)
    _, alpha, tight = kernels.screen_keys(n, keys)
    records, survivors, indeterminate = [], [], []
    for key, a, t in zip(keys, alpha, tight):
        if t:
            continue
        g = Graph.from_key(n, int(key))
        g6 = write_graph6(g)
        try:
            th, lt = _theta_decision(g, int(a), eps, tol)
        except SolverError:
            indeterminate.append(g6)
            continue
        if lt is None:
            indeterminate.append(g6)
            continue
        if not lt:
            continue
        astar = fractional_packing(g, exact=True)
        eq = decide_eq(astar, th, eps)
        if eq is None:
            th = lovasz_theta(g, tol / 10)
            eq = decide_eq(astar, th, eps)
        status = "ok" if eq is not None else "indeterminate"
        rec = InvariantRecord(g6, int(a), th.value, th.gap, astar, True, eq, status)
        records.append(rec)
        if eq is None:
            indeterminate.append(g6)
        elif eq:
            survivors.append(rec)
    return len(keys), records, survivors, indeterminate


# -- checkpoints ---------------------------------------------------------------


def _atomic_write(path: str, text: str):
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".ckpt-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _load_checkpoint(path: str) -> dict:
    try:
        with open(path) as fh:
            state = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise CheckpointError(f"cannot read checkpoint {path}: {exc}") from exc
    if not isinstance(state, dict) or state.get("format") != FORMAT_VERSION:
        raise CheckpointError(f"checkpoint {path} has unsupported format {state.get('format') if isinstance(state, dict) else None!r}")
    for key in ("n_max", "eps", "tol", "order", "done", "counts", "survivors", "indeterminate",
                "complete", "records_path", "records_offset"):
        if key not in state:
            raise CheckpointError(f"checkpoint {path} is missing {key!r}")
    return state


# -- driver ----------------------------------------------------------------------


def scan(
    n_max: int,
    eps: float = DEFAULT_EPS,
    workers: int = 1,
    checkpoint_path: Optional[str] = None,
    *,
    tol: float = DEFAULT_SDP_TOL,
    records_path: Optional[str] = None,
    stop_after_chunks: Optional[int] = None,
    _state: Optional[dict] = None,
) -> ScanReport:
    """Run the cascade over all connected graphs of order 1..n_max.

    ``records_path`` streams the alpha < theta records as JSON lines instead
    of keeping them in memory; with a checkpoint it defaults to
    ``<checkpoint>.records.jsonl``.  ``stop_after_chunks`` ends the run early
    (the report then has ``complete=False``), which is how interrupted runs
    are exercised in tests.
    """
    if not 1 <= n_max <= MAX_ORDER:
        raise ValueError(f"n_max must be in 1..{MAX_ORDER}")
    if workers < 1:
        raise ValueError("workers must be >= 1")
    if eps <= 0 or tol <= 0:
        raise ValueError("tolerances must be positive")
    if checkpoint_path and records_path is None:
        records_path = checkpoint_path + ".records.jsonl"

    report = ScanReport(n_max, eps, tol, records_path=records_path)
    start_order, start_done, offset = 1, 0, 0
    if _state is not None:
        report.counts = {int(k): list(v) for k, v in _state["counts"].items()}
        report.survivors = [_record_from_json(d) for d in _state["survivors"]]
        report.indeterminate = list(_state["indeterminate"])
        report.complete = _state["complete"]
        start_order, start_done, offset = _state["order"], _state["done"], _state["records_offset"]
    if records_path is None:
        report.records = []
        out = None
    else:
        mode = "r+" if _state is not None and os.path.exists(records_path) else "w"
        out = open(records_path, mode)
        out.truncate(offset)
        out.seek(offset)

    def save(order: int, done: int):
        if not checkpoint_path:
            return
        if out is not None:
            out.flush()
        state = {
            "format": FORMAT_VERSION,
            "n_max": n_max,
            "eps": eps,
            "tol": tol,
            "order": order,
            "done": done,
            "last_cert": last_cert,
            "counts": {str(k): v for k, v in report.counts.items()},
            "survivors": [r.to_json() for r in report.survivors],
            "indeterminate": report.indeterminate,
            "complete": report.complete,
            "records_path": records_path,
            "records_offset": out.tell() if out is not None else 0,
        }
        _atomic_write(checkpoint_path, json.dumps(state, sort_keys=True))

    last_cert = _state.get("last_cert") if _state else None
    pool = None
    chunks_run = 0
    t0 = time.monotonic()
    last_save = t0
    try:
        if report.complete:
            return report
        if workers > 1:
            pool = multiprocessing.get_context("fork").Pool(workers)
        for n in range(start_order, n_max + 1):
            keys = connected_keys(n)
            done = start_done if n == start_order else 0
            counts = report.counts.setdefault(n, [0, 0, 0])
            tasks = [(n, keys[i : i + CHUNK_SIZE], eps, tol) for i in range(done, len(keys), CHUNK_SIZE)]
            if stop_after_chunks is not None:
                tasks = tasks[: max(0, stop_after_chunks - chunks_run)]
            results = pool.imap(process_chunk, tasks) if pool else map(process_chunk, tasks)
            for count, records, survivors, indet in results:
                counts[0] += count
                counts[1] += len(records)
                for rec in survivors:
                    checked = classify(parse_graph6(rec.graph6), eps / 10, tol / 10)
                    if checked.alpha_lt_theta and checked.theta_eq_alphastar:
                        counts[2] += 1
                        report.survivors.append(checked)
                    else:
                        report.indeterminate.append(rec.graph6)
                report.indeterminate.extend(indet)
                if out is not None:
                    out.writelines(_record_line(r) for r in records)
                else:
                    report.records.extend(records)
                done += count
                last_cert = write_graph6(Graph.from_key(n, int(keys[done - 1])))
                chunks_run += 1
                now = time.monotonic()
                if now - last_save > 30:
                    save(n, done)
                    last_save = now
                    log.info("order %d: %d/%d graphs, %.0fs", n, done, len(keys), now - t0)
            if done < len(keys):
                save(n, done)
                return report
            log.info("order %d done: %s (%.1fs)", n, counts, time.monotonic() - t0)
            save(n + 1, 0)
        report.complete = True
        save(n_max + 1, 0)
        return report
    finally:
        if pool is not None:
            pool.close()
            pool.join()
        if out is not None:
            out.close()


def resume(checkpoint_path: str, workers: int = 1, stop_after_chunks: Optional[int] = None) -> ScanReport:
    state = _load_checkpoint(checkpoint_path)
    if state["records_path"] and not os.path.exists(state["records_path"]):
        raise CheckpointError(f"records file {state['records_path']} is missing")
    if state["records_path"] and os.path.getsize(state["records_path"]) < state["records_offset"]:
        raise CheckpointError("records file is shorter than the checkpoint says")
    return scan(
        state["n_max"],
        state["eps"],
        workers,
        checkpoint_path,
        tol=state["tol"],
        records_path=state["records_path"],
        stop_after_chunks=stop_after_chunks,
        _state=state,
    )


def read_records(path: str) -> list[InvariantRecord]:
    with open(path) as fh:
        return [_record_from_json(json.loads(line)) for line in fh if line.strip()]


# -- survivors -------------------------------------------------------------------


@dataclass
class SurvivorNote:
    record: InvariantRecord
    fig1_isomorphic: bool
    witness_value: Optional[float]
    note: str


def _isomorphism(src: Graph, dst: Graph) -> list[int]:
    """perm with dst = src.relabel(perm), for isomorphic graphs."""
    os_, od = kernels.canonical_order(src.n, src.adj), kernels.canonical_order(dst.n, dst.adj)
    perm = [0] * src.n
    for pos in range(src.n):
        perm[os_[pos]] = od[pos]
    return perm


def survivor_analysis(report: ScanReport) -> list[SurvivorNote]:
    """Match each survivor against the ten-proposition exclusivity graph and,
    for the match, evaluate the four-dimensional representation on it."""
    from .quantum import fig1_graph, fig1_representation

    fig1 = fig1_graph()
    notes = []
    for rec in report.survivors:
        g = parse_graph6(rec.graph6)
        if g.n == fig1.n and are_isomorphic(g, fig1):
            perm = _isomorphism(fig1, g)
            vecs, handle = fig1_representation()
            mapped = [None] * g.n
            for v, w in enumerate(perm):
                mapped[w] = vecs[v]
            value = theta_lower_bound_from_representation(g, mapped, handle)
            notes.append(SurvivorNote(rec, True, value, "dim-4 witness: ten-proposition projectors"))
        else:
            notes.append(SurvivorNote(rec, False, None, "dim-4 witness: none supplied"))
    return notes

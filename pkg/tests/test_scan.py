import json

import pytest

from ctxgraph.graphs import Graph, are_isomorphic, connected_keys, count_connected, cycle_graph, parse_graph6, write_graph6
from ctxgraph.invariants import classify, independence_number, lovasz_theta
from ctxgraph.quantum import fig1_graph
from ctxgraph.scan import (
    CHUNK_SIZE,
    CheckpointError,
    ScanReport,
    read_records,
    resume,
    scan,
    process_chunk,
    survivor_analysis,
)


def _report_bytes(report, records_path=None):
    recs = report.records if records_path is None else read_records(records_path)
    return report.summary_json() + "".join(json.dumps(r.to_json(), sort_keys=True) + "\n" for r in recs)


def test_small_scan_counts():
    r = scan(7)
    assert r.complete
    assert {n: c[0] for n, c in r.counts.items()} == {n: count_connected(n) for n in range(1, 8)}
    assert [r.counts[n][1] for n in range(1, 8)] == [0, 0, 0, 0, 1, 3, 33]
    assert r.totals()[2] == 0 and r.survivors == [] and r.indeterminate == []
    for graphs, lt, surv in r.counts.values():
        assert surv <= lt <= graphs


def test_records_are_alpha_lt_theta_and_sandwiched():
    r = scan(7)
    assert len(r.records) == 37
    for rec in r.records:
        g = parse_graph6(rec.graph6)
        assert rec.alpha == independence_number(g)
        assert rec.alpha_lt_theta is True
        assert rec.alpha < rec.theta <= float(rec.alphastar) + 1e-9
    # the single order-5 graph with alpha < theta is the pentagon
    assert are_isomorphic(parse_graph6(r.records[0].graph6), cycle_graph(5))


def test_tight_graphs_skip_sdp_soundly():
    # graphs screened as alpha == clique cover really have theta == alpha
    keys = connected_keys(6)
    count, records, _, _ = process_chunk((6, keys, 1e-5, 1e-7))
    flagged = {rec.graph6 for rec in records}
    for k in keys[::7]:
        g = Graph.from_key(6, int(k))
        if write_graph6(g) not in flagged:
            assert abs(lovasz_theta(g).value - independence_number(g)) <= 1e-5


def test_worker_count_determinism():
    a = scan(7, workers=1)
    b = scan(7, workers=4)
    assert _report_bytes(a) == _report_bytes(b)


def test_checkpoint_interrupt_and_resume(tmp_path):
    straight = scan(8)
    ck = str(tmp_path / "ck.json")
    n8_chunks = -(-count_connected(8) // CHUNK_SIZE)
    # orders 1..7 are one chunk each; stop halfway through order 8
    partial = scan(8, checkpoint_path=ck, stop_after_chunks=7 + n8_chunks // 2)
    assert not partial.complete
    state = json.load(open(ck))
    assert state["order"] == 8 and 0 < state["done"] < count_connected(8)
    assert state["format"] == "ctxgraph-scan/1" and state["last_cert"]
    resumed = resume(ck, workers=2)
    assert resumed.complete
    assert resumed.summary_json() == straight.summary_json()
    assert _report_bytes(resumed, resumed.records_path) == _report_bytes(straight)
    # resuming a finished checkpoint returns immediately with the same report
    again = resume(ck)
    assert again.summary_json() == straight.summary_json()


def test_corrupt_checkpoint(tmp_path):
    ck = tmp_path / "ck.json"
    ck.write_text("{not json")
    with pytest.raises(CheckpointError):
        resume(str(ck))
    ck.write_text(json.dumps({"format": "other/9"}))
    with pytest.raises(CheckpointError, match="format"):
        resume(str(ck))
    ck.write_text(json.dumps({"format": "ctxgraph-scan/1"}))
    with pytest.raises(CheckpointError, match="missing"):
        resume(str(ck))


def test_scan_argument_checks():
    with pytest.raises(ValueError):
        scan(0)
    with pytest.raises(ValueError):
        scan(11)
    with pytest.raises(ValueError):
        scan(5, workers=0)
    with pytest.raises(ValueError):
        scan(5, eps=0)


def test_survivor_analysis():
    assert survivor_analysis(ScanReport(7, 1e-5, 1e-7)) == []
    # feed a relabelled copy of the ten-proposition graph as a survivor
    g = fig1_graph().relabel([3, 7, 1, 0, 9, 2, 8, 5, 4, 6])
    rec = classify(g)
    other = classify(parse_graph6("Dhc"))
    report = ScanReport(10, 1e-5, 1e-7, survivors=[rec, other])
    notes = survivor_analysis(report)
    assert notes[0].fig1_isomorphic and abs(notes[0].witness_value - 3.5) <= 1e-10
    assert not notes[1].fig1_isomorphic and notes[1].witness_value is None
    assert notes[1].note == "dim-4 witness: none supplied"


def test_summary_json_shape():
    r = scan(5)
    s = json.loads(r.summary_json())
    assert s["totals"] == {"graphs": 1 + 1 + 2 + 6 + 21, "alpha_lt_theta": 1, "survivors": 0}
    assert s["per_order"]["5"] == {"graphs": 21, "alpha_lt_theta": 1, "survivors": 0}


def test_solver_failure_quarantines_graph(monkeypatch):
    import ctxgraph.scan as scan_mod
    from ctxgraph.invariants import SolverError

    def boom(g, tol):
        raise SolverError("forced")

    monkeypatch.setattr(scan_mod, "lovasz_theta", boom)
    r = scan(6)
    assert r.complete
    assert len(r.indeterminate) == 1 + 3  # every graph that needed an SDP
    assert r.totals()[1] == 0

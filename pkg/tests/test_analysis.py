import math

import pytest
from hypothesis import given, strategies as st

from ctxgraph.analysis import (
    ExperimentDataError,
    ExperimentRecord,
    bundled_table1,
    ideal_probabilities,
    load_experiment_csv,
    parse_experiment_csv,
    s_value,
    table_report,
    wnc_bound,
)
from ctxgraph.quantum import Proposition, inequality_fig1

MEASURED = [0.24091, 0.30187, 0.28057, 0.50375, 0.47976, 0.47511, 0.43765, 0.24296, 0.25704, 0.24751]
SIGMAS = [0.00021, 0.00020, 0.00020, 0.00014, 0.00014, 0.00034, 0.00015, 0.00051, 0.00052, 0.00035]


def test_bundled_table():
    recs = bundled_table1()
    assert len(recs) == 10
    assert recs[0].measured == 0.24091
    assert [r.measured for r in recs] == MEASURED
    assert [r.sigma for r in recs] == SIGMAS
    assert [r.proposition for r in recs] == inequality_fig1().propositions


def test_s_value_experimental():
    s, sig = s_value(bundled_table1(), inequality_fig1())
    # independent recomputation from the transcribed numbers
    assert s == pytest.approx(sum(MEASURED), abs=1e-12)
    assert sig == pytest.approx(math.sqrt(sum(x * x for x in SIGMAS)), abs=1e-15)
    assert round(s, 4) == 3.4671
    assert round(sig, 4) == 0.0010


def test_s_value_ideal_and_zero():
    ineq = inequality_fig1()
    ideal = [ExperimentRecord(p, q, 0.0) for p, q in zip(ineq.propositions, ideal_probabilities())]
    assert s_value(ideal, ineq) == (pytest.approx(3.5, abs=1e-12), 0.0)
    zero = [ExperimentRecord(p, 0.0, 0.0) for p in ineq.propositions]
    assert s_value(zero, ineq) == (0.0, 0.0)


def test_s_value_coverage_errors():
    ineq = inequality_fig1()
    recs = bundled_table1()
    with pytest.raises(ExperimentDataError, match="missing 10\\|35"):
        s_value(recs[:-1], ineq)
    with pytest.raises(ExperimentDataError, match="duplicate propositions: 010\\|012"):
        s_value(recs + recs[:1], ineq)
    extra = recs + [ExperimentRecord(Proposition.parse("1|4"), 0.5, 0.0)]
    with pytest.raises(ExperimentDataError, match="not in the inequality 1\\|4"):
        s_value(extra, ineq)


def test_wnc_bound_values():
    b = wnc_bound(3.4671, 0.0010, 3, 3.5)
    assert abs(b.value - 0.0658) <= 5e-4
    assert b.sigma == pytest.approx(0.0020)
    assert not b.clamped
    s, sig = s_value(bundled_table1(), inequality_fig1())
    assert abs(wnc_bound(s, sig, 3, 3.5).value - 0.0658) <= 5e-4
    assert wnc_bound(3.5, 0, 3, 3.5).value == 0
    assert wnc_bound(3.0, 0, 3, 3.5).value == 1


def test_wnc_bound_clamping_and_errors():
    hi = wnc_bound(3.6, 0.01, 3, 3.5)
    assert hi.value == 0 and hi.clamped
    lo = wnc_bound(2.0, 0.01, 3, 3.5)
    assert lo.value == 1 and lo.clamped
    with pytest.raises(ValueError):
        wnc_bound(3.2, 0.0, 3.5, 3.5)
    with pytest.raises(ValueError):
        wnc_bound(3.2, 0.0, 4, 3.5)


reals = st.floats(-10, 10, allow_nan=False)


@given(reals, reals, st.floats(0.01, 5), st.floats(0.001, 0.99))
def test_wnc_monotone_in_s(nc, s, span, frac):
    c = nc + span
    s1 = nc + frac * span
    s2 = s1 + span * (1 - frac) / 2
    assert wnc_bound(s2, 0, nc, c).value < wnc_bound(s1, 0, nc, c).value


@given(st.floats(0.0, 1.0), st.floats(0.1, 10), st.floats(0.1, 10))
def test_wnc_scale_covariance(frac, span, k):
    nc = 3.0
    a = wnc_bound(nc + frac * span, 0, nc, nc + span).value
    b = wnc_bound(nc + k * frac * span, 0, nc, nc + k * span).value
    assert a == pytest.approx(b, abs=1e-12)


def test_csv_parsing(tmp_path):
    assert parse_experiment_csv("") == []
    recs = parse_experiment_csv("proposition,measured,sigma\n10|35,0.24751,0.00035\n")
    assert recs == [ExperimentRecord(Proposition.parse("10|35"), 0.24751, 0.00035)]
    bad = "proposition,measured,sigma\n10|35,0.2,0.1\n10|35,1.2,0.1\n"
    with pytest.raises(ExperimentDataError, match=":3:.*outside"):
        parse_experiment_csv(bad)
    with pytest.raises(ExperimentDataError, match=":1: expected header"):
        parse_experiment_csv("p,m,s\n")
    with pytest.raises(ExperimentDataError, match=":2: expected 3 fields"):
        parse_experiment_csv("proposition,measured,sigma\n10|35,0.2\n")
    with pytest.raises(ExperimentDataError, match=":2:"):
        parse_experiment_csv("proposition,measured,sigma\n10|35,abc,0.1\n")
    with pytest.raises(ExperimentDataError, match=":2:.*negative"):
        parse_experiment_csv("proposition,measured,sigma\n10|35,0.2,-0.1\n")
    f = tmp_path / "d.csv"
    f.write_text("proposition,measured,sigma\n01|02,0.3,0.01\n")
    assert len(load_experiment_csv(f)) == 1


def test_table_report():
    ideal = table_report()
    assert "P(010|012)" in ideal and "3.50" in ideal and "W_NC" not in ideal
    full = table_report(records=bundled_table1())
    assert "3.4671 +- 0.0010" in full
    assert "0.24091 +- 0.00021" in full
    assert "W_NC <= 0.065" in full

"""Upper bound on the noncontextual content from measured probabilities.

If the observed correlations are a mixture  w * noncontextual + (1 - w) * other,
the inequality value satisfies  S <= w * omega_nc + (1 - w) * omega_c,  so

    w <= (omega_c - S) / (omega_c - omega_nc).

Errors are propagated in quadrature, treating the per-proposition standard
errors as independent.
"""

from __future__ import annotations

import csv
import io
import math
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional, Sequence

from .quantum import Inequality, Proposition, State, inequality_fig1, prepare_state, probability

CSV_HEADER = ("proposition", "measured", "sigma")


class ExperimentDataError(ValueError):
    """Malformed or inconsistent experimental data."""


@dataclass(frozen=True)
class ExperimentRecord:
    proposition: Proposition
    measured: float
    sigma: float

    def __post_init__(self):
        if not 0.0 <= self.measured <= 1.0:
            raise ValueError(f"probability {self.measured} outside [0, 1]")
        if not self.sigma >= 0.0:
            raise ValueError(f"standard error {self.sigma} is negative")


@dataclass(frozen=True)
class WncBound:
    value: float
    sigma: float
    inputs: tuple[float, float, float]  # (S_exp, omega_nc, omega_c)
    clamped: bool = False

    def __str__(self) -> str:
        s = f"W_NC <= {self.value:.4f} +- {self.sigma:.4f}"
        return s + " (clamped to [0, 1])" if self.clamped else s


def s_value(records: Sequence[ExperimentRecord], ineq: Inequality) -> tuple[float, float]:
    """Weighted sum of measured probabilities and its quadrature error."""
    counts = Counter(r.proposition for r in records)
    dups = sorted(str(p) for p, c in counts.items() if c > 1)
    if dups:
        raise ExperimentDataError("duplicate propositions: " + ", ".join(dups))
    wanted = {p: c for p, c in ineq.terms}
    missing = [str(p) for p in wanted if p not in counts]
    extra = sorted(str(p) for p in counts if p not in wanted)
    if missing or extra:
        parts = []
        if missing:
            parts.append("missing " + ", ".join(missing))
        if extra:
            parts.append("not in the inequality " + ", ".join(extra))
        raise ExperimentDataError("records do not match the inequality: " + "; ".join(parts))
    value = sum(wanted[r.proposition] * r.measured for r in records)
    sigma = math.sqrt(sum((wanted[r.proposition] * r.sigma) ** 2 for r in records))
    return float(value), sigma


def wnc_bound(s_exp: float, sigma: float, omega_nc: float, omega_c: float) -> WncBound:
    if not omega_c > omega_nc:
        raise ValueError(f"bound undefined: omega_c ({omega_c}) must exceed omega_nc ({omega_nc})")
    if sigma < 0:
        raise ValueError("sigma must be non-negative")
    span = omega_c - omega_nc
    raw = (omega_c - s_exp) / span
    value = min(1.0, max(0.0, raw))
    return WncBound(value, sigma / span, (s_exp, omega_nc, omega_c), clamped=value != raw)


def parse_experiment_csv(text: str, source: str = "<input>") -> list[ExperimentRecord]:
    """Parse CSV text with header ``proposition,measured,sigma``."""
    rows = csv.reader(io.StringIO(text))
    out: list[ExperimentRecord] = []
    header_seen = False
    for lineno, row in enumerate(rows, start=1):
        if not row or all(not c.strip() for c in row):
            continue
        cells = [c.strip() for c in row]
        if not header_seen:
            if tuple(cells) != CSV_HEADER:
                raise ExperimentDataError(f"{source}:{lineno}: expected header {','.join(CSV_HEADER)}")
            header_seen = True
            continue
        if len(cells) != 3:
            raise ExperimentDataError(f"{source}:{lineno}: expected 3 fields, got {len(cells)}")
        try:
            prop = Proposition.parse(cells[0])
            rec = ExperimentRecord(prop, float(cells[1]), float(cells[2]))
        except ValueError as exc:
            raise ExperimentDataError(f"{source}:{lineno}: {exc}") from None
        out.append(rec)
    return out


def load_experiment_csv(path) -> list[ExperimentRecord]:
    with open(path, encoding="utf-8") as f:
        return parse_experiment_csv(f.read(), str(path))


def bundled_table1_path() -> Path:
    return Path(__file__).with_name("data") / "table1.csv"


def bundled_table1() -> list[ExperimentRecord]:
    """The ten measured probabilities shipped with the package."""
    return load_experiment_csv(bundled_table1_path())


def ideal_probabilities(ineq: Optional[Inequality] = None, state: Optional[State] = None) -> list[float]:
    ineq = ineq or inequality_fig1()
    state = state or prepare_state()
    return [probability(state, p) for p in ineq.propositions]


def table_report(ineq: Optional[Inequality] = None, records: Optional[Iterable[ExperimentRecord]] = None) -> str:
    """Aligned text table: one row per proposition plus the total and, with
    data, the noncontextual-content bound."""
    ineq = ineq or inequality_fig1()
    ideal = ideal_probabilities(ineq)
    recs = None if records is None else list(records)
    by_prop = {} if recs is None else {r.proposition: r for r in recs}
    lines = []
    if recs is None:
        lines.append(f"{'Probability':<14}{'Ideal':>8}")
    else:
        lines.append(f"{'Probability':<14}{'Experimental result':>22}{'Ideal':>8}")
    for (p, c), q in zip(ineq.terms, ideal):
        label = f"P({p})" if c == 1 else f"{c:g}*P({p})"
        if recs is None:
            lines.append(f"{label:<14}{q:>8.2f}")
        else:
            r = by_prop.get(p)
            exp = "-" if r is None else f"{r.measured:.5f} +- {r.sigma:.5f}"
            lines.append(f"{label:<14}{exp:>22}{q:>8.2f}")
    s_ideal = sum(c * q for (_, c), q in zip(ineq.terms, ideal))
    if recs is None:
        lines.append(f"{'Omega':<14}{s_ideal:>8.2f}")
        return "\n".join(lines) + "\n"
    s, sig = s_value(recs, ineq)
    lines.append(f"{'Omega':<14}{f'{s:.4f} +- {sig:.4f}':>22}{s_ideal:>8.2f}")
    if ineq.omega_nc is not None and ineq.omega_c is not None:
        lines.append("")
        lines.append(str(wnc_bound(s, sig, ineq.omega_nc, ineq.omega_c)))
    return "\n".join(lines) + "\n"

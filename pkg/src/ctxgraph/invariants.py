"""Independence number, Lovasz number and fractional packing number of a graph,
and the classification used by the scan.

Edges mean exclusivity throughout: adjacent vertices are propositions that
cannot both be true, and in an orthogonal representation adjacent vertices
get orthogonal vectors.  With that convention

    alpha(G) <= theta(G) <= alpha*(G)

where theta is the optimum of  max <J, X>  s.t.  tr X = 1,  X_ij = 0 for
every edge ij,  X PSD.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional, Sequence

import numpy as np

from ._backend import kernels
from .graphs import Graph, write_graph6
from .solvers import OPTIMAL, LinearProgram, SdpProblem, solve_lp, solve_sdp

DEFAULT_EPS = 1e-5
DEFAULT_SDP_TOL = 1e-7
# slack for rounding in the eigenvalue computations behind the certified bounds
_ROUNDING = 1e-12


class SolverError(RuntimeError):
    """A solver did not reach a certified answer."""


class OrthogonalityError(ValueError):
    def __init__(self, pair, overlap):
        super().__init__(f"vertices {pair[0]} and {pair[1]} are adjacent but their vectors overlap by {overlap:.3g}")
        self.pair = pair


@dataclass(frozen=True)
class CliqueSet:
    cliques: tuple[int, ...]  # vertex bitmasks, ascending

    def as_lists(self) -> list[list[int]]:
        return [[v for v in range(m.bit_length()) if (m >> v) & 1] for m in self.cliques]

    def __len__(self):
        return len(self.cliques)


class Theta(NamedTuple):
    """Certified interval ``[value, value + gap]`` containing theta."""

    value: float
    gap: float

    @property
    def lower(self) -> float:
        return self.value

    @property
    def upper(self) -> float:
        return self.value + self.gap


@dataclass(frozen=True)
class InvariantRecord:
    graph6: str
    alpha: int
    theta: float
    theta_gap: float
    alphastar: Optional[Fraction]
    alpha_lt_theta: Optional[bool]
    theta_eq_alphastar: Optional[bool]
    status: str = "ok"  # or "indeterminate"

    CSV_HEADER = "graph6,alpha,theta,theta_gap,alphastar_num,alphastar_den,flags"

    @property
    def flags(self) -> str:
        names = []
        if self.alpha_lt_theta:
            names.append("alpha_lt_theta")
        if self.theta_eq_alphastar:
            names.append("theta_eq_alphastar")
        if self.status != "ok":
            names.append(self.status)
        return ";".join(names)

    def to_csv(self) -> str:
        num = den = ""
        if self.alphastar is not None:
            num, den = str(self.alphastar.numerator), str(self.alphastar.denominator)
        return f"{self.graph6},{self.alpha},{self.theta:.6f},{self.theta_gap:.1e},{num},{den},{self.flags}"

    def to_json(self) -> dict:
        return {
            "graph6": self.graph6,
            "alpha": self.alpha,
            "theta": round(self.theta, 9),
            "theta_gap": float(f"{self.theta_gap:.3e}"),
            "alphastar": None if self.alphastar is None else str(self.alphastar),
            "alpha_lt_theta": self.alpha_lt_theta,
            "theta_eq_alphastar": self.theta_eq_alphastar,
            "status": self.status,
        }


def independence_number(g: Graph) -> int:
    """Exact alpha(G) by branch and bound (maximum clique of the complement)."""
    return int(kernels.independence_number(g.n, g.adj))


def clique_cover_at_most(g: Graph, k: int) -> bool:
    return bool(kernels.clique_cover_at_most(g.n, g.adj, k))


def maximal_cliques(g: Graph) -> CliqueSet:
    return CliqueSet(tuple(int(m) for m in kernels.maximal_cliques(g.n, g.adj)))


def packing_lp(g: Graph, cliques: Optional[CliqueSet] = None) -> LinearProgram:
    if cliques is None:
        cliques = maximal_cliques(g)
    rows = [([1 if (c >> v) & 1 else 0 for v in range(g.n)], "<=", 1) for c in cliques.cliques]
    return LinearProgram([1] * g.n, rows, [(0, 1)] * g.n)


def fractional_packing(g: Graph, exact: bool = True):
    """alpha*(G): max sum w_i, 0 <= w_i <= 1, sum over each maximal clique <= 1.

    Returns a ``Fraction`` in exact mode and a float otherwise.
    """
    sol = solve_lp(packing_lp(g), exact=exact)
    if sol.status != OPTIMAL:
        raise SolverError(f"packing LP for {write_graph6(g)}: {sol.status}")
    return sol.value


def theta_sdp(g: Graph) -> SdpProblem:
    n = g.n
    edges = g.edges()
    A = np.zeros((1 + len(edges), n, n))
    A[0] = np.eye(n)
    for k, (i, j) in enumerate(edges, start=1):
        A[k, i, j] = A[k, j, i] = 1.0
    b = np.zeros(1 + len(edges))
    b[0] = 1.0
    return SdpProblem(np.ones((n, n)), A, b)


def _certified_bounds(g: Graph, X: np.ndarray, y: np.ndarray) -> tuple[float, float]:
    """Rigorous [lower, upper] for theta from approximate primal/dual points."""
    n = g.n
    edges = g.edges()
    Xr = 0.5 * (X + X.T)
    for i, j in edges:
        Xr[i, j] = Xr[j, i] = 0.0
    lam = np.linalg.eigvalsh(Xr)[0]
    if lam < 0:
        Xr = Xr + (-lam + _ROUNDING) * np.eye(n)
    lower = float(Xr.sum() / np.trace(Xr)) - n * _ROUNDING
    Z = y[0] * np.eye(n) - np.ones((n, n))
    for k, (i, j) in enumerate(edges, start=1):
        Z[i, j] += y[k]
        Z[j, i] += y[k]
    mu = np.linalg.eigvalsh(Z)[0]
    upper = float(y[0]) + max(0.0, -mu) + n * _ROUNDING
    return lower, upper


def lovasz_theta(g: Graph, tol: float = DEFAULT_SDP_TOL) -> Theta:
    """Certified Lovasz number of ``g``: ``theta`` lies in ``[value, value + gap]``."""
    p = theta_sdp(g)
    for attempt_tol in (tol, tol / 10, tol / 100):
        sol = solve_sdp(p, tol=attempt_tol * 0.5)
        lower, upper = _certified_bounds(g, sol.primal, sol.dual)
        if upper - lower <= tol:
            return Theta(lower, max(upper - lower, 0.0))
    raise SolverError(f"theta SDP for {write_graph6(g)}: gap {upper - lower:.2e} > {tol:.1e} ({sol.status})")


def theta_lower_bound_from_representation(
    g: Graph, vectors: Sequence[Sequence[complex]], handle: Sequence[complex], tol: float = 1e-10
) -> float:
    """sum_i |<handle|v_i>|^2 for unit vectors orthogonal on every edge of ``g``."""
    V = [np.asarray(v, dtype=complex) for v in vectors]
    h = np.asarray(handle, dtype=complex)
    if len(V) != g.n:
        raise ValueError(f"need {g.n} vectors, got {len(V)}")
    for k, v in enumerate(V):
        if abs(np.linalg.norm(v) - 1) > tol:
            raise ValueError(f"vector {k} is not a unit vector")
    if abs(np.linalg.norm(h) - 1) > tol:
        raise ValueError("handle is not a unit vector")
    for i, j in g.edges():
        ov = abs(np.vdot(V[i], V[j]))
        if ov > tol:
            raise OrthogonalityError((i, j), ov)
    return float(sum(abs(np.vdot(h, v)) ** 2 for v in V))


def decide_lt(alpha: int, th: Theta, eps: float) -> Optional[bool]:
    """alpha < theta, conservatively; None when the interval straddles eps."""
    if th.lower - alpha > eps:
        return True
    if th.upper - alpha <= eps:
        return False
    return None


def decide_eq(alphastar, th: Theta, eps: float) -> Optional[bool]:
    """theta == alpha*, conservatively; None when the interval straddles eps."""
    a = float(alphastar)
    if a - th.upper < eps and a - th.lower < eps:
        return True
    if a - th.lower >= eps and a - th.upper >= eps:
        return False
    return None


def classify(g: Graph, eps: float = DEFAULT_EPS, tol: float = DEFAULT_SDP_TOL) -> InvariantRecord:
    """All three numbers of ``g`` and the two flags.

    A flag is only set when the certified interval for theta decides it; an
    undecided flag is retried once with a ten times tighter SDP tolerance and
    otherwise reported with status ``indeterminate``.
    """
    alpha = independence_number(g)
    alphastar = fractional_packing(g, exact=True)
    th = lovasz_theta(g, tol)
    lt, eq = decide_lt(alpha, th, eps), decide_eq(alphastar, th, eps)
    if lt is None or eq is None:
        th = lovasz_theta(g, tol / 10)
        lt, eq = decide_lt(alpha, th, eps), decide_eq(alphastar, th, eps)
    status = "ok" if lt is not None and eq is not None else "indeterminate"
    return InvariantRecord(write_graph6(g), alpha, th.value, th.gap, alphastar, lt, eq, status)

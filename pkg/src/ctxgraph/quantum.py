"""Two-qubit realisation of the ten-proposition inequality.

Six dichotomic tests are Pauli products on C^2 (x) C^2; propositions assign
outcome bits to two or three mutually compatible tests (bit 0 is eigenvalue
-1, bit 1 is eigenvalue +1).  The module evaluates the inequality on a state,
builds the exclusivity graph of the propositions, and checks it against the
orthogonality graph of their joint projectors.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .graphs import Graph

TOL = 1e-12

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

# test id -> (first factor, second factor)
TESTS = {0: "XI", 1: "IZ", 2: "XZ", 3: "IX", 4: "ZI", 5: "ZX"}


class CompatibilityError(ValueError):
    """Observables in a context do not commute."""


@dataclass(frozen=True)
class Observable:
    matrix: np.ndarray = field(compare=False)
    label: str

    def __post_init__(self):
        m = self.matrix
        if m.shape != (4, 4) or np.abs(m - m.conj().T).max() > TOL:
            raise ValueError(f"observable {self.label} is not a 4x4 Hermitian matrix")


@dataclass(frozen=True)
class State:
    amplitudes: np.ndarray = field(compare=False)

    def __post_init__(self):
        if abs(np.vdot(self.amplitudes, self.amplitudes).real - 1) > TOL:
            raise ValueError("state is not normalised")


@dataclass(frozen=True)
class Proposition:
    """``outcomes|context``, e.g. ``010|012``: test 0 gave 0, test 1 gave 1, test 2 gave 0."""

    context: tuple[int, ...]
    outcomes: tuple[int, ...]

    def __post_init__(self):
        if len(self.context) != len(self.outcomes):
            raise ValueError("context and outcomes differ in length")
        if len(set(self.context)) != len(self.context):
            raise ValueError("tests in a context must be distinct")
        if any(b not in (0, 1) for b in self.outcomes):
            raise ValueError("outcomes are bits")

    @classmethod
    def parse(cls, text: str) -> "Proposition":
        try:
            outs, tests = text.strip().split("|")
        except ValueError:
            raise ValueError(f"expected 'outcomes|tests', got {text!r}") from None
        if not outs.isdigit() or not tests.isdigit():
            raise ValueError(f"expected digit strings in {text!r}")
        return cls(tuple(int(t) for t in tests), tuple(int(b) for b in outs))

    def __str__(self) -> str:
        return "".join(map(str, self.outcomes)) + "|" + "".join(map(str, self.context))

    def assignment(self) -> dict[int, int]:
        return dict(zip(self.context, self.outcomes))


@dataclass
class Inequality:
    terms: list  # (Proposition, coefficient)
    omega_nc: Optional[float] = None
    omega_q: Optional[float] = None
    omega_c: Optional[float] = None

    @property
    def propositions(self) -> list[Proposition]:
        return [p for p, _ in self.terms]


def pauli_observable(first: str, second: str) -> Observable:
    return Observable(np.kron(PAULI[first], PAULI[second]), first + second)


def test_observable(test_id: int) -> Observable:
    if test_id not in TESTS:
        raise ValueError(f"test id must be 0..5, got {test_id}")
    a, b = TESTS[test_id]
    obs = pauli_observable(a, b)
    return Observable(obs.matrix, str(test_id))


test_observable.__test__ = False  # not a pytest test


def prepare_state() -> State:
    """(|0> + |3>)/sqrt(2)."""
    return State(np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2))


def basis_state(k: int) -> State:
    v = np.zeros(4, dtype=complex)
    v[k] = 1
    return State(v)


def eigenprojector(test_id: int, bit: int) -> np.ndarray:
    s = 1 if bit == 1 else -1
    return (np.eye(4) + s * test_observable(test_id).matrix) / 2


def check_compatible(context: Sequence[int]):
    for a, b in itertools.combinations(context, 2):
        A, B = test_observable(a).matrix, test_observable(b).matrix
        if np.linalg.norm(A @ B - B @ A) > TOL:
            raise CompatibilityError(f"tests {a} and {b} do not commute")


def joint_projector(p: Proposition) -> np.ndarray:
    check_compatible(p.context)
    P = np.eye(4, dtype=complex)
    for t, bit in zip(p.context, p.outcomes):
        P = P @ eigenprojector(t, bit)
    return P


def probability(state: State, p: Proposition) -> float:
    """Born probability <psi|P|psi> of the joint projector."""
    psi = state.amplitudes
    return float(np.vdot(psi, joint_projector(p) @ psi).real)


def sequential_probability(state: State, p: Proposition, order: Optional[Sequence[int]] = None) -> float:
    """Probability of the outcome sequence under successive projective (Lueders) updates."""
    check_compatible(p.context)
    a = p.assignment()
    psi = state.amplitudes.copy()
    for t in order if order is not None else p.context:
        psi = eigenprojector(t, a[t]) @ psi
    return float(np.vdot(psi, psi).real)


def inequality_fig1() -> Inequality:
    """The ten-term inequality with bounds (3, 3.5, 3.5)."""
    tokens = "010|012 111|012 01|02 00|03 11|03 00|14 01|25 010|345 111|345 10|35".split()
    return Inequality([(Proposition.parse(t), 1) for t in tokens], 3, 3.5, 3.5)


def evaluate_inequality(ineq: Inequality, state: State) -> float:
    return float(sum(c * probability(state, p) for p, c in ineq.terms))


def exclusive(p: Proposition, q: Proposition) -> bool:
    """True if some shared test gets different outcomes in ``p`` and ``q``."""
    a, b = p.assignment(), q.assignment()
    return any(a[t] != b[t] for t in a.keys() & b.keys())


def exclusivity_graph(props: Sequence[Proposition]) -> Graph:
    if not props:
        raise ValueError("need at least one proposition")
    n = len(props)
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n) if exclusive(props[i], props[j])])


def _check_projector(P: np.ndarray, tol: float):
    if np.abs(P - P.conj().T).max() > tol or np.abs(P @ P - P).max() > tol:
        raise ValueError("input is not an orthogonal projector")


def orthogonality_graph(projectors: Sequence[np.ndarray], tol: float = 1e-10) -> Graph:
    for P in projectors:
        _check_projector(P, tol)
    n = len(projectors)
    edges = [
        (i, j)
        for i in range(n)
        for j in range(i + 1, n)
        if np.linalg.norm(projectors[i] @ projectors[j]) <= tol
    ]
    return Graph.from_edges(n, edges)


def projector_vector(P: np.ndarray) -> np.ndarray:
    """Unit vector spanning a rank-1 projector, first nonzero entry real positive."""
    w, V = np.linalg.eigh(P)
    if np.sum(w > 0.5) != 1:
        raise ValueError("projector is not rank 1")
    v = V[:, np.argmax(w)]
    k = int(np.argmax(np.abs(v) > 1e-9))
    return v * (abs(v[k]) / v[k])


def fig1_graph() -> Graph:
    return exclusivity_graph(inequality_fig1().propositions)


def fig1_representation() -> tuple[list[np.ndarray], np.ndarray]:
    """Unit vectors of the ten rank-1 projectors, and the state as handle."""
    vecs = [projector_vector(joint_projector(p)) for p in inequality_fig1().propositions]
    return vecs, prepare_state().amplitudes


def tests_in(props: Iterable[Proposition]) -> list[int]:
    return sorted({t for p in props for t in p.context})


def deterministic_bound(ineq: Inequality) -> float:
    """Largest value of the inequality over all fixed outcome assignments to its tests."""
    tests = tests_in(ineq.propositions)
    best = -np.inf
    for bits in itertools.product((0, 1), repeat=len(tests)):
        a = dict(zip(tests, bits))
        val = sum(c for p, c in ineq.terms if all(a[t] == b for t, b in zip(p.context, p.outcomes)))
        best = max(best, val)
    return best


def parse_inequality(text: str) -> Inequality:
    """Read whitespace-separated terms ``[coef*]outcomes|tests`` and optional
    ``omega_nc=``, ``omega_q=``, ``omega_c=`` entries; ``#`` starts a comment."""
    terms = []
    bounds: dict[str, float] = {}
    for line in text.splitlines():
        for tok in line.split("#", 1)[0].split():
            if "=" in tok:
                key, val = tok.split("=", 1)
                if key not in ("omega_nc", "omega_q", "omega_c"):
                    raise ValueError(f"unknown key {key!r}")
                bounds[key] = float(val)
                continue
            coef: float = 1
            if "*" in tok:
                c, tok = tok.split("*", 1)
                coef = float(c)
            terms.append((Proposition.parse(tok), coef))
    return Inequality(terms, **bounds)


def format_inequality(ineq: Inequality) -> str:
    parts = [str(p) if c == 1 else f"{c}*{p}" for p, c in ineq.terms]
    for key in ("omega_nc", "omega_q", "omega_c"):
        v = getattr(ineq, key)
        if v is not None:
            parts.append(f"{key}={v}")
    return " ".join(parts) + "\n"


def self_check() -> list[tuple[str, bool]]:
    """Quantum consistency checks on the ten-proposition instance."""
    ineq = inequality_fig1()
    psi = prepare_state()
    props = ineq.propositions
    projs = [joint_projector(p) for p in props]
    checks = []
    checks.append(("tests square to identity", all(
        np.abs(test_observable(t).matrix @ test_observable(t).matrix - np.eye(4)).max() <= TOL for t in TESTS)))
    checks.append(("projectors are rank 1", all(abs(np.trace(P).real - 1) <= TOL for P in projs)))
    checks.append(("S = 3.5", abs(evaluate_inequality(ineq, psi) - 3.5) <= TOL))
    checks.append(("sequential = joint", all(
        abs(sequential_probability(psi, p, order) - probability(psi, p)) <= TOL
        for p in props for order in itertools.permutations(p.context))))
    g = exclusivity_graph(props)
    checks.append(("orthogonality graph = exclusivity graph", orthogonality_graph(projs) == g))
    from .invariants import theta_lower_bound_from_representation

    vecs, handle = fig1_representation()
    checks.append(("dim-4 witness = 3.5",
                   abs(theta_lower_bound_from_representation(g, vecs, handle) - 3.5) <= 1e-10))
    checks.append(("assignment bound = 3", deterministic_bound(ineq) == 3))
    return checks

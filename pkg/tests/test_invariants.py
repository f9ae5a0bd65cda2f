import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ctxgraph.graphs import Graph, complement, complete_graph, cycle_graph, empty_graph, enumerate_connected, path_graph
from ctxgraph.invariants import (
    OrthogonalityError,
    Theta,
    classify,
    clique_cover_at_most,
    decide_eq,
    decide_lt,
    fractional_packing,
    independence_number,
    lovasz_theta,
    maximal_cliques,
    theta_lower_bound_from_representation,
)

from oracles import (
    all_cliques,
    brute_alpha,
    brute_fractional_packing,
    brute_maximal_cliques,
    brute_min_clique_cover,
    theta_odd_cycle,
)

SQRT5 = math.sqrt(5)


@st.composite
def random_graphs(draw, min_n=1, max_n=8):
    n = draw(st.integers(min_n, max_n))
    bits = draw(st.lists(st.booleans(), min_size=n * (n - 1) // 2, max_size=n * (n - 1) // 2))
    pairs = [(i, j) for j in range(1, n) for i in range(j)]
    return Graph.from_edges(n, [p for p, b in zip(pairs, bits) if b])


def petersen():
    outer = [(i, (i + 1) % 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, outer + inner + [(i, i + 5) for i in range(5)])


# -- closed forms ------------------------------------------------------------------


def test_c5():
    g = cycle_graph(5)
    assert independence_number(g) == 2
    th = lovasz_theta(g)
    assert abs(th.value - SQRT5) <= 1e-6
    assert th.lower <= SQRT5 + 1e-12 and SQRT5 <= th.upper + 1e-12
    assert fractional_packing(g) == Fraction(5, 2)


@pytest.mark.parametrize("n", [1, 2, 3, 5, 8])
def test_complete_graph(n):
    g = complete_graph(n)
    assert independence_number(g) == 1
    assert abs(lovasz_theta(g).value - 1) <= 1e-6
    assert fractional_packing(g) == 1


@pytest.mark.parametrize("n", [1, 3, 6])
def test_empty_graph(n):
    g = empty_graph(n)
    assert independence_number(g) == n
    assert abs(lovasz_theta(g).value - n) <= 1e-6
    assert fractional_packing(g) == n


@pytest.mark.parametrize("n", [5, 7, 9, 11])
def test_odd_cycles(n):
    g = cycle_graph(n)
    assert abs(lovasz_theta(g).value - theta_odd_cycle(n)) <= 1e-6
    assert fractional_packing(g) == Fraction(n, 2)
    assert independence_number(g) == n // 2


def test_petersen_and_vertex_transitive_product():
    # theta(G) theta(complement G) = n for vertex-transitive G
    p = petersen()
    assert abs(lovasz_theta(p).value - 4) <= 1e-6
    assert abs(lovasz_theta(p).value * lovasz_theta(complement(p)).value - 10) <= 1e-5
    c7 = cycle_graph(7)
    assert abs(lovasz_theta(c7).value * lovasz_theta(complement(c7)).value - 7) <= 1e-5


# -- brute-force oracles -------------------------------------------------------


@settings(max_examples=150, deadline=None)
@given(random_graphs(max_n=10))
def test_alpha_matches_brute_force(g):
    assert independence_number(g) == brute_alpha(g.n, g.adj)


@settings(max_examples=150, deadline=None)
@given(random_graphs(max_n=9))
def test_maximal_cliques_match_brute_force(g):
    cs = maximal_cliques(g)
    assert list(cs.cliques) == brute_maximal_cliques(g.n, g.adj)
    covered = 0
    for m in cs.cliques:
        covered |= m
    assert covered == (1 << g.n) - 1


@settings(max_examples=60, deadline=None)
@given(random_graphs(max_n=6))
def test_clique_cover_matches_brute_force(g):
    k = brute_min_clique_cover(g.n, g.adj)
    assert clique_cover_at_most(g, k)
    assert not clique_cover_at_most(g, k - 1)


@settings(max_examples=25, deadline=None)
@given(random_graphs(max_n=5))
def test_fractional_packing_matches_polytope_vertices(g):
    assert fractional_packing(g) == brute_fractional_packing(g.n, g.adj)


@settings(max_examples=60, deadline=None)
@given(random_graphs(max_n=9))
def test_fractional_packing_matches_all_cliques_lp(g):
    # maximal cliques suffice: compare with an LP over every clique (scipy)
    opt = pytest.importorskip("scipy.optimize")
    cl = all_cliques(g.n, g.adj)
    A = [[1 if (c >> v) & 1 else 0 for v in range(g.n)] for c in cl]
    ref = opt.linprog([-1] * g.n, A_ub=A, b_ub=[1] * len(cl), bounds=[(0, 1)] * g.n, method="highs")
    exact = fractional_packing(g)
    assert float(exact) == pytest.approx(-ref.fun, abs=1e-9)
    assert fractional_packing(g, exact=False) == pytest.approx(float(exact), abs=1e-9)


def _cvxpy_theta(g):
    cp = pytest.importorskip("cvxpy")
    X = cp.Variable((g.n, g.n), symmetric=True)
    cons = [X >> 0, cp.trace(X) == 1] + [X[i, j] == 0 for i, j in g.edges()]
    prob = cp.Problem(cp.Maximize(cp.sum(X)), cons)
    prob.solve(solver="CLARABEL")
    return prob.value


def test_theta_matches_cvxpy_oracle():
    rng = random.Random(11)
    for _ in range(15):
        n = rng.randint(2, 9)
        pairs = [(i, j) for j in range(1, n) for i in range(j)]
        g = Graph.from_edges(n, [p for p in pairs if rng.random() < 0.5])
        th = lovasz_theta(g)
        assert th.value == pytest.approx(_cvxpy_theta(g), abs=1e-5)


def test_theta_certified_interval_width():
    rng = random.Random(5)
    for _ in range(20):
        n = rng.randint(5, 10)
        pairs = [(i, j) for j in range(1, n) for i in range(j)]
        g = Graph.from_edges(n, [p for p in pairs if rng.random() < 0.4])
        th = lovasz_theta(g, tol=1e-7)
        assert 0 <= th.gap <= 1e-7


def test_sandwich_on_all_connected_graphs_up_to_6():
    for n in range(1, 7):
        for g in enumerate_connected(n):
            a, th, s = independence_number(g), lovasz_theta(g), fractional_packing(g)
            assert a <= th.upper + 1e-9
            assert th.lower <= s + 1e-9
            # a cover by alpha cliques certifies alpha = theta = alpha*
            if clique_cover_at_most(g, a):
                assert s == a and abs(th.value - a) <= 1e-6


# -- representation witness --------------------------------------------------------


def test_representation_bound_c5_umbrella():
    # Lovasz umbrella: five unit vectors in R^3 around the handle (0, 0, 1),
    # spaced so that cyclically consecutive ones are orthogonal
    g = cycle_graph(5)
    vecs = []
    for k in range(5):
        phi = 4 * math.pi * k / 5
        z = 5 ** -0.25
        r = math.sqrt(1 - z * z)
        vecs.append([r * math.cos(phi), r * math.sin(phi), z])
    for i, j in g.edges():
        assert abs(np.dot(vecs[i], vecs[j])) < 1e-12
    val = theta_lower_bound_from_representation(g, vecs, [0, 0, 1])
    assert val == pytest.approx(SQRT5, abs=1e-12)


def test_representation_rejects_bad_vectors():
    g = path_graph(2)
    with pytest.raises(OrthogonalityError):
        theta_lower_bound_from_representation(g, [[1, 0], [1, 0]], [1, 0])
    with pytest.raises(ValueError):
        theta_lower_bound_from_representation(g, [[2, 0], [0, 1]], [1, 0])
    with pytest.raises(ValueError):
        theta_lower_bound_from_representation(g, [[1, 0]], [1, 0])


# -- decisions ---------------------------------------------------------------------


def test_decide_rules():
    eps = 1e-5
    assert decide_lt(2, Theta(2.2, 1e-8), eps) is True
    assert decide_lt(2, Theta(2.0, 1e-8), eps) is False
    assert decide_lt(2, Theta(2 + 0.5e-5, 1e-5), eps) is None
    assert decide_eq(Fraction(7, 2), Theta(3.5 - 1e-8, 1e-8), eps) is True
    assert decide_eq(Fraction(5, 2), Theta(SQRT5, 1e-8), eps) is False
    assert decide_eq(Fraction(1), Theta(1 - 1.5e-5, 1e-5), eps) is None


def test_classify_records():
    rec = classify(cycle_graph(5))
    assert rec.to_csv().startswith("Dhc,2,2.236068,")
    assert rec.to_csv().endswith(",5,2,alpha_lt_theta")
    assert (rec.alpha_lt_theta, rec.theta_eq_alphastar, rec.status) == (True, False, "ok")
    rec = classify(complete_graph(5))
    assert rec.to_csv().startswith("D~{,1,1.000000,")
    assert rec.to_csv().endswith(",1,1,theta_eq_alphastar")
    js = rec.to_json()
    assert js["alphastar"] == "1" and js["alpha"] == 1


@pytest.mark.parametrize("g6", ["H@LKZes", "HIC\\\\X~", "I?DjbPtew", "I@NNeZp^w", "I@oQaYfho"])
def test_theta_certifies_on_ill_conditioned_instances(g6):
    # graphs whose Schur complement becomes too ill-conditioned for Cholesky
    # near the optimum; the solver must still certify the gap
    from ctxgraph.graphs import parse_graph6

    g = parse_graph6(g6)
    th = lovasz_theta(g)
    assert th.gap <= 1e-7
    assert classify(g).status == "ok"

"""Minor containment, planarity, tree decompositions, bottleneck sets."""

import itertools
import random

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fmtlab import families, minors
from fmtlab.solver import BudgetExceededError
from fmtlab.structures import Structure, StructureError, TreeDecomposition
from fmtlab.minors import (
    PATTERN_NAMES,
    MinorError,
    find_bottleneck,
    has_minor,
    is_outerplanar,
    is_planar,
    is_r_scattered,
    pattern,
    validate_tree_decomposition,
    wheel_decomposition,
)


def nx_graph(G):
    g = nx.Graph()
    g.add_nodes_from(range(G.n))
    g.add_edges_from(G.edges)
    return g


def random_graph(rng, n, p=0.45):
    edges = [(i, j) for i in range(n) for j in range(i + 1, n)
             if rng.random() < p]
    return Structure.graph(n, edges)


def petersen():
    outer = [(i, (i + 1) % 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    spokes = [(i, 5 + i) for i in range(5)]
    return Structure.graph(10, outer + inner + spokes)


# ---------------------------------------------------------------------------
# named patterns and trivial cases
# ---------------------------------------------------------------------------

def test_patterns_exist():
    for name in PATTERN_NAMES:
        P = pattern(name)
        assert P.is_graph and P.n >= 4
    with pytest.raises(MinorError):
        pattern("k7")


def test_trivial_cases():
    C5 = families.cycle(5)
    assert has_minor(C5, Structure.graph(0))          # empty pattern
    assert has_minor(C5, Structure.graph(3))          # edgeless pattern
    assert not has_minor(C5, families.clique(6))      # pattern too large


# ---------------------------------------------------------------------------
# known answers
# ---------------------------------------------------------------------------

def test_known_minors():
    assert has_minor(families.clique(5), "k4")
    assert has_minor(families.wheel(5), "k4")
    assert has_minor(families.biclique(3, 3), "k4")   # contract a matching
    assert not has_minor(families.cycle(9), "k4")
    # D_4 is K_4-subgraph-free yet contracts onto K_4
    assert has_minor(families.dn(4), "k4")
    assert has_minor(families.dn(3), "k4")
    assert has_minor(petersen(), "k5")
    assert has_minor(petersen(), "k33")
    assert not has_minor(families.dn(9), "k5")
    assert has_minor(families.biclique(2, 3), "k23")


def test_planarity_knowns():
    assert is_planar(families.wheel(9))
    assert is_planar(families.dn(6))
    grid = Structure.graph(9, [(r * 3 + c, r * 3 + c + 1)
                               for r in range(3) for c in range(2)]
                              + [(r * 3 + c, (r + 1) * 3 + c)
                                 for r in range(2) for c in range(3)])
    assert is_planar(grid)
    assert not is_planar(families.clique(5))
    assert not is_planar(families.biclique(3, 3))
    assert not is_planar(petersen())


def test_outerplanarity_knowns():
    fan = Structure.graph(5, [(0, i) for i in range(1, 5)]
                             + [(i, i + 1) for i in range(1, 4)])
    assert is_outerplanar(fan)
    assert is_outerplanar(families.cycle(8))
    assert not is_outerplanar(families.clique(4))
    assert not is_outerplanar(families.biclique(2, 3))
    assert not is_outerplanar(families.wheel(5))


def test_minor_found_across_components():
    G = Structure.graph(9, families.clique(4).edges + [(5, 6), (7, 8)])
    assert has_minor(G, "k4")


def test_budget_exhaustion():
    # non-planar, so the prefilter cannot answer and search must start
    with pytest.raises(BudgetExceededError):
        has_minor(families.clique(6), "k5", budget=1)


# ---------------------------------------------------------------------------
# cross-validation against an independent planarity algorithm
# ---------------------------------------------------------------------------

def test_wagner_equivalence_on_random_graphs():
    rng = random.Random(0xC0FFEE)
    for _ in range(120):
        G = random_graph(rng, rng.randint(1, 9))
        planar = nx.check_planarity(nx_graph(G))[0]
        obstructed = has_minor(G, "k5") or has_minor(G, "k33")
        assert obstructed == (not planar)
        assert is_planar(G) == planar


def test_outerplanar_equivalence_on_random_graphs():
    rng = random.Random(0xFACADE)
    for _ in range(120):
        G = random_graph(rng, rng.randint(1, 8), p=0.3)
        apex = nx_graph(G)
        apex.add_edges_from((G.n, v) for v in range(G.n))
        oracle = nx.check_planarity(apex)[0]
        obstructed = has_minor(G, "k4") or has_minor(G, "k23")
        assert obstructed == (not oracle)
        assert is_outerplanar(G) == oracle


def test_minor_monotone_under_edge_insertion():
    rng = random.Random(11)
    for _ in range(40):
        G = random_graph(rng, rng.randint(4, 8))
        if not G.edges:
            continue
        u, v = G.edges[rng.randrange(len(G.edges))]
        smaller = Structure.graph(
            G.n, [e for e in G.edges if e != (u, v)])
        for name in ("k4", "k23"):
            if has_minor(smaller, name):
                assert has_minor(G, name)


def test_minor_of_contraction_is_minor():
    rng = random.Random(13)
    for _ in range(40):
        G = random_graph(rng, rng.randint(4, 8))
        if not G.edges:
            continue
        u, v = G.edges[rng.randrange(len(G.edges))]
        relabel = {x: (u if x == v else x) for x in range(G.n)}
        packed = sorted(set(relabel.values()))
        newid = {old: i for i, old in enumerate(packed)}
        contracted_edges = {(min(newid[relabel[a]], newid[relabel[b]]),
                             max(newid[relabel[a]], newid[relabel[b]]))
                            for (a, b) in G.edges
                            if newid[relabel[a]] != newid[relabel[b]]}
        H = Structure.graph(len(packed), sorted(contracted_edges))
        if has_minor(H, "k4"):
            assert has_minor(G, "k4")


# ---------------------------------------------------------------------------
# tree decompositions
# ---------------------------------------------------------------------------

def test_wheel_decomposition_is_valid_width_3():
    for n in (5, 9, 12):
        W = families.wheel(n)
        T = wheel_decomposition(n)
        assert validate_tree_decomposition(W, T)
        assert T.width == 3


def test_tree_decomposition_axioms_rejected_when_broken():
    W = families.wheel(5)
    T = wheel_decomposition(5)
    bags = list(T.bags)

    # remove one bag: an edge loses its home
    T_missing = TreeDecomposition(bags[:-1], [e for e in T.edges
                                              if len(bags) - 1 not in e])
    assert not validate_tree_decomposition(W, T_missing)

    # break connectivity: vertex 3 occurs in non-adjacent bags only
    scattered = [frozenset({0, 3}), frozenset({1, 2}), frozenset({3, 4, 5})]
    T_scattered = TreeDecomposition(scattered, [(0, 1), (1, 2)])
    assert not validate_tree_decomposition(W, T_scattered)


def test_tree_decomposition_malformed_inputs_raise():
    W = families.wheel(5)
    with pytest.raises(StructureError):
        validate_tree_decomposition(
            W, TreeDecomposition([frozenset({0, 99})], []))
    with pytest.raises(StructureError):
        validate_tree_decomposition(
            W, TreeDecomposition([frozenset({0}), frozenset({1})],
                                 [(0, 1), (0, 1)]))
    with pytest.raises(StructureError):    # cycle in the "tree"
        validate_tree_decomposition(
            W, TreeDecomposition([frozenset({0})] * 3,
                                 [(0, 1), (1, 2), (2, 0)]))


def test_empty_decomposition_only_for_empty_graph():
    empty = TreeDecomposition([], [])
    assert validate_tree_decomposition(Structure.graph(0), empty)
    assert not validate_tree_decomposition(families.cycle(3), empty)


# ---------------------------------------------------------------------------
# scattered sets and bottlenecks
# ---------------------------------------------------------------------------

def test_is_r_scattered():
    P = Structure.graph(7, [(i, i + 1) for i in range(6)])
    assert is_r_scattered(P, (0, 3, 6), 2)
    assert not is_r_scattered(P, (0, 2, 6), 2)
    # removing the middle makes the halves mutually unreachable
    assert is_r_scattered(P, (0, 6), 99, removed=(3,))


def test_find_bottleneck_star():
    star = families.biclique(1, 5)
    res = find_bottleneck(star, 2, 3)
    assert res is not None
    assert res.S == (0,)
    assert res.A == (1, 2, 3)
    assert res.complete


def test_find_bottleneck_path_needs_no_removal():
    P = Structure.graph(9, [(i, i + 1) for i in range(8)])
    res = find_bottleneck(P, 1, 3)
    assert res.S == ()
    assert res.A == (0, 2, 4)


def test_find_bottleneck_none_when_impossible():
    assert find_bottleneck(families.clique(5), 1, 2) is None


def test_find_bottleneck_frozen_bouquet_answer():
    res = find_bottleneck(families.bouquet([5, 5, 5, 5, 5]), 2, 4)
    assert res == ((1, 6, 11, 16), (0,), True)


def brute_force_bottleneck(G, r, m, cap=3):
    verts = range(G.n)
    for s_size in range(cap + 1):
        for S in itertools.combinations(verts, s_size):
            pool = [v for v in verts if v not in S]
            for A in itertools.combinations(pool, m):
                if is_r_scattered(G, A, r, removed=S):
                    return A, S
    return None


def test_find_bottleneck_matches_brute_force():
    rng = random.Random(0xB0)
    for _ in range(40):
        G = random_graph(rng, rng.randint(3, 8), p=0.35)
        r, m = rng.randint(1, 3), rng.randint(2, 3)
        got = find_bottleneck(G, r, m)
        expect = brute_force_bottleneck(G, r, m)
        if expect is None:
            assert got is None
        else:
            assert got is not None
            # identical S (ascending size, then lexicographic order)
            assert got.S == expect[1]
            assert is_r_scattered(G, got.A, r, removed=got.S)


@given(st.integers(6, 12))
@settings(max_examples=7)
def test_bottleneck_on_wheels_uses_the_apex(n):
    # rim vertices are never 2-scattered while the apex stands; once it
    # is removed, C_n (n >= 6) has pairs at distance > 2
    res = find_bottleneck(families.wheel(n), 2, 2)
    assert res is not None
    assert res.S == (0,)
    assert res.complete

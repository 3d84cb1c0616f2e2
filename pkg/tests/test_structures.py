"""Structures: construction, substructures, quotients, amalgams, files."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fmtlab.structures import (
    GRAPH_VOCAB,
    AmalgamError,
    FileFormatError,
    Homomorphism,
    LoopCreationError,
    Partition,
    Structure,
    StructureError,
    Vocabulary,
    ball,
    connected_components,
    disjoint_union,
    free_amalgam,
    free_amalgam_with_maps,
    gaifman_graph,
    induced_substructure,
    is_substructure,
    iterated_amalgam,
    parse_structure,
    quotient,
    read_structure,
    serialize_structure,
    write_structure,
)
from fmtlab import families


def graphs(max_n=8):
    """Hypothesis strategy: a small random graph."""
    def build(n, bits):
        pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
        edges = [p for k, p in enumerate(pairs) if bits >> k & 1]
        return Structure.graph(n, edges)
    return st.integers(0, max_n).flatmap(
        lambda n: st.integers(0, (1 << (n * (n - 1) // 2)) - 1).map(
            lambda bits: build(n, bits)))


# ---------------------------------------------------------------------------
# vocabularies and raw construction
# ---------------------------------------------------------------------------

def test_vocabulary_basics():
    v = Vocabulary((("E", 2), ("U", 1)))
    assert v.arity("E") == 2
    assert v.arity("U") == 1
    assert not v.is_graph
    assert GRAPH_VOCAB.is_graph


def test_graph_construction_and_edges():
    G = Structure.graph(4, [(0, 1), (1, 2), (2, 1)])
    assert G.n == 4
    assert G.is_graph
    assert G.edges == [(0, 1), (1, 2)]


def test_graph_rejects_loops_and_range():
    with pytest.raises(StructureError):
        Structure.graph(2, [(0, 0)])
    with pytest.raises(StructureError):
        Structure.graph(2, [(0, 5)])


def test_relation_arity_checked():
    v = Vocabulary((("R", 3),))
    with pytest.raises(StructureError):
        Structure(v, 3, {"R": [(0, 1)]})


def test_labels_default_to_ids():
    G = Structure.graph(2, [(0, 1)], labels={0: "left"})
    assert G.label(0) == "left"
    assert G.label(1) == "1"


# ---------------------------------------------------------------------------
# Gaifman graph, balls, components
# ---------------------------------------------------------------------------

def test_ball_on_path():
    P = Structure.graph(5, [(i, i + 1) for i in range(4)])
    assert ball(P, 2, 0) == {2}
    assert ball(P, 2, 1) == {1, 2, 3}
    assert ball(P, 0, 2) == {0, 1, 2}
    assert ball(P, 2, 10) == {0, 1, 2, 3, 4}


def test_ball_validates_inputs():
    P = Structure.graph(2, [(0, 1)])
    with pytest.raises(StructureError):
        ball(P, 5, 1)
    with pytest.raises(StructureError):
        ball(P, 0, -1)


def test_gaifman_graph_of_ternary_relation():
    v = Vocabulary((("R", 3),))
    A = Structure(v, 4, {"R": [(0, 1, 2)]})
    G = gaifman_graph(A)
    assert G.edges == [(0, 1), (0, 2), (1, 2)]


def test_connected_components():
    G = disjoint_union(families.cycle(3), families.cycle(4))
    comps = connected_components(G)
    assert sorted(sorted(c) for c in comps) == [[0, 1, 2], [3, 4, 5, 6]]


@given(graphs(7), st.integers(0, 4))
def test_balls_grow_with_radius(G, r):
    for a in range(G.n):
        assert ball(G, a, r) <= ball(G, a, r + 1)


# ---------------------------------------------------------------------------
# substructures
# ---------------------------------------------------------------------------

def test_induced_substructure_relabels():
    C = families.cycle(5)
    B, old_to_new = induced_substructure(C, {1, 2, 4})
    assert B.n == 3
    assert old_to_new == {1: 0, 2: 1, 4: 2}
    assert B.edges == [(0, 1)]


def test_is_substructure_modes():
    C = families.cycle(5)
    B, _ = induced_substructure(C, {0, 1, 2})
    assert is_substructure(B, C, mode="induced", mapping={0: 0, 1: 1, 2: 2})
    P = Structure.graph(3, [(0, 1)])
    assert is_substructure(P, C, mode="weak", mapping={0: 0, 1: 1, 2: 2})
    assert not is_substructure(P, C, mode="induced", mapping={0: 0, 1: 1, 2: 2})


@given(graphs(8))
def test_induced_substructure_edge_count(G):
    S = [i for i in range(G.n) if i % 2 == 0]
    B, old_to_new = induced_substructure(G, S)
    expect = [(old_to_new[u], old_to_new[v]) for (u, v) in G.edges
              if u in old_to_new and v in old_to_new]
    assert B.edges == sorted(expect)


# ---------------------------------------------------------------------------
# quotients
# ---------------------------------------------------------------------------

def test_quotient_c6_opposites_is_c3():
    C6 = families.cycle(6)
    P = Partition.from_pairs(6, [(0, 3), (1, 4), (2, 5)])
    Q, proj = quotient(C6, P)
    assert Q.n == 3
    assert Q.edges == [(0, 1), (0, 2), (1, 2)]
    assert proj.is_valid() and proj.is_full()


def test_quotient_of_adjacent_pair_raises():
    C3 = families.cycle(3)
    P = Partition.from_pairs(3, [(0, 1)])
    with pytest.raises(LoopCreationError):
        quotient(C3, P)


def test_partition_validates_elements():
    with pytest.raises(StructureError):
        Partition.from_pairs(3, [(0, 5)])
    P = Partition.from_pairs(4, [(0, 1), (1, 2)])
    assert P.classes() == [(0, 1, 2), (3,)]
    assert P.same(0, 2) and not P.same(0, 3)


# ---------------------------------------------------------------------------
# unions and amalgams
# ---------------------------------------------------------------------------

def test_disjoint_union_counts():
    G = disjoint_union(families.cycle(3), families.clique(4))
    assert G.n == 7
    assert len(G.edges) == 3 + 6


def test_free_amalgam_glues_shared_ids():
    A = families.cycle(5)
    B = families.cycle(5)
    F = free_amalgam(A, B, (0, 1))
    assert F.n == 8
    # the shared edge appears once; no other cross edges
    assert len(F.edges) == 5 + 5 - 1


def test_free_amalgam_requires_agreement():
    A = families.cycle(5)          # edge (0, 1) present
    B = Structure.graph(5, [(0, 2), (2, 4)])   # edge (0, 1) absent
    with pytest.raises(AmalgamError):
        free_amalgam(A, B, (0, 1))


def test_free_amalgam_empty_interface_is_disjoint_union():
    A, B = families.cycle(3), families.cycle(4)
    F = free_amalgam(A, B, ())
    from fmtlab import solver
    assert solver.isomorphic(F, disjoint_union(A, B))


def test_free_amalgam_with_maps_are_embeddings():
    A, B = families.cycle(5), families.wheel(5)
    F, inA, inB = free_amalgam_with_maps(A, B, (0, 1))
    assert inA.is_valid() and inA.is_injective() and inA.is_strong()
    assert inB.is_valid() and inB.is_injective() and inB.is_strong()


def test_iterated_amalgam_size_formula():
    M = families.cycle(5)
    for n in range(1, 5):
        for S in [(), (0,), (0, 1)]:
            F = iterated_amalgam(M, S, n)
            assert F.n == n * M.n - (n - 1) * len(S)


def test_iterated_amalgam_one_copy_is_m():
    from fmtlab import solver
    M = families.wheel(5)
    assert solver.isomorphic(iterated_amalgam(M, (0, 2), 1), M)


# ---------------------------------------------------------------------------
# homomorphism objects
# ---------------------------------------------------------------------------

def test_homomorphism_flags():
    C6, C3 = families.cycle(6), families.cycle(3)
    wrap = Homomorphism(C6, C3, (0, 1, 2, 0, 1, 2))
    assert wrap.is_valid()
    assert wrap.is_full()
    assert not wrap.is_injective()
    broken = Homomorphism(C6, C3, (0, 0, 1, 2, 0, 1))
    assert not broken.is_valid()


def test_homomorphism_composition_identity():
    C5 = families.cycle(5)
    ident = Homomorphism(C5, C5, tuple(range(5)))
    assert ident.is_valid() and ident.is_injective() and ident.is_strong()
    assert ident.is_full()


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def test_serialize_parse_round_trip():
    G = families.dn(5)
    text = serialize_structure(G)
    H = parse_structure(text)
    assert H.n == G.n and H.edges == G.edges and H.labels == G.labels


def test_file_round_trip(tmp_path):
    G = families.wheel(7)
    p = tmp_path / "w7.fmt"
    write_structure(G, p)
    H = read_structure(p)
    assert H.edges == G.edges


def test_parse_structure_rejects_garbage():
    with pytest.raises(FileFormatError):
        parse_structure("nonsense 3\n")
    with pytest.raises(FileFormatError):
        parse_structure("graph 2\nedge 0 9\n")


def test_general_vocab_round_trip():
    v = Vocabulary((("E", 2), ("U", 1)))
    A = Structure(v, 3, {"E": [(0, 1), (1, 0)], "U": [(2,)]})
    B = parse_structure(serialize_structure(A))
    assert B.vocab == A.vocab
    assert sorted(B.rel("U")) == [(2,)]

"""Homomorphism solver: searches, constraints, counting, chromatic."""

import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fmtlab import families, solver
from fmtlab.structures import (
    Homomorphism,
    Structure,
    Vocabulary,
    VocabularyMismatchError,
)
from fmtlab.solver import (
    BudgetExceededError,
    InconsistentPartialError,
    SolverError,
    chromatic_number,
    classify,
    count_homs,
    enumerate_homs,
    find_hom,
    isomorphic,
)


def graphs(max_n=4):
    def build(n, bits):
        pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
        return Structure.graph(
            n, [p for k, p in enumerate(pairs) if bits >> k & 1])
    return st.integers(1, max_n).flatmap(
        lambda n: st.integers(0, (1 << (n * (n - 1) // 2)) - 1).map(
            lambda bits: build(n, bits)))


def brute_force_hom_count(A, B):
    """Reference count by checking every map (graphs only)."""
    bedges = {tuple(e) for e in B.rel("E")}
    count = 0
    for m in itertools.product(range(B.n), repeat=A.n):
        if all((m[u], m[v]) in bedges for (u, v) in A.rel("E")):
            count += 1
    return count


# ---------------------------------------------------------------------------
# existence knowns
# ---------------------------------------------------------------------------

def test_find_hom_knowns():
    K3, K4, C5, W5 = (families.clique(3), families.clique(4),
                      families.cycle(5), families.wheel(5))
    assert find_hom(K3, C5) is None              # C5 is triangle-free
    assert find_hom(C5, K3) is not None          # odd cycles 3-color
    assert find_hom(W5, K4) is not None          # wheels 4-color
    assert find_hom(K4, W5) is None              # W5 has clique number 3
    h = find_hom(C5, K3)
    assert h.is_valid()


def test_vocabulary_mismatch():
    U = Vocabulary((("R", 1),))
    A = Structure(U, 1, {"R": [(0,)]})
    with pytest.raises(VocabularyMismatchError):
        find_hom(A, families.cycle(3))


# ---------------------------------------------------------------------------
# counting against brute force
# ---------------------------------------------------------------------------

def test_count_homs_knowns():
    K2, K3, C5 = families.clique(2), families.clique(3), families.cycle(5)
    assert count_homs(K2, K3) == 6
    assert count_homs(K3, K3) == 6
    assert count_homs(K2, C5) == 10


@given(graphs(3), graphs(3))
def test_count_matches_brute_force(A, B):
    assert count_homs(A, B) == brute_force_hom_count(A, B)


@given(graphs(3), graphs(3))
def test_injective_count_matches_brute_force(A, B):
    bedges = {tuple(e) for e in B.rel("E")}
    expect = 0
    for m in itertools.permutations(range(B.n), A.n) if A.n <= B.n else ():
        if all((m[u], m[v]) in bedges for (u, v) in A.rel("E")):
            expect += 1
    assert count_homs(A, B, injective=True) == expect


# ---------------------------------------------------------------------------
# enumeration order, determinism, limits
# ---------------------------------------------------------------------------

def test_enumeration_sorted_and_deterministic():
    C5 = families.cycle(5)
    homs1 = enumerate_homs(C5, C5)
    homs2 = enumerate_homs(C5, C5)
    maps1 = [h.map for h in homs1]
    assert maps1 == sorted(maps1)
    assert maps1 == [h.map for h in homs2]


def test_enumeration_limit():
    C5 = families.cycle(5)
    assert len(enumerate_homs(C5, C5, limit=3)) == 3


# ---------------------------------------------------------------------------
# constraint flags
# ---------------------------------------------------------------------------

def test_embedding_c5_into_w5_is_not_full():
    C5, W5 = families.cycle(5), families.wheel(5)
    h = find_hom(C5, W5, require="embedding")
    assert h is not None
    flags = classify(h)
    assert flags["embedding"] and flags["injective"] and flags["strong"]
    assert not flags["full"]


def test_full_constraint():
    C6, C3 = families.cycle(6), families.cycle(3)
    assert find_hom(C6, C3, require="full") is not None
    assert find_hom(C6, C3, require="embedding") is None


def test_every_required_hom_satisfies_the_flag():
    G3, D4 = families.gn(3), families.dn(4)
    for h in enumerate_homs(G3, D4, require="injective", limit=5):
        assert h.is_injective()


def test_unknown_require_rejected():
    C3 = families.cycle(3)
    with pytest.raises(SolverError):
        find_hom(C3, C3, require="bijective")


def test_classify_rejects_non_homomorphism():
    C6, C3 = families.cycle(6), families.cycle(3)
    with pytest.raises(SolverError):
        classify(Homomorphism(C6, C3, (0, 0, 1, 2, 0, 1)))


# ---------------------------------------------------------------------------
# partial maps and candidate restriction
# ---------------------------------------------------------------------------

def test_partial_pins_are_respected():
    C5 = families.cycle(5)
    for h in enumerate_homs(C5, C5, partial={0: 2}):
        assert h.map[0] == 2


def test_partial_out_of_range_raises():
    K3 = families.clique(3)
    with pytest.raises(InconsistentPartialError):
        find_hom(K3, K3, partial={0: 7})


def test_partial_injective_clash_raises():
    K3 = families.clique(3)
    with pytest.raises(InconsistentPartialError):
        find_hom(K3, K3, injective=True, partial={0: 0, 1: 0})


def test_partial_violating_pinned_edge_raises():
    K3 = families.clique(3)
    with pytest.raises(InconsistentPartialError):
        find_hom(K3, K3, partial={0: 0, 1: 0})


def test_allowed_restricts_images():
    C5 = families.cycle(5)
    homs = enumerate_homs(C5, C5, allowed={0: [1]})
    assert homs and all(h.map[0] == 1 for h in homs)


# ---------------------------------------------------------------------------
# budgets
# ---------------------------------------------------------------------------

def test_budget_exhaustion_raises_with_counts():
    A, B = families.cycle(9), families.cycle(9)
    with pytest.raises(BudgetExceededError) as exc:
        enumerate_homs(A, B, budget=5)
    assert exc.value.nodes >= 5
    assert exc.value.found >= 0


def test_budget_large_enough_is_silent():
    A = families.cycle(5)
    assert count_homs(A, A, budget=10 ** 6) == 10


# ---------------------------------------------------------------------------
# chromatic number
# ---------------------------------------------------------------------------

def test_chromatic_knowns():
    assert chromatic_number(Structure.graph(0)) == 0
    assert chromatic_number(Structure.graph(3)) == 1
    assert chromatic_number(Structure.graph(4, [(0, 1), (2, 3)])) == 2
    assert chromatic_number(families.cycle(6)) == 2
    assert chromatic_number(families.cycle(5)) == 3
    assert chromatic_number(families.wheel(6)) == 3
    assert chromatic_number(families.wheel(5)) == 4
    assert chromatic_number(families.clique(4)) == 4


def test_chromatic_rejects_non_graph():
    U = Vocabulary((("R", 1),))
    with pytest.raises(SolverError):
        chromatic_number(Structure(U, 1, {"R": []}))


@given(graphs(5))
def test_chromatic_bounds(G):
    k = chromatic_number(G)
    assert 1 <= k <= G.n
    # a proper coloring with k colors exists, none with k-1
    assert find_hom(G, families.clique(k)) is not None if k >= 2 else True
    if k > 2:
        assert find_hom(G, families.clique(k - 1)) is None


# ---------------------------------------------------------------------------
# isomorphism
# ---------------------------------------------------------------------------

def test_isomorphic_knowns():
    C5 = families.cycle(5)
    shifted = Structure.graph(5, [((i + 2) % 5, (i + 3) % 5)
                                  for i in range(5)])
    P5 = Structure.graph(5, [(i, i + 1) for i in range(4)])
    assert isomorphic(C5, shifted)
    assert not isomorphic(C5, P5)
    assert not isomorphic(C5, families.cycle(6))
    assert isomorphic(Structure.graph(0), Structure.graph(0))


@given(graphs(5))
def test_isomorphic_under_relabeling(G):
    perm = list(reversed(range(G.n)))
    H = Structure.graph(G.n, [(perm[u], perm[v]) for (u, v) in G.edges])
    assert isomorphic(G, H)

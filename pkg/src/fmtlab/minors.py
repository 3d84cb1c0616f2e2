"""Graph minors, planarity-style excluded-minor checks, tree
decompositions, and bottleneck search.

A graph H is a minor of G when G contains disjoint, individually
connected "branch sets", one per vertex of H, with an edge of G between
the branch sets of every pair of H-adjacent vertices.  ``has_minor``
decides this by growing branch sets directly; the four standard small
patterns (k4, k5, k23, k33) get fast certified short-cuts through
planarity testing before any search runs.

``find_bottleneck`` looks for a small separator S such that many
vertices of G - S are pairwise far apart; the scattered set is found by
an exact maximum-independent-set computation on the distance-<= r
conflict graph.
"""

from __future__ import annotations

import itertools
from typing import NamedTuple

import networkx as nx

from . import families, solver
from .structures import (StructureError, TreeDecomposition,
                         connected_components, gaifman_masks,
                         induced_substructure)

DEFAULT_MINOR_BUDGET = 5_000_000
_MEMO_CAP = 1_000_000

PATTERN_NAMES = ("k4", "k5", "k23", "k33")


class MinorError(StructureError):
    """Raised for malformed minor-check inputs."""


def pattern(name):
    """Return the named standard pattern graph (k4, k5, k23, k33)."""
    if name == "k4":
        return families.clique(4)
    if name == "k5":
        return families.clique(5)
    if name == "k23":
        return families.biclique(2, 3)
    if name == "k33":
        return families.biclique(3, 3)
    raise MinorError(
        "unknown pattern %r (expected one of %s)" % (name, ", ".join(PATTERN_NAMES))
    )


def _as_pattern(H):
    if isinstance(H, str):
        return pattern(H)
    return H


def to_networkx(G):
    """Convert a graph-vocabulary structure to a networkx Graph."""
    g = nx.Graph()
    g.add_nodes_from(range(G.n))
    g.add_edges_from(G.edges)
    return g


def _nx_planar(G):
    ok, _ = nx.check_planarity(to_networkx(G))
    return ok


def _nx_apex_planar(G):
    """True when the join of one fresh vertex with G is planar.

    This holds exactly for outerplanar G, so it certifies the absence
    of K_4 and K_{2,3} minors.
    """
    g = to_networkx(G)
    apex = G.n
    g.add_node(apex)
    g.add_edges_from((apex, v) for v in range(G.n))
    ok, _ = nx.check_planarity(g)
    return ok


def _matches(H, name):
    P = pattern(name)
    if H.n != P.n or len(H.edges) != len(P.edges):
        return False
    return solver.isomorphic(H, P)


def _automorphisms(H):
    """All adjacency-preserving permutations of H's vertices."""
    k = H.n
    adj = gaifman_masks(H)
    perms = []
    for p in itertools.permutations(range(k)):
        ok = True
        for u in range(k):
            image = 0
            m = adj[u]
            while m:
                low = m & -m
                m ^= low
                image |= 1 << p[low.bit_length() - 1]
            if image != adj[p[u]]:
                ok = False
                break
        if ok:
            perms.append(p)
    return perms


def _is_complete(H):
    return all(
        (gaifman_masks(H)[u] >> v) & 1 for u in range(H.n) for v in range(H.n) if u != v
    )


def _reachable(start_mask, allowed_mask, adj):
    """Mask of vertices reachable from start_mask inside allowed_mask."""
    seen = start_mask & allowed_mask
    frontier = seen
    while frontier:
        nxt = 0
        m = frontier
        while m:
            low = m & -m
            m ^= low
            nxt |= adj[low.bit_length() - 1]
        frontier = nxt & allowed_mask & ~seen
        seen |= frontier
    return seen


class _MinorSearch:
    """Branch-set growth search for an H-minor inside G."""

    def __init__(self, G, H, budget):
        self.adj = gaifman_masks(G)
        self.n = G.n
        self.k = H.n
        hadj = gaifman_masks(H)
        self.hedges = tuple(
            (i, j) for i in range(H.n) for j in range(i + 1, H.n) if (hadj[i] >> j) & 1
        )
        self.budget = budget
        self.nodes = 0
        if _is_complete(H):
            self.canonical = lambda bsets: tuple(sorted(bsets))
        else:
            auts = _automorphisms(H)
            self.canonical = lambda bsets: min(
                tuple(bsets[p[i]] for i in range(self.k)) for p in auts
            )
        self.memo = set()

    def _nbrs(self, mask):
        out = 0
        m = mask
        while m:
            low = m & -m
            m ^= low
            out |= self.adj[low.bit_length() - 1]
        return out

    def _dead(self, bsets, free):
        """Cheap refutations of the current partial model."""
        empties = sum(1 for b in bsets if not b)
        if empties > bin(free).count("1"):
            return True
        for (i, j) in self.hedges:
            bi, bj = bsets[i], bsets[j]
            if not bi or not bj:
                continue
            if self._nbrs(bi) & bj:
                continue
            # The two branch sets must eventually be joined through
            # currently-free vertices.
            allowed = bi | bj | free
            if not (_reachable(bi, allowed, self.adj) & bj):
                return True
        return False

    def run(self, bsets, free):
        self.nodes += 1
        if self.nodes > self.budget:
            raise solver.BudgetExceededError(self.nodes, 0)
        key = self.canonical(bsets)
        if key in self.memo:
            return False
        if len(self.memo) < _MEMO_CAP:
            self.memo.add(key)
        if self._dead(bsets, free):
            return False
        for idx in range(self.k):
            if not bsets[idx]:
                m = free
                while m:
                    low = m & -m
                    m ^= low
                    child = list(bsets)
                    child[idx] = low
                    if self.run(child, free & ~low):
                        return True
                return False
        target = None
        for (i, j) in self.hedges:
            if not (self._nbrs(bsets[i]) & bsets[j]):
                target = (i, j)
                break
        if target is None:
            return True
        for side in target:
            m = self._nbrs(bsets[side]) & free
            while m:
                low = m & -m
                m ^= low
                child = list(bsets)
                child[side] = bsets[side] | low
                if self.run(child, free & ~low):
                    return True
        return False


def _minor_search(G, H, budget):
    if H.n > G.n or len(H.edges) > len(G.edges):
        return False
    search = _MinorSearch(G, H, budget)
    return search.run([0] * H.n, (1 << G.n) - 1)


def _is_biconnected(H):
    g = to_networkx(H)
    if H.n < 3:
        return H.n == 2 and nx.is_connected(g)
    return nx.is_biconnected(g)


def has_minor(G, H, *, budget=DEFAULT_MINOR_BUDGET):
    """Decide whether G has the graph H as a minor.

    H may be a Structure or one of the pattern names "k4", "k5",
    "k23", "k33".  Raises BudgetExceededError when the branch-set
    search would exceed ``budget`` expanded states.
    """
    H = _as_pattern(H)
    if not (G.vocab.is_graph and H.vocab.is_graph):
        raise MinorError("minor checks are defined for graph structures only")
    if H.n == 0:
        return True
    if H.n > G.n:
        return False
    if not H.edges:
        return True  # enough vertices, pattern has no edges
    # Certified impossibility short-cuts for the standard patterns:
    # planar graphs have no K_5 or K_{3,3} minor; outerplanar graphs
    # (equivalently: apex join is planar) have no K_4 or K_{2,3} minor.
    if (_matches(H, "k5") or _matches(H, "k33")) and _nx_planar(G):
        return False
    if (_matches(H, "k4") or _matches(H, "k23")) and _nx_apex_planar(G):
        return False
    if _is_biconnected(H) and H.n >= 3:
        # A 2-connected minor always lives inside a single block.
        pieces = [
            tuple(sorted(block))
            for block in nx.biconnected_components(to_networkx(G))
            if len(block) >= H.n
        ]
        pieces.sort()
        for piece in pieces:
            sub, _ = induced_substructure(G, piece)
            if _minor_search(sub, H, budget):
                return True
        return False
    if nx.is_connected(to_networkx(H)):
        comps = [c for c in connected_components(G) if len(c) >= H.n]
        for comp in comps:
            sub, _ = induced_substructure(G, comp)
            if _minor_search(sub, H, budget):
                return True
        return False
    return _minor_search(G, H, budget)


def is_planar(G):
    """Planarity as exclusion of K_5 and K_{3,3} minors."""
    if _nx_planar(G):
        return True
    return not has_minor(G, "k5") and not has_minor(G, "k33")


def is_outerplanar(G):
    """Outerplanarity as exclusion of K_4 and K_{2,3} minors."""
    if _nx_apex_planar(G):
        return True
    return not has_minor(G, "k4") and not has_minor(G, "k23")


def validate_tree_decomposition(A, T):
    """Check the three tree-decomposition axioms of T against A.

    Returns False when an axiom fails.  Raises StructureError when T
    itself is malformed (elements out of range, tree edges out of
    range, or an edge set that is not a tree over the bags).
    """
    if not isinstance(T, TreeDecomposition):
        raise StructureError("expected a TreeDecomposition")
    bags = [frozenset(b) for b in T.bags]
    nb = len(bags)
    for b in bags:
        for v in b:
            if not (isinstance(v, int) and 0 <= v < A.n):
                raise StructureError("bag element %r outside the domain" % (v,))
    for (i, j) in T.edges:
        if not (0 <= i < nb and 0 <= j < nb) or i == j:
            raise StructureError("tree edge (%r, %r) is malformed" % (i, j))
    if nb == 0:
        return A.n == 0
    if len(T.edges) != nb - 1:
        raise StructureError("bag graph is not a tree")
    tadj = [[] for _ in range(nb)]
    for (i, j) in T.edges:
        tadj[i].append(j)
        tadj[j].append(i)
    seen = {0}
    stack = [0]
    while stack:
        x = stack.pop()
        for y in tadj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    if len(seen) != nb:
        raise StructureError("bag graph is not a tree")
    # Axiom 1: every element occurs in some bag.
    covered = set().union(*bags) if bags else set()
    if covered != set(range(A.n)):
        return False
    # Axiom 2: every Gaifman edge lies inside some bag.
    masks = gaifman_masks(A)
    for u in range(A.n):
        m = masks[u]
        while m:
            low = m & -m
            m ^= low
            v = low.bit_length() - 1
            if v < u:
                continue
            if not any(u in b and v in b for b in bags):
                return False
    # Axiom 3: the bags containing any fixed element form a subtree.
    for v in range(A.n):
        holders = [i for i in range(nb) if v in bags[i]]
        if not holders:
            return False
        root = holders[0]
        hset = set(holders)
        seen_v = {root}
        stack = [root]
        while stack:
            x = stack.pop()
            for y in tadj[x]:
                if y in hset and y not in seen_v:
                    seen_v.add(y)
                    stack.append(y)
        if len(seen_v) != len(holders):
            return False
    return True


def wheel_decomposition(n):
    """A width-3 path decomposition of the n-spoke wheel.

    Bags are {apex, first rim vertex, i-th rim vertex, next rim
    vertex}; consecutive bags share three vertices.
    """
    if n < 3:
        raise StructureError("wheels need at least 3 rim vertices")
    bags = tuple(frozenset({0, 1, i, i + 1}) for i in range(2, n))
    edges = tuple((i, i + 1) for i in range(len(bags) - 1))
    return TreeDecomposition(bags=bags, edges=edges)


class BottleneckResult(NamedTuple):
    A: tuple
    S: tuple
    complete: bool  # every A-S pair is an edge of G (K_{A,S} present)


def _dist_ball(adj, v, r, avail):
    """Mask of vertices within distance r of v inside avail."""
    seen = (1 << v) & avail
    frontier = seen
    for _ in range(r):
        if not frontier:
            break
        nxt = 0
        m = frontier
        while m:
            low = m & -m
            m ^= low
            nxt |= adj[low.bit_length() - 1]
        frontier = nxt & avail & ~seen
        seen |= frontier
    return seen


def _independent_exists(conf, pool, target):
    """Does the conflict graph have an independent set of size target
    inside pool?"""
    if target <= 0:
        return True
    if bin(pool).count("1") < target:
        return False
    low = pool & -pool
    v = low.bit_length() - 1
    # Branch: take v (drops its conflict neighborhood) or skip it.
    if _independent_exists(conf, pool & ~low & ~conf[v], target - 1):
        return True
    return _independent_exists(conf, pool & ~low, target)


def _lex_min_independent(conf, pool, target):
    chosen = []
    while target > 0:
        m = pool
        found = False
        while m:
            low = m & -m
            m ^= low
            v = low.bit_length() - 1
            if _independent_exists(conf, pool & ~low & ~conf[v], target - 1):
                chosen.append(v)
                pool = pool & ~low & ~conf[v]
                target -= 1
                found = True
                break
        if not found:
            return None
    return tuple(chosen)


def is_r_scattered(G, elements, r, removed=()):
    """True when the elements are pairwise at distance > r in G minus
    the removed set (computed by independent breadth-first searches)."""
    elements = tuple(elements)
    removed = frozenset(removed)
    if removed & set(elements):
        return False
    avail = 0
    for v in range(G.n):
        if v not in removed:
            avail |= 1 << v
    adj = gaifman_masks(G)
    for a, b in itertools.combinations(elements, 2):
        if (_dist_ball(adj, a, r, avail) >> b) & 1:
            return False
    return True


def find_bottleneck(G, r, m, *, cap=3):
    """Find (A, S) with |S| minimal up to the cap, S of size <= cap,
    and A of size >= m pairwise at distance > r in G minus S.

    Returns a BottleneckResult or None.  The ``complete`` flag records
    whether every A-to-S pair is an edge of G.
    """
    if not G.vocab.is_graph:
        raise MinorError("bottleneck search is defined for graph structures")
    if m <= 0:
        raise MinorError("the scattered-set size m must be positive")
    n = G.n
    adj = gaifman_masks(G)
    full = (1 << n) - 1
    for size in range(0, min(cap, n) + 1):
        for S in itertools.combinations(range(n), size):
            smask = 0
            for s in S:
                smask |= 1 << s
            avail = full & ~smask
            conf = [0] * n
            pool = 0
            mm = avail
            while mm:
                low = mm & -mm
                mm ^= low
                v = low.bit_length() - 1
                pool |= low
                conf[v] = _dist_ball(adj, v, r, avail) & ~low
            if not _independent_exists(conf, pool, m):
                continue
            A = _lex_min_independent(conf, pool, m)
            if A is None:
                continue
            if not is_r_scattered(G, A, r, removed=S):
                raise StructureError(
                    "internal error: scattered-set witness failed verification"
                )
            complete = all((adj[a] >> s) & 1 for a in A for s in S)
            return BottleneckResult(A=tuple(A), S=tuple(S), complete=complete)
    return None

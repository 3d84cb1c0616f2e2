"""Homomorphism search with side constraints, plus exact chromatic number.

Vocabularies of arity <= 2 run on the selected kernel (compiled or
pure); higher arities use a plain backtracking path in this module.
Searches are deterministic: elements are explored in ascending id
order, enumeration results are sorted lexicographically by map, and
re-runs are bit-identical.  Every search carries a node budget
(default 10**8 assignment attempts); exhausting it raises
BudgetExceededError rather than silently returning a partial answer.
"""

from __future__ import annotations

from .structures import (Homomorphism, Structure, StructureError,
                         VocabularyMismatchError)

DEFAULT_BUDGET = 10 ** 8


class SolverError(ValueError):
    """Invalid solver input."""


class InconsistentPartialError(SolverError):
    """A pinned partial map is ill-formed (range or injectivity clash)."""


class BudgetExceededError(RuntimeError):
    """The node budget ran out before the search finished.

    Attributes: nodes (attempts spent), found (results collected so far).
    """

    def __init__(self, nodes, found):
        super().__init__(
            f"search budget exceeded after {nodes} nodes ({found} results "
            "found); raise the budget to finish")
        self.nodes = nodes
        self.found = found


def _flags(require, injective, strong, full):
    if require is not None:
        table = {
            "injective": (True, False, False),
            "strong": (False, True, False),
            "full": (False, False, True),
            "embedding": (True, True, False),
        }
        if require not in table:
            raise SolverError(f"unknown requirement {require!r}")
        ri, rs, rf = table[require]
        injective, strong, full = injective or ri, strong or rs, full or rf
    return injective, strong, full


def _check_inputs(A, B, partial, injective):
    if A.vocab != B.vocab:
        raise VocabularyMismatchError("vocabularies differ")
    if partial:
        seen = {}
        for a, b in partial.items():
            if not 0 <= a < A.n:
                raise InconsistentPartialError(f"element {a} out of range")
            if not 0 <= b < B.n:
                raise InconsistentPartialError(f"image {b} out of range")
            if injective and b in seen and seen[b] != a:
                raise InconsistentPartialError(
                    f"elements {seen[b]} and {a} both pinned to {b}")
            seen[b] = a
        for name in A.vocab.names:
            btuples = set(map(tuple, B.rel(name)))
            for t in A.rel(name):
                if all(x in partial for x in t):
                    image = tuple(partial[x] for x in t)
                    if image not in btuples:
                        raise InconsistentPartialError(
                            f"pinned {name} tuple {tuple(t)} maps to "
                            f"{image}, absent from the target")


def _max_arity(vocab):
    return max((ar for _, ar in vocab.symbols), default=1)


def _search(A, B, injective, strong, full, partial, allowed, limit, budget):
    """Raw search returning (maps, nodes, exceeded) in search order."""
    if _max_arity(A.vocab) <= 2:
        from . import kernel
        return kernel.hom_search(
            A, B, injective=injective, strong=strong, full=full,
            partial=partial, allowed=allowed, limit=limit, budget=budget)
    return _general_search(A, B, injective, strong, full, partial,
                           allowed, limit, budget)


def _general_search(A, B, injective, strong, full, partial, allowed,
                    limit, budget):
    """Backtracking for vocabularies with arity > 2.

    Elements are assigned in ascending id order, candidates ascending,
    so results come out already in lexicographic order.  Relation
    tuples are checked as soon as all their coordinates are assigned;
    strong/full are leaf post-filters.
    """
    nA, nB = A.n, B.n
    if nA == 0:
        if full and nB != 0:
            return [], 0, False
        return [()], 0, False

    doms = [list(range(nB)) for _ in range(nA)]
    for a, b in (partial or {}).items():
        doms[a] = [b] if b in doms[a] else []
    for a, bs in (allowed or {}).items():
        keep = set(bs)
        doms[a] = [b for b in doms[a] if b in keep]

    by_last = [[] for _ in range(nA)]
    for name, ts in A.relations.items():
        target = B.rel(name)
        for t in ts:
            by_last[max(t)].append((t, target))

    mapping = [-1] * nA
    results = []
    state = {"nodes": 0, "exceeded": False}

    def leaf_ok():
        f = Homomorphism(A, B, tuple(mapping))
        if strong and not f.is_strong():
            return False
        if full and not f.is_full():
            return False
        return True

    def rec(a):
        if a == nA:
            if leaf_ok():
                results.append(tuple(mapping))
                return 0 < limit <= len(results)
            return False
        used = set(mapping[:a]) if injective else ()
        for b in doms[a]:
            state["nodes"] += 1
            if state["nodes"] > budget:
                state["exceeded"] = True
                return True
            if injective and b in used:
                continue
            mapping[a] = b
            ok = True
            for t, target in by_last[a]:
                if tuple(mapping[x] for x in t) not in target:
                    ok = False
                    break
            if ok and rec(a + 1):
                mapping[a] = -1
                return True
            mapping[a] = -1
        return False

    rec(0)
    return results, state["nodes"], state["exceeded"]


def find_hom(A, B, *, require=None, injective=False, strong=False,
             full=False, partial=None, allowed=None, budget=DEFAULT_BUDGET):
    """First homomorphism A -> B meeting the constraints, or None.

    None means none exists; if the budget runs out first,
    BudgetExceededError is raised instead.  ``require`` is shorthand
    for one named constraint: injective, strong, full, or embedding
    (= injective + strong).
    """
    injective, strong, full = _flags(require, injective, strong, full)
    _check_inputs(A, B, partial, injective)
    maps, nodes, exceeded = _search(A, B, injective, strong, full,
                                    partial, allowed, 1, budget)
    if maps:
        return Homomorphism(A, B, maps[0])
    if exceeded:
        raise BudgetExceededError(nodes, 0)
    return None


def enumerate_homs(A, B, *, require=None, injective=False, strong=False,
                   full=False, partial=None, allowed=None, limit=0,
                   budget=DEFAULT_BUDGET):
    """All constraint-satisfying homomorphisms, sorted lexicographically
    by map.

    With ``limit`` > 0 the search stops after that many results (the
    returned prefix is then sorted, but is the search-order prefix, not
    necessarily the lexicographically first maps).
    """
    injective, strong, full = _flags(require, injective, strong, full)
    _check_inputs(A, B, partial, injective)
    maps, nodes, exceeded = _search(A, B, injective, strong, full,
                                    partial, allowed, limit, budget)
    if exceeded:
        raise BudgetExceededError(nodes, len(maps))
    return [Homomorphism(A, B, m) for m in sorted(maps)]


def count_homs(A, B, **kwargs):
    """Number of constraint-satisfying homomorphisms (constraints are
    applied during the search, not as a post-filter)."""
    return len(enumerate_homs(A, B, **kwargs))


def classify(f):
    """Constraint flags of a valid homomorphism.

    Returns {injective, strong, full, embedding}; raises SolverError if
    f does not preserve some tuple.
    """
    if not f.is_valid():
        raise SolverError("map is not a homomorphism")
    injective = f.is_injective()
    strong = f.is_strong()
    return {
        "injective": injective,
        "strong": strong,
        "full": f.is_full(),
        "embedding": injective and strong,
    }


def chromatic_number(G, budget=DEFAULT_BUDGET):
    """Exact chromatic number via homomorphism search into cliques of
    ascending order."""
    if not G.is_graph:
        raise SolverError("chromatic number needs a graph")
    if G.n == 0:
        return 0
    if not G.rel("E"):
        return 1
    from .families import clique
    for k in range(2, G.n + 1):
        if find_hom(G, clique(k), budget=budget) is not None:
            return k
    return G.n


def isomorphic(A, B, budget=DEFAULT_BUDGET):
    """Structure isomorphism by embedding search.

    Equal sizes plus an injective strong homomorphism give a bijective
    embedding, i.e. an isomorphism.
    """
    if A.vocab != B.vocab:
        return False
    if A.n != B.n:
        return False
    for name in A.vocab.names:
        if len(A.rel(name)) != len(B.rel(name)):
            return False
    if A.n == 0:
        return True
    return find_hom(A, B, require="embedding", budget=budget) is not None

"""Generators for the graph families used throughout the package.

Every generator attaches display labels (``apex``, ``v1``, ``a3``,
``c2_1``, ...) as structure metadata so verification code and reports
can refer to vertices by role.  Labels never affect equality.

Families and CLI parameter syntax:

    cycle:n       the n-cycle (n >= 3)
    clique:n      the complete graph K_n (n >= 1)
    biclique:a,b  the complete bipartite graph K_{a,b} (a, b >= 1)
    wheel:n       an n-cycle plus an apex adjacent to every cycle vertex
    bouquet:n1+n2+...  disjoint cycles of the given lengths sharing one
                  apex adjacent to every cycle vertex (each length >= 3)
    gn:n          the two-rail ladder chain G_n (n >= 1)
    dn:n          G_n plus the three wrap edges (a1,an), (b1,bn), (a1,bn)
    an:n          G_n with a1 and an identified (n >= 3)
    bn:n          G_n with a1 and bn identified (n >= 3)
    cn:n          G_n with b1 and bn identified (n >= 3)
"""

from __future__ import annotations

from .structures import (Homomorphism, Partition, Structure, StructureError,
                         connected_components, gaifman_masks,
                         induced_substructure, quotient)
from . import solver


class FamilyError(ValueError):
    """Unknown family or malformed/out-of-range parameters."""


# ---------------------------------------------------------------------------
# basic families
# ---------------------------------------------------------------------------

def cycle(n):
    if n < 3:
        raise FamilyError(f"cycle needs n >= 3, got {n}")
    edges = [(i, (i + 1) % n) for i in range(n)]
    labels = {i: f"c{i + 1}" for i in range(n)}
    return Structure.graph(n, edges, labels)


def clique(n):
    if n < 1:
        raise FamilyError(f"clique needs n >= 1, got {n}")
    edges = [(i, j) for i in range(n) for j in range(i + 1, n)]
    labels = {i: f"u{i + 1}" for i in range(n)}
    return Structure.graph(n, edges, labels)


def biclique(a, b):
    if a < 1 or b < 1:
        raise FamilyError(f"biclique needs both sides >= 1, got {a},{b}")
    edges = [(i, a + j) for i in range(a) for j in range(b)]
    labels = {i: f"l{i + 1}" for i in range(a)}
    labels.update({a + j: f"r{j + 1}" for j in range(b)})
    return Structure.graph(a + b, edges, labels)


def bouquet(lengths):
    """Cycles of the given lengths joined at a fresh apex adjacent to
    every cycle vertex.  bouquet([n]) is the wheel of order n."""
    lengths = [int(x) for x in lengths]
    if not lengths:
        raise FamilyError("bouquet needs at least one cycle length")
    for x in lengths:
        if x < 3:
            raise FamilyError(f"bouquet cycle lengths must be >= 3, got {x}")
    n = 1 + sum(lengths)
    edges = []
    labels = {0: "apex"}
    offset = 1
    for j, length in enumerate(lengths, start=1):
        for i in range(length):
            u = offset + i
            v = offset + (i + 1) % length
            edges.append((u, v))
            edges.append((0, u))
            labels[u] = f"c{j}_{i + 1}"
        offset += length
    return Structure.graph(n, edges, labels)


def wheel(n):
    """Apex plus an n-cycle; rim vertices are labeled r1..rn."""
    if n < 3:
        raise FamilyError(f"wheel needs n >= 3, got {n}")
    w = bouquet([n])
    labels = {0: "apex"}
    labels.update({i: f"r{i}" for i in range(1, n + 1)})
    return Structure.graph(w.n, w.edges, labels)


# ---------------------------------------------------------------------------
# the chain family and its quotients
# ---------------------------------------------------------------------------

def _a_id(i):
    return 1 + i


def _b_id(n, i):
    return n + 1 + i


def gn(n):
    """The chain G_n: hubs v1, v2 and rails a1..an, b1..bn.

    Edges: v1-ai, v2-bi, ai-bi for each i; ai-a(i+1), bi-b(i+1),
    a(i+1)-bi for consecutive i.  Ids: v1=0, v2=1, ai=1+i, bi=n+1+i.
    """
    if n < 1:
        raise FamilyError(f"gn needs n >= 1, got {n}")
    edges = []
    labels = {0: "v1", 1: "v2"}
    for i in range(1, n + 1):
        edges.append((0, _a_id(i)))
        edges.append((1, _b_id(n, i)))
        edges.append((_a_id(i), _b_id(n, i)))
        labels[_a_id(i)] = f"a{i}"
        labels[_b_id(n, i)] = f"b{i}"
    for i in range(1, n):
        edges.append((_a_id(i), _a_id(i + 1)))
        edges.append((_b_id(n, i), _b_id(n, i + 1)))
        edges.append((_a_id(i + 1), _b_id(n, i)))
    return Structure.graph(2 * n + 2, edges, labels)


def dn(n):
    """G_n closed up with the wrap edges (a1,an), (b1,bn), (a1,bn)."""
    if n < 3:
        raise FamilyError(f"dn needs n >= 3, got {n}")
    g = gn(n)
    edges = g.edges + [(_a_id(1), _a_id(n)),
                       (_b_id(n, 1), _b_id(n, n)),
                       (_a_id(1), _b_id(n, n))]
    return Structure.graph(g.n, edges, g.labels)


def _gn_quotient(n, u, v):
    g = gn(n)
    return quotient(g, Partition.from_pairs(g.n, [(u, v)]))


def an_quotient(n):
    """(A_n, quotient map): G_n with a1 and an identified."""
    if n < 3:
        raise FamilyError(f"an needs n >= 3, got {n}")
    return _gn_quotient(n, _a_id(1), _a_id(n))


def bn_quotient(n):
    """(B_n, quotient map): G_n with a1 and bn identified."""
    if n < 3:
        raise FamilyError(f"bn needs n >= 3, got {n}")
    return _gn_quotient(n, _a_id(1), _b_id(n, n))


def cn_quotient(n):
    """(C_n, quotient map): G_n with b1 and bn identified."""
    if n < 3:
        raise FamilyError(f"cn needs n >= 3, got {n}")
    return _gn_quotient(n, _b_id(n, 1), _b_id(n, n))


def an(n):
    return an_quotient(n)[0]


def bn(n):
    return bn_quotient(n)[0]


def cn(n):
    return cn_quotient(n)[0]


def alpha_hom(n):
    return an_quotient(n)[1]


def beta_hom(n):
    return bn_quotient(n)[1]


def gamma_hom(n):
    return cn_quotient(n)[1]


def delta_hom(n, m):
    """The wrap map G_n -> D_m: hubs fixed, rails reduced mod m.

    a_i maps to a_{((i-1) mod m)+1} and likewise for b_i (1-based rail
    positions).  Requires 3 <= m <= n.
    """
    if m < 3:
        raise FamilyError(f"delta needs m >= 3, got {m}")
    if m > n:
        raise FamilyError(f"delta needs m <= n, got n={n}, m={m}")
    source = gn(n)
    target = dn(m)
    mapping = [0] * source.n
    mapping[0] = 0
    mapping[1] = 1
    for i in range(1, n + 1):
        j = ((i - 1) % m) + 1
        mapping[_a_id(i)] = _a_id(j)
        mapping[_b_id(n, i)] = _b_id(m, j)
    f = Homomorphism(source, target, tuple(mapping))
    if not f.is_valid():
        raise StructureError("delta map failed validation")
    return f


# ---------------------------------------------------------------------------
# family spec parsing (CLI syntax)
# ---------------------------------------------------------------------------

def _int_param(family, params):
    try:
        return int(params)
    except ValueError:
        raise FamilyError(
            f"{family} expects one integer parameter, got {params!r}")


def gen(spec):
    """Build a family member from its CLI spec, e.g. 'wheel:9'."""
    family, sep, params = spec.partition(":")
    family = family.strip()
    params = params.strip()
    if not sep or not params:
        raise FamilyError(f"bad family spec {spec!r}: expected family:params")
    if family == "cycle":
        return cycle(_int_param(family, params))
    if family == "clique":
        return clique(_int_param(family, params))
    if family == "biclique":
        parts = params.split(",")
        if len(parts) != 2:
            raise FamilyError(f"biclique expects a,b, got {params!r}")
        return biclique(_int_param(family, parts[0]),
                        _int_param(family, parts[1]))
    if family == "wheel":
        return wheel(_int_param(family, params))
    if family == "bouquet":
        return bouquet([_int_param(family, p) for p in params.split("+")])
    if family == "gn":
        return gn(_int_param(family, params))
    if family == "dn":
        return dn(_int_param(family, params))
    if family == "an":
        return an(_int_param(family, params))
    if family == "bn":
        return bn(_int_param(family, params))
    if family == "cn":
        return cn(_int_param(family, params))
    raise FamilyError(
        f"unknown family {family!r}: use cycle, clique, biclique, wheel, "
        "bouquet, gn, dn, an, bn, or cn")


# ---------------------------------------------------------------------------
# class membership and the bouquet oracle
# ---------------------------------------------------------------------------

def in_class_C(G, budget=solver.DEFAULT_BUDGET):
    """Whether G is a subgraph of a disjoint union of odd wheels.

    Decided per connected component: a component belongs iff it maps
    injectively and edge-preservingly into some odd wheel; candidate
    wheel orders run over odd m up to |component| + 2 (larger wheels
    add no power: an embedded component never needs more rim than it
    has vertices).
    """
    if not G.is_graph:
        raise StructureError("class membership needs a graph")
    for comp in connected_components(G):
        C, _ = induced_substructure(G, comp)
        ok = False
        for m in range(3, len(comp) + 3, 2):
            if solver.find_hom(C, wheel(m), require="injective",
                               budget=budget) is not None:
                ok = True
                break
        if not ok:
            return False
    return True


def bouquet_oracle(G):
    """Semantic bouquet test, independent of any formula machinery.

    True iff some connected component consists of one vertex adjacent
    to all others, where the others are nonempty and 2-regular among
    themselves (i.e. a disjoint union of chordless cycles).
    """
    if not G.is_graph:
        raise StructureError("bouquet oracle needs a graph")
    adj = gaifman_masks(G)
    for comp in connected_components(G):
        members = set(comp)
        comp_mask = 0
        for v in comp:
            comp_mask |= 1 << v
        for x in comp:
            rest = comp_mask & ~(1 << x)
            if rest == 0:
                continue
            if adj[x] & rest != rest:
                continue
            if all((adj[y] & rest & ~(1 << y)).bit_count() == 2
                   for y in members if y != x):
                return True
    return False

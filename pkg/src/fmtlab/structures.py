"""Relational structures and their structural operations.

Elements are dense integer ids ``0..n-1``.  Structures are immutable
after construction, so they can be shared freely; every operation that
renames elements either keeps ids stable by construction (documented on
the operation) or returns the renaming map alongside the result, so
maps compose across constructions.

A *graph* is a structure over the vocabulary with the single binary
symbol ``E``; graph mode enforces irreflexivity and symmetry at
construction and edge input is auto-symmetrized.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from types import MappingProxyType


class StructureError(ValueError):
    """Invalid structure construction or operation input."""


class VocabularyMismatchError(StructureError):
    """Two structures were combined but their vocabularies differ."""


class LoopCreationError(StructureError):
    """A graph quotient tried to identify two adjacent vertices."""


class AmalgamError(StructureError):
    """The shared part of an amalgam differs between the two sides."""


class FileFormatError(ValueError):
    """A structure file violates the line-oriented format."""


_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


# ---------------------------------------------------------------------------
# vocabularies
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Vocabulary:
    """An ordered list of relation symbols with arities.

    ``symbols`` is a tuple of (name, arity) pairs; names are unique
    identifiers and arities are >= 1.
    """

    symbols: tuple

    def __post_init__(self):
        object.__setattr__(self, "symbols", tuple((str(n), int(a))
                                                  for n, a in self.symbols))
        seen = set()
        for name, arity in self.symbols:
            if not _IDENT.match(name):
                raise StructureError(f"bad relation name {name!r}")
            if name in seen:
                raise StructureError(f"duplicate relation name {name!r}")
            seen.add(name)
            if arity < 1:
                raise StructureError(f"arity of {name} must be >= 1")

    @classmethod
    def from_dict(cls, d):
        return cls(tuple(d.items()))

    @property
    def names(self):
        return tuple(name for name, _ in self.symbols)

    def arity(self, name):
        for n, a in self.symbols:
            if n == name:
                return a
        raise StructureError(f"unknown relation {name!r}")

    def __contains__(self, name):
        return any(n == name for n, _ in self.symbols)

    @property
    def is_graph(self):
        return self.symbols == (("E", 2),)


GRAPH_VOCAB = Vocabulary((("E", 2),))


# ---------------------------------------------------------------------------
# structures
# ---------------------------------------------------------------------------

class Structure:
    """A finite relational structure over dense integer ids 0..n-1.

    ``relations`` maps each symbol name to a frozenset of tuples.
    ``labels`` is optional display metadata (id -> name); it is carried
    through operations where meaningful but excluded from equality.
    """

    __slots__ = ("vocab", "n", "_relations", "labels", "_gadj", "_hash")

    def __init__(self, vocab, n, relations=None, labels=None):
        if n < 0:
            raise StructureError("domain size must be >= 0")
        rel = {name: set() for name in vocab.names}
        for name, tuples in (relations or {}).items():
            if name not in vocab:
                raise StructureError(f"unknown relation {name!r}")
            k = vocab.arity(name)
            for t in tuples:
                t = tuple(int(x) for x in t)
                if len(t) != k:
                    raise StructureError(
                        f"tuple {t} has wrong arity for {name}/{k}")
                for x in t:
                    if not 0 <= x < n:
                        raise StructureError(
                            f"element {x} out of range in {name}{t}")
                rel[name].add(t)
        if vocab.is_graph:
            edges = rel["E"]
            for (u, v) in list(edges):
                if u == v:
                    raise StructureError(f"loop at {u} not allowed in a graph")
                edges.add((v, u))
        object.__setattr__(self, "vocab", vocab)
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "_relations",
                           {name: frozenset(ts) for name, ts in rel.items()})
        object.__setattr__(self, "labels",
                           dict(labels) if labels else {})
        object.__setattr__(self, "_gadj", None)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("Structure is immutable")

    # -- basic accessors ----------------------------------------------------

    @classmethod
    def graph(cls, n, edges=(), labels=None):
        """Build a graph on n vertices from an iterable of edge pairs."""
        return cls(GRAPH_VOCAB, n, {"E": [tuple(e) for e in edges]}, labels)

    @property
    def relations(self):
        return MappingProxyType(self._relations)

    def rel(self, name):
        try:
            return self._relations[name]
        except KeyError:
            raise StructureError(f"unknown relation {name!r}") from None

    @property
    def is_graph(self):
        return self.vocab.is_graph

    @property
    def edges(self):
        """Sorted undirected edge list (u, v) with u < v (graphs only)."""
        if not self.is_graph:
            raise StructureError("edges only defined for graphs")
        return sorted({(min(u, v), max(u, v)) for (u, v) in self._relations["E"]})

    def label(self, i):
        return self.labels.get(i, str(i))

    def id_of(self, label):
        """Inverse of label(); raises if the label is unknown."""
        for i, name in self.labels.items():
            if name == label:
                return i
        raise StructureError(f"no element labeled {label!r}")

    # -- equality (labels excluded) ------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, Structure):
            return NotImplemented
        return (self.vocab == other.vocab and self.n == other.n
                and self._relations == other._relations)

    def __ne__(self, other):
        eq = self.__eq__(other)
        return NotImplemented if eq is NotImplemented else not eq

    def __hash__(self):
        if self._hash is None:
            h = hash((self.vocab, self.n,
                      frozenset(self._relations.items())))
            object.__setattr__(self, "_hash", h)
        return self._hash

    def __repr__(self):
        sizes = ", ".join(f"|{name}|={len(ts)}"
                          for name, ts in self._relations.items())
        kind = "graph" if self.is_graph else "structure"
        return f"<{kind} n={self.n} {sizes}>"


# ---------------------------------------------------------------------------
# Gaifman graph, balls, components
# ---------------------------------------------------------------------------

def gaifman_masks(A):
    """Adjacency bitmasks of the Gaifman graph (cached on the structure)."""
    if A._gadj is None:
        adj = [0] * A.n
        for ts in A._relations.values():
            for t in ts:
                for x in t:
                    for y in t:
                        if x != y:
                            adj[x] |= 1 << y
        object.__setattr__(A, "_gadj", tuple(adj))
    return A._gadj


def gaifman_graph(A):
    """The graph on domain(A) joining elements that share a tuple."""
    adj = gaifman_masks(A)
    edges = []
    for u in range(A.n):
        m = adj[u] >> (u + 1)
        v = u + 1
        while m:
            if m & 1:
                edges.append((u, v))
            m >>= 1
            v += 1
    return Structure.graph(A.n, edges, A.labels)


def ball(A, a, r):
    """Elements at Gaifman distance <= r from a (BFS semantics)."""
    if not 0 <= a < A.n:
        raise StructureError(f"element {a} out of range")
    if r < 0:
        raise StructureError("radius must be >= 0")
    adj = gaifman_masks(A)
    seen = 1 << a
    frontier = seen
    for _ in range(r):
        nxt = 0
        m = frontier
        while m:
            low = m & -m
            nxt |= adj[low.bit_length() - 1]
            m ^= low
        nxt &= ~seen
        if not nxt:
            break
        seen |= nxt
        frontier = nxt
    out = set()
    m = seen
    while m:
        low = m & -m
        out.add(low.bit_length() - 1)
        m ^= low
    return frozenset(out)


def connected_components(A):
    """Gaifman components as sorted tuples, ordered by smallest element."""
    adj = gaifman_masks(A)
    unvisited = (1 << A.n) - 1
    comps = []
    while unvisited:
        start = (unvisited & -unvisited).bit_length() - 1
        comp = 1 << start
        frontier = comp
        while frontier:
            nxt = 0
            m = frontier
            while m:
                low = m & -m
                nxt |= adj[low.bit_length() - 1]
                m ^= low
            frontier = nxt & ~comp
            comp |= frontier
        members = []
        m = comp
        while m:
            low = m & -m
            members.append(low.bit_length() - 1)
            m ^= low
        comps.append(tuple(members))
        unvisited &= ~comp
    return comps


# ---------------------------------------------------------------------------
# substructures
# ---------------------------------------------------------------------------

def induced_substructure(A, S):
    """Restrict A to the element set S.

    Returns (B, old_to_new) where B's ids follow the sorted order of S
    and old_to_new maps retained old ids to new ones.
    """
    S = sorted(set(S))
    for x in S:
        if not 0 <= x < A.n:
            raise StructureError(f"element {x} out of range")
    old_to_new = {old: new for new, old in enumerate(S)}
    keep = set(S)
    relations = {}
    for name, ts in A._relations.items():
        relations[name] = [tuple(old_to_new[x] for x in t)
                           for t in ts if all(x in keep for x in t)]
    labels = {old_to_new[i]: lab for i, lab in A.labels.items() if i in keep}
    return Structure(A.vocab, len(S), relations, labels), old_to_new


def is_substructure(B, A, mode="induced", mapping=None):
    """Test whether B embeds into A as a weak/induced/free substructure.

    - weak: some injective map preserving B's tuples into A's
    - induced: additionally reflects A's tuples on the image
    - free: induced, and no tuple of A mixes image and non-image elements

    With ``mapping`` (a sequence of length |B|), only that injection is
    checked; otherwise all injections are searched.
    """
    if mode not in ("weak", "induced", "free"):
        raise StructureError(f"unknown substructure mode {mode!r}")
    if B.vocab != A.vocab:
        raise VocabularyMismatchError("vocabularies differ")

    def free_ok(image):
        img = set(image)
        for ts in A._relations.values():
            for t in ts:
                elems = set(t)
                if elems & img and elems - img:
                    return False
        return True

    if mapping is not None:
        f = Homomorphism(B, A, tuple(mapping))
        if not f.is_injective() or not f.is_valid():
            return False
        if mode == "weak":
            return True
        if not f.is_strong():
            return False
        if mode == "induced":
            return True
        return free_ok(f.map)

    from . import solver
    require = "injective" if mode == "weak" else "embedding"
    if mode in ("weak", "induced"):
        return solver.find_hom(B, A, require=require) is not None
    for f in solver.enumerate_homs(B, A, require="embedding"):
        if free_ok(f.map):
            return True
    return False


# ---------------------------------------------------------------------------
# homomorphisms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Homomorphism:
    """A total map between structure domains, with classification tests.

    The map is stored as a tuple indexed by source id.  Construction
    checks totality and range only; call is_valid() to test tuple
    preservation.
    """

    source: Structure
    target: Structure
    map: tuple

    def __post_init__(self):
        object.__setattr__(self, "map", tuple(int(x) for x in self.map))
        if len(self.map) != self.source.n:
            raise StructureError(
                f"map has {len(self.map)} entries for {self.source.n} elements")
        for x in self.map:
            if not 0 <= x < self.target.n:
                raise StructureError(f"image {x} out of range")

    def __call__(self, i):
        return self.map[i]

    def apply(self, t):
        return tuple(self.map[x] for x in t)

    def is_valid(self):
        """Every source tuple lands in the corresponding target relation."""
        for name, ts in self.source._relations.items():
            target_ts = self.target._relations[name]
            for t in ts:
                if self.apply(t) not in target_ts:
                    return False
        return True

    def is_injective(self):
        return len(set(self.map)) == len(self.map)

    def is_surjective(self):
        return len(set(self.map)) == self.target.n

    def is_strong(self):
        """Tuples are reflected: f(a-tuple) in target implies membership."""
        pre = [[] for _ in range(self.target.n)]
        for a, b in enumerate(self.map):
            pre[b].append(a)
        for name, target_ts in self.target._relations.items():
            source_ts = self.source._relations[name]
            for bt in target_ts:
                stack = [()]
                for b in bt:
                    stack = [partial + (a,) for partial in stack
                             for a in pre[b]]
                for at in stack:
                    if at not in source_ts:
                        return False
        return True

    def is_embedding(self):
        return self.is_injective() and self.is_valid() and self.is_strong()

    def is_full(self):
        """Surjective on elements and on tuples: every target tuple is an
        image of some source tuple."""
        if not self.is_surjective():
            return False
        for name, target_ts in self.target._relations.items():
            images = {self.apply(t) for t in self.source._relations[name]}
            if not target_ts <= images:
                return False
        return True

    def then(self, g):
        """Composition: first self, then g."""
        if g.source is not self.target and g.source != self.target:
            raise StructureError("composition mismatch")
        return Homomorphism(self.source, g.target,
                            tuple(g.map[x] for x in self.map))


# ---------------------------------------------------------------------------
# partitions and quotients
# ---------------------------------------------------------------------------

class Partition:
    """Union-find over 0..n-1 realizing an equivalence relation."""

    def __init__(self, n):
        if n < 0:
            raise StructureError("partition size must be >= 0")
        self.n = n
        self._parent = list(range(n))

    @classmethod
    def from_pairs(cls, n, pairs):
        p = cls(n)
        for a, b in pairs:
            p.union(a, b)
        return p

    def find(self, a):
        if not 0 <= a < self.n:
            raise StructureError(f"element {a} out of range")
        root = a
        while self._parent[root] != root:
            root = self._parent[root]
        while self._parent[a] != root:
            self._parent[a], a = root, self._parent[a]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if ra > rb:
                ra, rb = rb, ra
            self._parent[rb] = ra

    def same(self, a, b):
        return self.find(a) == self.find(b)

    def classes(self):
        """Equivalence classes as sorted tuples, ordered by minimum."""
        groups = {}
        for a in range(self.n):
            groups.setdefault(self.find(a), []).append(a)
        return [tuple(sorted(g)) for g in
                sorted(groups.values(), key=min)]


def quotient(A, P):
    """Quotient A by the partition P.

    Classes are numbered by ascending minimum element.  Returns
    (quotient structure, quotient homomorphism); the map is always full.
    In graph mode, identifying adjacent vertices raises
    LoopCreationError rather than silently dropping the loop.
    """
    if P.n != A.n:
        raise StructureError("partition size differs from domain size")
    classes = P.classes()
    cls_of = [0] * A.n
    for idx, members in enumerate(classes):
        for a in members:
            cls_of[a] = idx
    relations = {}
    for name, ts in A._relations.items():
        out = set()
        for t in ts:
            image = tuple(cls_of[x] for x in t)
            if A.is_graph and image[0] == image[1]:
                raise LoopCreationError(
                    f"identifying adjacent vertices {t[0]} and {t[1]}")
            out.add(image)
        relations[name] = out
    labels = {}
    for idx, members in enumerate(classes):
        m = min(members)
        if m in A.labels:
            labels[idx] = A.labels[m]
    Q = Structure(A.vocab, len(classes), relations, labels)
    return Q, Homomorphism(A, Q, tuple(cls_of))


# ---------------------------------------------------------------------------
# disjoint unions and free amalgams
# ---------------------------------------------------------------------------

def disjoint_union(A, B):
    """Disjoint union; A keeps its ids, B is shifted up by |A|."""
    if A.vocab != B.vocab:
        raise VocabularyMismatchError("vocabularies differ")
    relations = {}
    for name in A.vocab.names:
        shifted = {tuple(x + A.n for x in t) for t in B._relations[name]}
        relations[name] = set(A._relations[name]) | shifted
    labels = dict(A.labels)
    used = set(labels.values())
    for i, lab in B.labels.items():
        new = lab
        while new in used:
            new += "'"
        used.add(new)
        labels[A.n + i] = new
    return Structure(A.vocab, A.n + B.n, relations, labels)


def free_amalgam(A, B, S):
    """Glue A and B along the shared element set S.

    S is a set of ids valid in both structures, identified with each
    other positionally (id s in A is id s in B).  Requires the induced
    substructures A[S] and B[S] to coincide; raises AmalgamError
    otherwise.  Ids of A are preserved; fresh elements of B follow.
    """
    Q, _, _ = free_amalgam_with_maps(A, B, S)
    return Q


def free_amalgam_with_maps(A, B, S):
    """free_amalgam plus the two canonical injections (A -> Q, B -> Q)."""
    if A.vocab != B.vocab:
        raise VocabularyMismatchError("vocabularies differ")
    S = sorted(set(S))
    for s in S:
        if not (0 <= s < A.n and 0 <= s < B.n):
            raise AmalgamError(f"shared element {s} missing from a side")
    SA, _ = induced_substructure(A, S)
    SB, _ = induced_substructure(B, S)
    if SA != SB:
        raise AmalgamError("shared parts differ: A[S] != B[S]")
    U = disjoint_union(A, B)
    P = Partition.from_pairs(U.n, [(s, A.n + s) for s in S])
    Q, q = quotient(U, P)
    mapA = tuple(q.map[a] for a in range(A.n))
    mapB = tuple(q.map[A.n + b] for b in range(B.n))
    return Q, Homomorphism(A, Q, mapA), Homomorphism(B, Q, mapB)


def iterated_amalgam(M, S, n):
    """Glue n copies of M along S: M joined with itself n-1 times.

    Ids of the first copy are preserved throughout, so S stays valid at
    every step.  Size is n*|M| - (n-1)*|S|.
    """
    if n < 1:
        raise StructureError("need at least one copy")
    result = M
    for _ in range(n - 1):
        result = free_amalgam(result, M, S)
    return result


# ---------------------------------------------------------------------------
# tree decompositions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TreeDecomposition:
    """Bags of element ids plus tree edges over bag indices."""

    bags: tuple
    edges: tuple

    def __post_init__(self):
        object.__setattr__(self, "bags",
                           tuple(frozenset(b) for b in self.bags))
        object.__setattr__(self, "edges",
                           tuple((int(i), int(j)) for i, j in self.edges))

    @property
    def width(self):
        if not self.bags:
            return -1
        return max(len(b) for b in self.bags) - 1


# ---------------------------------------------------------------------------
# file format
# ---------------------------------------------------------------------------

def parse_structure(text):
    """Parse the line-oriented structure format.

    Two forms: ``vocab NAME/ARITY ...`` + ``domain N`` + ``tuple NAME
    ID...`` lines, or the graph convenience ``graph N`` + ``edge U V``
    lines (auto-symmetrized).  ``#`` starts a comment; ``# label ID
    NAME`` attaches a display label.
    """
    vocab = None
    n = None
    graph_mode = False
    tuples = {}
    edges = []
    labels = {}

    def err(lineno, msg):
        return FileFormatError(f"line {lineno}: {msg}")

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            parts = line[1:].split()
            if len(parts) >= 3 and parts[0] == "label":
                try:
                    labels[int(parts[1])] = " ".join(parts[2:])
                except ValueError:
                    raise err(lineno, f"bad label id {parts[1]!r}")
            continue
        parts = line.split()
        kw = parts[0]
        if kw == "vocab":
            if vocab is not None or graph_mode:
                raise err(lineno, "duplicate header")
            symbols = []
            for spec_tok in parts[1:]:
                if "/" not in spec_tok:
                    raise err(lineno, f"expected NAME/ARITY, got {spec_tok!r}")
                name, _, ar = spec_tok.rpartition("/")
                try:
                    symbols.append((name, int(ar)))
                except ValueError:
                    raise err(lineno, f"bad arity in {spec_tok!r}")
            if not symbols:
                raise err(lineno, "vocab line needs at least one symbol")
            try:
                vocab = Vocabulary(tuple(symbols))
            except StructureError as e:
                raise err(lineno, str(e))
            tuples = {name: [] for name, _ in symbols}
        elif kw == "graph":
            if vocab is not None or graph_mode:
                raise err(lineno, "duplicate header")
            if len(parts) != 2:
                raise err(lineno, "usage: graph N")
            try:
                n = int(parts[1])
            except ValueError:
                raise err(lineno, f"bad vertex count {parts[1]!r}")
            graph_mode = True
        elif kw == "domain":
            if graph_mode or vocab is None:
                raise err(lineno, "domain line requires a vocab header")
            if n is not None:
                raise err(lineno, "duplicate domain line")
            if len(parts) != 2:
                raise err(lineno, "usage: domain N")
            try:
                n = int(parts[1])
            except ValueError:
                raise err(lineno, f"bad domain size {parts[1]!r}")
        elif kw == "tuple":
            if vocab is None:
                raise err(lineno, "tuple line before vocab header")
            if n is None:
                raise err(lineno, "tuple line before domain line")
            if len(parts) < 2:
                raise err(lineno, "usage: tuple NAME ID...")
            name = parts[1]
            if name not in vocab:
                raise err(lineno, f"unknown relation {name!r}")
            try:
                t = tuple(int(x) for x in parts[2:])
            except ValueError:
                raise err(lineno, "non-integer element id")
            if len(t) != vocab.arity(name):
                raise err(lineno,
                          f"{name} expects {vocab.arity(name)} ids, got {len(t)}")
            tuples[name].append(t)
        elif kw == "edge":
            if not graph_mode:
                raise err(lineno, "edge line requires a graph header")
            if len(parts) != 3:
                raise err(lineno, "usage: edge U V")
            try:
                edges.append((int(parts[1]), int(parts[2])))
            except ValueError:
                raise err(lineno, "non-integer vertex id")
        else:
            raise err(lineno, f"unknown keyword {kw!r}")

    if graph_mode:
        try:
            return Structure.graph(n, edges, labels)
        except StructureError as e:
            raise FileFormatError(str(e))
    if vocab is None:
        raise FileFormatError("empty input: expected vocab or graph header")
    if n is None:
        raise FileFormatError("missing domain line")
    try:
        return Structure(vocab, n, tuples, labels)
    except StructureError as e:
        raise FileFormatError(str(e))


def serialize_structure(A):
    """Inverse of parse_structure; graphs use the graph convenience form."""
    lines = []
    if A.is_graph:
        lines.append(f"graph {A.n}")
        for i in sorted(A.labels):
            lines.append(f"# label {i} {A.labels[i]}")
        for u, v in A.edges:
            lines.append(f"edge {u} {v}")
    else:
        lines.append("vocab " + " ".join(f"{name}/{arity}"
                                         for name, arity in A.vocab.symbols))
        lines.append(f"domain {A.n}")
        for i in sorted(A.labels):
            lines.append(f"# label {i} {A.labels[i]}")
        for name in A.vocab.names:
            for t in sorted(A._relations[name]):
                lines.append(f"tuple {name} " + " ".join(str(x) for x in t))
    return "\n".join(lines) + "\n"


def read_structure(path):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_structure(fh.read())


def write_structure(A, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize_structure(A))

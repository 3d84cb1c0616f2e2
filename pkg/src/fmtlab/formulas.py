"""First-order formulas: AST, s-expression parser, transformations.

The grammar (bit-exact, used by the parser and printer):

    F := (exists v F) | (forall v F) | (and F+) | (or F+) | (not F)
       | (rel NAME v+) | (= v v) | (dist<= INT v v) | true | false

``dist<=`` is a distance atom over the Gaifman graph with a pure-FO
expansion (see to_pure_fo).  Evaluation is delegated to the selected
kernel (compiled or pure Python) via ``fmtlab.kernel``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .structures import GRAPH_VOCAB, Structure, StructureError, Vocabulary


class FormulaError(ValueError):
    """Invalid formula construction or use."""


class ParseError(FormulaError):
    """Syntax error, reported with a character position."""


class CaptureError(FormulaError):
    """A transformation would capture a variable it must keep free."""


class UnboundVariableError(FormulaError):
    """Evaluation hit a free variable missing from the valuation."""


_VAR = re.compile(r"[A-Za-z_][A-Za-z0-9_']*\Z")


# ---------------------------------------------------------------------------
# AST
# ---------------------------------------------------------------------------

class Formula:
    """Base class for AST nodes; all nodes are frozen dataclasses."""

    __slots__ = ()

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True)
class TrueF(Formula):
    pass


@dataclass(frozen=True)
class FalseF(Formula):
    pass


@dataclass(frozen=True)
class Equal(Formula):
    left: str
    right: str


@dataclass(frozen=True)
class Atom(Formula):
    name: str
    vars: tuple

    def __post_init__(self):
        object.__setattr__(self, "vars", tuple(self.vars))
        if not self.vars:
            raise FormulaError("atom needs at least one variable")


@dataclass(frozen=True)
class DistLE(Formula):
    r: int
    left: str
    right: str

    def __post_init__(self):
        if self.r < 0:
            raise FormulaError("distance bound must be >= 0")


@dataclass(frozen=True)
class Not(Formula):
    body: Formula


@dataclass(frozen=True)
class And(Formula):
    parts: tuple

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))
        if not self.parts:
            raise FormulaError("and needs at least one part")


@dataclass(frozen=True)
class Or(Formula):
    parts: tuple

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))
        if not self.parts:
            raise FormulaError("or needs at least one part")


@dataclass(frozen=True)
class Exists(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class Forall(Formula):
    var: str
    body: Formula


TRUE = TrueF()
FALSE = FalseF()


# ---------------------------------------------------------------------------
# parser and printer
# ---------------------------------------------------------------------------

def _tokenize(text):
    tokens = []
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
        elif c in "()":
            tokens.append((c, i))
            i += 1
        else:
            j = i
            while j < len(text) and not text[j].isspace() and text[j] not in "()":
                j += 1
            tokens.append((text[i:j], i))
            i = j
    return tokens


def parse(text, vocab=None):
    """Parse a formula; with a vocabulary, atoms are checked against it."""
    tokens = _tokenize(text)
    pos = 0

    def err(msg, at=None):
        if at is None:
            at = tokens[pos][1] if pos < len(tokens) else len(text)
        return ParseError(f"position {at}: {msg}")

    def peek():
        return tokens[pos][0] if pos < len(tokens) else None

    def take():
        nonlocal pos
        if pos >= len(tokens):
            raise err("unexpected end of input", len(text))
        tok = tokens[pos]
        pos += 1
        return tok

    def take_var():
        tok, at = take()
        if not _VAR.match(tok):
            raise ParseError(f"position {at}: expected a variable, got {tok!r}")
        return tok

    def parse_formula():
        tok, at = take()
        if tok == "true":
            return TRUE
        if tok == "false":
            return FALSE
        if tok != "(":
            raise ParseError(f"position {at}: expected '(' or true/false, "
                             f"got {tok!r}")
        head, hat = take()
        if head in ("exists", "forall"):
            var = take_var()
            body = parse_formula()
            node = Exists(var, body) if head == "exists" else Forall(var, body)
        elif head in ("and", "or"):
            parts = []
            while peek() != ")":
                if peek() is None:
                    raise err("unexpected end of input", len(text))
                parts.append(parse_formula())
            if not parts:
                raise ParseError(f"position {hat}: {head} needs at least "
                                 "one part")
            node = And(tuple(parts)) if head == "and" else Or(tuple(parts))
        elif head == "not":
            node = Not(parse_formula())
        elif head == "rel":
            name, nat = take()
            if not re.match(r"[A-Za-z_][A-Za-z0-9_]*\Z", name):
                raise ParseError(f"position {nat}: bad relation name {name!r}")
            vs = []
            while peek() != ")":
                if peek() is None:
                    raise err("unexpected end of input", len(text))
                vs.append(take_var())
            if not vs:
                raise ParseError(f"position {hat}: rel needs at least "
                                 "one variable")
            if vocab is not None:
                if name not in vocab:
                    raise ParseError(
                        f"position {nat}: unknown relation {name!r}")
                if vocab.arity(name) != len(vs):
                    raise ParseError(
                        f"position {nat}: {name} expects "
                        f"{vocab.arity(name)} variables, got {len(vs)}")
            node = Atom(name, tuple(vs))
        elif head == "=":
            node = Equal(take_var(), take_var())
        elif head == "dist<=":
            rtok, rat = take()
            try:
                r = int(rtok)
            except ValueError:
                raise ParseError(f"position {rat}: expected an integer "
                                 f"bound, got {rtok!r}")
            if r < 0:
                raise ParseError(f"position {rat}: distance bound must "
                                 "be >= 0")
            node = DistLE(r, take_var(), take_var())
        else:
            raise ParseError(f"position {hat}: unknown form {head!r}")
        tok, at = take()
        if tok != ")":
            raise ParseError(f"position {at}: expected ')', got {tok!r}")
        return node

    node = parse_formula()
    if pos < len(tokens):
        raise err(f"trailing input {tokens[pos][0]!r}")
    return node


def to_text(f):
    """Print a formula; parse(to_text(f)) == f."""
    if isinstance(f, TrueF):
        return "true"
    if isinstance(f, FalseF):
        return "false"
    if isinstance(f, Atom):
        return f"(rel {f.name} " + " ".join(f.vars) + ")"
    if isinstance(f, Equal):
        return f"(= {f.left} {f.right})"
    if isinstance(f, DistLE):
        return f"(dist<= {f.r} {f.left} {f.right})"
    if isinstance(f, Not):
        return f"(not {to_text(f.body)})"
    if isinstance(f, And):
        return "(and " + " ".join(to_text(p) for p in f.parts) + ")"
    if isinstance(f, Or):
        return "(or " + " ".join(to_text(p) for p in f.parts) + ")"
    if isinstance(f, Exists):
        return f"(exists {f.var} {to_text(f.body)})"
    if isinstance(f, Forall):
        return f"(forall {f.var} {to_text(f.body)})"
    raise FormulaError(f"not a formula: {f!r}")


# ---------------------------------------------------------------------------
# structural queries
# ---------------------------------------------------------------------------

def free_vars(f):
    if isinstance(f, (TrueF, FalseF)):
        return frozenset()
    if isinstance(f, Atom):
        return frozenset(f.vars)
    if isinstance(f, Equal):
        return frozenset((f.left, f.right))
    if isinstance(f, DistLE):
        return frozenset((f.left, f.right))
    if isinstance(f, Not):
        return free_vars(f.body)
    if isinstance(f, (And, Or)):
        out = frozenset()
        for p in f.parts:
            out |= free_vars(p)
        return out
    if isinstance(f, (Exists, Forall)):
        return free_vars(f.body) - {f.var}
    raise FormulaError(f"not a formula: {f!r}")


def all_vars(f):
    """Every variable name occurring in f, bound or free."""
    if isinstance(f, (TrueF, FalseF)):
        return frozenset()
    if isinstance(f, Atom):
        return frozenset(f.vars)
    if isinstance(f, Equal):
        return frozenset((f.left, f.right))
    if isinstance(f, DistLE):
        return frozenset((f.left, f.right))
    if isinstance(f, Not):
        return all_vars(f.body)
    if isinstance(f, (And, Or)):
        out = frozenset()
        for p in f.parts:
            out |= all_vars(p)
        return out
    if isinstance(f, (Exists, Forall)):
        return all_vars(f.body) | {f.var}
    raise FormulaError(f"not a formula: {f!r}")


def quantifier_rank(f):
    """Maximum quantifier nesting; DistLE(r) counts as max(0, r-1), the
    rank of its pure-FO expansion on graphs."""
    if isinstance(f, (TrueF, FalseF, Atom, Equal)):
        return 0
    if isinstance(f, DistLE):
        return max(0, f.r - 1)
    if isinstance(f, Not):
        return quantifier_rank(f.body)
    if isinstance(f, (And, Or)):
        return max(quantifier_rank(p) for p in f.parts)
    if isinstance(f, (Exists, Forall)):
        return 1 + quantifier_rank(f.body)
    raise FormulaError(f"not a formula: {f!r}")


def is_existential_positive(f):
    """True iff f uses only exists, and, or, atoms, =, dist<=, true/false.

    Distance atoms count as positive: their pure-FO expansion is
    existential-positive.
    """
    if isinstance(f, (TrueF, FalseF, Atom, Equal, DistLE)):
        return True
    if isinstance(f, (And, Or)):
        return all(is_existential_positive(p) for p in f.parts)
    if isinstance(f, Exists):
        return is_existential_positive(f.body)
    if isinstance(f, (Not, Forall)):
        return False
    raise FormulaError(f"not a formula: {f!r}")


def _fresh(base, used):
    if base not in used:
        return base
    i = 2
    while f"{base}_{i}" in used:
        i += 1
    return f"{base}_{i}"


def substitute(f, mapping):
    """Rename free variables per mapping, alpha-renaming bound variables
    when they would capture an incoming name."""
    mapping = {k: v for k, v in mapping.items() if k != v}
    if not mapping:
        return f

    def walk(node, subst):
        if isinstance(node, (TrueF, FalseF)):
            return node
        if isinstance(node, Atom):
            return Atom(node.name, tuple(subst.get(v, v) for v in node.vars))
        if isinstance(node, Equal):
            return Equal(subst.get(node.left, node.left),
                         subst.get(node.right, node.right))
        if isinstance(node, DistLE):
            return DistLE(node.r, subst.get(node.left, node.left),
                          subst.get(node.right, node.right))
        if isinstance(node, Not):
            return Not(walk(node.body, subst))
        if isinstance(node, And):
            return And(tuple(walk(p, subst) for p in node.parts))
        if isinstance(node, Or):
            return Or(tuple(walk(p, subst) for p in node.parts))
        if isinstance(node, (Exists, Forall)):
            inner = {k: v for k, v in subst.items() if k != node.var}
            relevant = {k: v for k, v in inner.items()
                        if k in free_vars(node.body)}
            var = node.var
            body = node.body
            if var in relevant.values():
                used = all_vars(body) | set(relevant.values()) \
                    | set(relevant.keys()) | {var}
                nv = _fresh(var, used)
                body = walk(body, {var: nv})
                var = nv
            body = walk(body, relevant)
            return Exists(var, body) if isinstance(node, Exists) \
                else Forall(var, body)
        raise FormulaError(f"not a formula: {node!r}")

    return walk(f, dict(mapping))


# ---------------------------------------------------------------------------
# distance expansion
# ---------------------------------------------------------------------------

def _adjacency_formula(u, v, vocab, used):
    """Co-occurrence of u and v in some tuple, as a formula."""
    if vocab.is_graph:
        # Edge relations are stored symmetrically, so one atom suffices.
        return Atom("E", (u, v))
    options = []
    for name, arity in vocab.symbols:
        if arity < 2:
            continue
        for i in range(arity):
            for j in range(arity):
                if i == j:
                    continue
                slots = []
                fresh_needed = arity - 2
                extra = []
                taken = set(used) | {u, v}
                for _ in range(fresh_needed):
                    w = _fresh("_w", taken)
                    taken.add(w)
                    extra.append(w)
                it = iter(extra)
                for pos in range(arity):
                    if pos == i:
                        slots.append(u)
                    elif pos == j:
                        slots.append(v)
                    else:
                        slots.append(next(it))
                atom = Atom(name, tuple(slots))
                for w in reversed(extra):
                    atom = Exists(w, atom)
                options.append(atom)
    if not options:
        return FALSE
    if len(options) == 1:
        return options[0]
    return Or(tuple(options))


def to_pure_fo(f, vocab=GRAPH_VOCAB):
    """Expand every dist<= atom into plain first-order logic.

    dist<=(0,x,y) becomes x = y; dist<=(1,x,y) becomes x = y or
    adjacency; larger bounds chain r-1 fresh midpoints with
    (equal-or-adjacent) steps.  On graphs, the expansion of
    dist<=(r,...) has quantifier rank max(0, r-1), matching
    quantifier_rank's accounting, so ranks are preserved.
    """
    used = set(all_vars(f))

    def step(u, v):
        return Or((Equal(u, v), _adjacency_formula(u, v, vocab, used)))

    def expand(node):
        if isinstance(node, (TrueF, FalseF, Atom, Equal)):
            return node
        if isinstance(node, DistLE):
            x, y, r = node.left, node.right, node.r
            if r == 0:
                return Equal(x, y)
            if r == 1:
                return step(x, y)
            mids = []
            for _ in range(r - 1):
                m = _fresh("_m", used)
                used.add(m)
                mids.append(m)
            chain = [x] + mids + [y]
            body = And(tuple(step(chain[i], chain[i + 1])
                             for i in range(len(chain) - 1)))
            for m in reversed(mids):
                body = Exists(m, body)
            return body
        if isinstance(node, Not):
            return Not(expand(node.body))
        if isinstance(node, And):
            return And(tuple(expand(p) for p in node.parts))
        if isinstance(node, Or):
            return Or(tuple(expand(p) for p in node.parts))
        if isinstance(node, Exists):
            return Exists(node.var, expand(node.body))
        if isinstance(node, Forall):
            return Forall(node.var, expand(node.body))
        raise FormulaError(f"not a formula: {node!r}")

    return expand(f)


# ---------------------------------------------------------------------------
# relativization and basic local sentences
# ---------------------------------------------------------------------------

def relativize(psi, center, r):
    """Restrict every quantifier of psi to the r-ball around center.

    Each exists-x body gains the guard dist<=(r, center, x); each
    forall-x body is guarded by its negation.  Evaluating the result on
    A with center bound to a equals evaluating psi on the substructure
    induced by ball(A, a, r) — for psi without dist<= atoms (distance
    atoms keep measuring host distances).  Raises CaptureError if psi
    rebinds the center variable.
    """
    if r < 0:
        raise FormulaError("radius must be >= 0")

    def walk(node):
        if isinstance(node, (TrueF, FalseF, Atom, Equal, DistLE)):
            return node
        if isinstance(node, Not):
            return Not(walk(node.body))
        if isinstance(node, And):
            return And(tuple(walk(p) for p in node.parts))
        if isinstance(node, Or):
            return Or(tuple(walk(p) for p in node.parts))
        if isinstance(node, Exists):
            if node.var == center:
                raise CaptureError(f"center {center!r} is rebound")
            guard = DistLE(r, center, node.var)
            return Exists(node.var, And((guard, walk(node.body))))
        if isinstance(node, Forall):
            if node.var == center:
                raise CaptureError(f"center {center!r} is rebound")
            guard = DistLE(r, center, node.var)
            return Forall(node.var, Or((Not(guard), walk(node.body))))
        raise FormulaError(f"not a formula: {node!r}")

    return walk(psi)


def basic_local(r, n, psi):
    """The sentence: n points pairwise at distance > 2r, each satisfying
    psi relativized to its r-ball.

    psi must have exactly one free variable (the center).  Witness
    variables are named x1..xn, renamed if psi already uses them.
    """
    if n < 1:
        raise FormulaError("width must be >= 1")
    if r < 0:
        raise FormulaError("radius must be >= 0")
    fv = free_vars(psi)
    if len(fv) != 1:
        raise FormulaError(
            f"local condition needs exactly one free variable, has {sorted(fv)}")
    (center,) = fv
    used = set(all_vars(psi))
    xs = []
    for i in range(1, n + 1):
        x = _fresh(f"x{i}", used | set(xs))
        xs.append(x)
    rel = relativize(psi, center, r)
    parts = []
    for i in range(n):
        for j in range(i + 1, n):
            parts.append(Not(DistLE(2 * r, xs[i], xs[j])))
    for x in xs:
        parts.append(substitute(rel, {center: x}))
    body = parts[0] if len(parts) == 1 else And(tuple(parts))
    for x in reversed(xs):
        body = Exists(x, body)
    return body


@dataclass(frozen=True)
class BasicLocalSentence:
    """Radius, width, and one-free-variable local condition."""

    r: int
    n: int
    psi: Formula

    def to_formula(self):
        return basic_local(self.r, self.n, self.psi)


# ---------------------------------------------------------------------------
# canonical queries
# ---------------------------------------------------------------------------

def canonical_query(A):
    """The existential-positive sentence asserting a homomorphism from A.

    B satisfies it iff some homomorphism A -> B exists.
    """
    if A.n == 0:
        raise FormulaError("canonical query needs a nonempty structure")
    xs = [f"x{i}" for i in range(A.n)]
    atoms = []
    for name in A.vocab.names:
        for t in sorted(A.relations[name]):
            atoms.append(Atom(name, tuple(xs[i] for i in t)))
    body = And(tuple(atoms)) if atoms else TRUE
    for x in reversed(xs):
        body = Exists(x, body)
    return body


# ---------------------------------------------------------------------------
# evaluation (delegates to the kernel)
# ---------------------------------------------------------------------------

def evaluate(f, A, valuation=None):
    """Standard FO semantics; dist<= via BFS on the Gaifman graph."""
    valuation = dict(valuation or {})
    missing = free_vars(f) - set(valuation)
    if missing:
        raise UnboundVariableError(
            f"unbound free variables: {', '.join(sorted(missing))}")
    for v, x in valuation.items():
        if not 0 <= x < A.n:
            raise StructureError(f"element {x} out of range for {v!r}")
    from . import kernel
    return kernel.evaluate(f, A, valuation)


# ---------------------------------------------------------------------------
# vertex-marking interpretation
# ---------------------------------------------------------------------------

def pbar_vocab(k):
    """Vocabulary {E/2, P1/1..Pk/1, Q1/1..Qk/1}."""
    symbols = [("E", 2)]
    for i in range(1, k + 1):
        symbols.append((f"P{i}", 1))
    for i in range(1, k + 1):
        symbols.append((f"Q{i}", 1))
    return Vocabulary(tuple(symbols))


def pbar_structure(G, pbar):
    """Mark the vertices of pbar: delete their edges, record each vertex
    in P_i and its old neighborhood in Q_i.  Same domain as G."""
    if not G.is_graph:
        raise StructureError("pbar_structure needs a graph")
    pbar = tuple(int(p) for p in pbar)
    if len(set(pbar)) != len(pbar):
        raise StructureError("marked vertices must be distinct")
    for p in pbar:
        if not 0 <= p < G.n:
            raise StructureError(f"element {p} out of range")
    k = len(pbar)
    if k == 0:
        return G
    marked = set(pbar)
    relations = {"E": [t for t in G.rel("E")
                       if t[0] not in marked and t[1] not in marked]}
    for i, p in enumerate(pbar, start=1):
        relations[f"P{i}"] = [(p,)]
        relations[f"Q{i}"] = [(v,) for (u, v) in G.rel("E") if u == p]
    return Structure(pbar_vocab(k), G.n, relations, G.labels)


def interpret_k(f, k):
    """Rewrite a graph formula to run on marked structures.

    Distance atoms are expanded first (marked structures have different
    Gaifman distances), then every edge atom E(x,y) becomes the
    disjunction of P_i(x)&Q_i(y) for each i, E(x,y), and P_i(y)&Q_i(x)
    for each i.  For every graph G and marking pbar of size k:
    G satisfies f iff pbar_structure(G, pbar) satisfies the result.
    Quantifier rank is preserved.
    """
    if k < 0:
        raise FormulaError("k must be >= 0")
    for name, arity in _atom_signatures(f):
        if name != "E" or arity != 2:
            raise FormulaError(
                f"interpret_k needs a graph formula; found atom "
                f"{name}/{arity}")
    g = to_pure_fo(f, GRAPH_VOCAB)

    def rep(node):
        if isinstance(node, Atom):
            x, y = node.vars
            parts = []
            for i in range(1, k + 1):
                parts.append(And((Atom(f"P{i}", (x,)), Atom(f"Q{i}", (y,)))))
            parts.append(Atom("E", (x, y)))
            for i in range(1, k + 1):
                parts.append(And((Atom(f"P{i}", (y,)), Atom(f"Q{i}", (x,)))))
            return parts[0] if len(parts) == 1 else Or(tuple(parts))
        if isinstance(node, (TrueF, FalseF, Equal)):
            return node
        if isinstance(node, Not):
            return Not(rep(node.body))
        if isinstance(node, And):
            return And(tuple(rep(p) for p in node.parts))
        if isinstance(node, Or):
            return Or(tuple(rep(p) for p in node.parts))
        if isinstance(node, Exists):
            return Exists(node.var, rep(node.body))
        if isinstance(node, Forall):
            return Forall(node.var, rep(node.body))
        raise FormulaError(f"not a formula: {node!r}")

    return rep(g)


def _atom_signatures(f):
    if isinstance(f, Atom):
        return {(f.name, len(f.vars))}
    if isinstance(f, (TrueF, FalseF, Equal, DistLE)):
        return set()
    if isinstance(f, Not):
        return _atom_signatures(f.body)
    if isinstance(f, (And, Or)):
        out = set()
        for p in f.parts:
            out |= _atom_signatures(p)
        return out
    if isinstance(f, (Exists, Forall)):
        return _atom_signatures(f.body)
    raise FormulaError(f"not a formula: {f!r}")


# ---------------------------------------------------------------------------
# named built-ins
# ---------------------------------------------------------------------------

_PSI_BOUQUET_TEXT = (
    "(exists u (exists v (and"
    " (not (= u v)) (not (= u x)) (not (= v x))"
    " (rel E z u) (rel E z v)"
    " (forall w (or (not (rel E w z)) (= w u) (= w v) (= w x))))))"
)

_PHI_BOUQUET_TEXT = (
    "(exists x (exists y (and (rel E x y)"
    " (forall z (or (not (and (not (= z x)) (dist<= 2 x z)))"
    f" (and (rel E x z) {_PSI_BOUQUET_TEXT}))))))"
)

_CHI6_TEXT = (
    "(and (rel E x1 y2) (rel E y1 y2) (rel E z1 y2)"
    " (rel E z1 z2) (rel E y2 z2) (rel E z2 x2))"
)

_PHI_PLANAR_TEXT = (
    "(exists x1 (exists x2 (exists y (exists z (and"
    " (rel E x1 y) (rel E y z) (rel E z x2)"
    " (forall a (forall b (or"
    " (not (and (rel E x1 a) (rel E a b) (rel E b x2)))"
    " (exists c (exists d (and"
    " (rel E x1 c) (rel E a c) (rel E b c)"
    " (rel E b d) (rel E c d) (rel E d x2))))))))))))"
)

_PHI_HAT_TEXT = (
    f"(or {_PHI_PLANAR_TEXT}"
    " (exists x1 (exists x2 (exists x3 (exists x4 (and"
    " (rel E x1 x2) (rel E x1 x3) (rel E x1 x4)"
    " (rel E x2 x3) (rel E x2 x4) (rel E x3 x4)))))))"
)

BUILTIN_FORMULAS = {
    "psi_bouquet": parse(_PSI_BOUQUET_TEXT),
    "phi_bouquet": parse(_PHI_BOUQUET_TEXT),
    "chi6": parse(_CHI6_TEXT),
    "phi_planar": parse(_PHI_PLANAR_TEXT),
    "phi_hat": parse(_PHI_HAT_TEXT),
}

"""Kernel selection and the lowering layer shared by both kernels.

Two interchangeable kernels implement formula evaluation and
homomorphism search: a compiled extension (``fmtlab._ckernel``, built
from Cython, limited to 63 elements) and a pure-Python mirror
(``fmtlab._pykernel``, any size).  This module selects between them,
lowers formula ASTs to opcode programs, and encodes structures into the
bitmask tables the kernels consume.

Selection: the environment variable ``FMTLAB_KERNEL`` may be ``auto``
(default: compiled when built and the instance fits, pure otherwise),
``py``/``python`` (always pure), or ``c`` (always compiled; oversized
instances then raise).  ``set_kernel`` changes the mode at runtime.
"""

from __future__ import annotations

import functools
import os
from dataclasses import dataclass

from . import _ops, _pykernel
from .formulas import (And, Atom, DistLE, Equal, Exists, FalseF, Forall,
                       FormulaError, Not, Or, TrueF, free_vars)
from .structures import StructureError, gaifman_masks

try:
    from . import _ckernel
except ImportError:  # not built; the pure kernel covers everything
    _ckernel = None


def _parse_mode(value):
    v = (value or "auto").strip().lower()
    if v in ("", "auto"):
        return "auto"
    if v in ("py", "python"):
        return "python"
    if v == "c":
        if _ckernel is None:
            raise RuntimeError(
                "FMTLAB_KERNEL=c requested but the compiled kernel is not "
                "built; reinstall with Cython available or use auto/py")
        return "c"
    raise RuntimeError(f"bad kernel mode {value!r}: use auto, py, or c")


_mode = _parse_mode(os.environ.get("FMTLAB_KERNEL", "auto"))


def have_c_kernel():
    """Whether the compiled kernel was built and imported."""
    return _ckernel is not None


def set_kernel(mode):
    """Switch kernel selection at runtime: 'auto', 'py'/'python', or 'c'."""
    global _mode
    _mode = _parse_mode(mode)


def active_kernel():
    """Name of the kernel the current mode prefers: 'c' or 'python'."""
    if _mode == "c":
        return "c"
    if _mode == "auto" and _ckernel is not None:
        return "c"
    return "python"


def _pick(fits):
    """Resolve the implementation for one call; auto falls back to pure
    when the instance does not fit the compiled kernel's limits."""
    if _mode == "python":
        return _pykernel
    if _mode == "c":
        return _ckernel
    return _ckernel if (_ckernel is not None and fits) else _pykernel


# ---------------------------------------------------------------------------
# formula lowering
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Layout:
    """Relation/distance index assignment shared by a lowered program
    and the structure encodings it runs on."""

    unary: tuple
    binary: tuple
    higher: tuple  # (name, arity) pairs
    dist_rs: tuple


def _collect(f, vocab, unary, binary, higher, dists):
    if isinstance(f, Atom):
        arity = vocab.arity(f.name)
        if arity != len(f.vars):
            raise FormulaError(
                f"{f.name} expects {arity} variables, got {len(f.vars)}")
        if arity == 1:
            unary.add(f.name)
        elif arity == 2:
            binary.add(f.name)
        else:
            higher.add((f.name, arity))
    elif isinstance(f, DistLE):
        dists.add(f.r)
    elif isinstance(f, Not):
        _collect(f.body, vocab, unary, binary, higher, dists)
    elif isinstance(f, (And, Or)):
        for p in f.parts:
            _collect(p, vocab, unary, binary, higher, dists)
    elif isinstance(f, (Exists, Forall)):
        _collect(f.body, vocab, unary, binary, higher, dists)
    elif not isinstance(f, (TrueF, FalseF, Equal)):
        raise FormulaError(f"not a formula: {f!r}")


def lower_formula(f, vocab):
    """Lower an AST to an opcode program.

    Returns (prog, free_slots, nslots, layout) where free_slots maps
    each free variable to its slot index.
    """
    unary, binary, higher, dists = set(), set(), set(), set()
    _collect(f, vocab, unary, binary, higher, dists)
    layout = Layout(tuple(sorted(unary)), tuple(sorted(binary)),
                    tuple(sorted(higher)), tuple(sorted(dists)))
    uidx = {name: i for i, name in enumerate(layout.unary)}
    bidx = {name: i for i, name in enumerate(layout.binary)}
    kidx = {name: i for i, (name, _) in enumerate(layout.higher)}
    didx = {r: i for i, r in enumerate(layout.dist_rs)}

    slots = {}
    nslots = 0

    def new_slot(var):
        nonlocal nslots
        slot = nslots
        nslots += 1
        if nslots > _ops.MAX_SLOTS:
            raise FormulaError(
                f"too many variables (limit {_ops.MAX_SLOTS})")
        return slot

    for v in sorted(free_vars(f)):
        slots[v] = new_slot(v)
    free_slots = dict(slots)

    def slot_of(env, var):
        try:
            return env[var]
        except KeyError:
            raise FormulaError(f"unbound variable {var!r}") from None

    def walk(node, env):
        if isinstance(node, TrueF):
            return (_ops.OP_TRUE,)
        if isinstance(node, FalseF):
            return (_ops.OP_FALSE,)
        if isinstance(node, Equal):
            return (_ops.OP_EQ, slot_of(env, node.left),
                    slot_of(env, node.right))
        if isinstance(node, DistLE):
            return (_ops.OP_DIST, didx[node.r], slot_of(env, node.left),
                    slot_of(env, node.right))
        if isinstance(node, Atom):
            ss = tuple(slot_of(env, v) for v in node.vars)
            if len(ss) == 1:
                return (_ops.OP_REL1, uidx[node.name], ss[0])
            if len(ss) == 2:
                return (_ops.OP_REL2, bidx[node.name], ss[0], ss[1])
            return (_ops.OP_RELK, kidx[node.name], ss)
        if isinstance(node, Not):
            return (_ops.OP_NOT, walk(node.body, env))
        if isinstance(node, And):
            return (_ops.OP_AND, tuple(walk(p, env) for p in node.parts))
        if isinstance(node, Or):
            return (_ops.OP_OR, tuple(walk(p, env) for p in node.parts))
        if isinstance(node, (Exists, Forall)):
            slot = new_slot(node.var)
            inner = dict(env)
            inner[node.var] = slot
            op = _ops.OP_EXISTS if isinstance(node, Exists) else _ops.OP_FORALL
            return (op, slot, walk(node.body, inner))
        raise FormulaError(f"not a formula: {node!r}")

    prog = walk(f, dict(slots))
    return prog, free_slots, nslots, layout


# ---------------------------------------------------------------------------
# structure encoding
# ---------------------------------------------------------------------------

def _ball_mask_table(A, r):
    adj = gaifman_masks(A)
    out = []
    for v in range(A.n):
        seen = 1 << v
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
        out.append(seen)
    return tuple(out)


def encode_structure(A, layout):
    """Encode A into the mask tables consumed by the kernels:
    (n, rel1, rel2, relk, dist) following the layout's index order."""
    rel1 = []
    for name in layout.unary:
        mask = 0
        for t in A.rel(name):
            mask |= 1 << t[0]
        rel1.append(mask)
    rel2 = []
    for name in layout.binary:
        table = [0] * A.n
        for (u, v) in A.rel(name):
            table[u] |= 1 << v
        rel2.append(tuple(table))
    relk = []
    for name, _arity in layout.higher:
        relk.append(frozenset(A.rel(name)))
    dist = [_ball_mask_table(A, r) for r in layout.dist_rs]
    return (A.n, tuple(rel1), tuple(rel2), tuple(relk), tuple(dist))


@functools.lru_cache(maxsize=512)
def _lower_cached(f, vocab):
    return lower_formula(f, vocab)


def evaluate(f, A, valuation):
    """Evaluate a formula on a structure under a valuation of its free
    variables (callers validate coverage and ranges)."""
    prog, free_slots, nslots, layout = _lower_cached(f, A.vocab)
    enc = encode_structure(A, layout)
    init = [(slot, valuation[var]) for var, slot in free_slots.items()]
    fits = A.n <= 63 and nslots <= _ops.MAX_SLOTS
    impl = _pick(fits)
    return impl.eval_program(prog, enc, init, nslots)


# ---------------------------------------------------------------------------
# homomorphism search lowering
# ---------------------------------------------------------------------------

def hom_search(A, B, *, injective=False, strong=False, full=False,
               partial=None, allowed=None, limit=0, budget=10 ** 8):
    """Search for homomorphisms A -> B over a vocabulary of arity <= 2.

    Returns (maps, nodes, exceeded): maps in backtracking order as
    tuples indexed by A-element, the number of assignment attempts, and
    whether the node budget cut the search short.  ``partial`` pins
    elements (a -> b); ``allowed`` restricts candidate sets
    (a -> iterable of b); ``limit`` > 0 stops after that many maps.
    """
    vocab = A.vocab
    if any(arity > 2 for _, arity in vocab.symbols):
        raise StructureError("kernel search handles arity <= 2 only")
    nA, nB = A.n, B.n
    full_maskB = (1 << nB) - 1

    unary_names = [name for name, ar in vocab.symbols if ar == 1]
    binary_names = [name for name, ar in vocab.symbols if ar == 2]

    dom0 = [full_maskB] * nA

    for name in unary_names:
        maskB = 0
        for t in B.rel(name):
            maskB |= 1 << t[0]
        inA = {t[0] for t in A.rel(name)}
        for a in range(nA):
            if a in inA:
                dom0[a] &= maskB
            elif strong:
                dom0[a] &= ~maskB

    rels = []
    strongA = []
    for name in binary_names:
        arcsA = sorted(A.rel(name))
        outB = [0] * nB
        inB = [0] * nB
        for (u, v) in B.rel(name):
            outB[u] |= 1 << v
            inB[v] |= 1 << u
        arcsB = sorted(B.rel(name))
        rels.append((tuple(arcsA), tuple(outB), tuple(inB), tuple(arcsB)))
        if strong:
            outA = [0] * nA
            for (u, v) in A.rel(name):
                outA[u] |= 1 << v
            strongA.append(tuple(outA))

    if injective:
        if nA > nB:
            return [], 0, False
        for ridx, name in enumerate(binary_names):
            _, outB, inB, _ = rels[ridx]
            outA = [0] * nA
            inA = [0] * nA
            for (u, v) in A.rel(name):
                outA[u] |= 1 << v
                inA[v] |= 1 << u
            outdegB = [outB[b].bit_count() for b in range(nB)]
            indegB = [inB[b].bit_count() for b in range(nB)]
            for a in range(nA):
                da, db = outA[a].bit_count(), inA[a].bit_count()
                mask = 0
                for b in range(nB):
                    if outdegB[b] >= da and indegB[b] >= db:
                        mask |= 1 << b
                dom0[a] &= mask

    for a, b in (partial or {}).items():
        if not 0 <= a < nA:
            raise StructureError(f"pinned element {a} out of range")
        if not 0 <= b < nB:
            raise StructureError(f"pinned image {b} out of range")
        dom0[a] &= 1 << b
    for a, bs in (allowed or {}).items():
        if not 0 <= a < nA:
            raise StructureError(f"restricted element {a} out of range")
        mask = 0
        for b in bs:
            if not 0 <= b < nB:
                raise StructureError(f"allowed image {b} out of range")
            mask |= 1 << b
        dom0[a] &= mask

    unary_cov = []
    if full:
        for name in unary_names:
            maskB = 0
            for t in B.rel(name):
                maskB |= 1 << t[0]
            a_ids = tuple(sorted(t[0] for t in A.rel(name)))
            unary_cov.append((a_ids, maskB))

    fits = nA <= 63 and nB <= 63
    impl = _pick(fits)
    return impl.search_homs(nA, nB, dom0, tuple(rels), tuple(strongA),
                            tuple(unary_cov), injective, strong, full,
                            limit, budget)

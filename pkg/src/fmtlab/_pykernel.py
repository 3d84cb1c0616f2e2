"""Pure-Python evaluation and search kernel.

This module implements the two hot inner loops of the package — lowered
first-order formula evaluation and backtracking homomorphism search —
in plain Python.  ``fmtlab._ckernel`` is a compiled mirror with the
exact same interface and semantics; ``fmtlab.kernel`` picks one at
import time.

Domains and neighbourhoods are bitmasks.  Python integers are unbounded,
so this kernel works for structures of any size; the C kernel is limited
to 63 elements and the dispatcher falls back to this module beyond that.
"""

from ._ops import (
    OP_AND,
    OP_DIST,
    OP_EQ,
    OP_EXISTS,
    OP_FALSE,
    OP_FORALL,
    OP_NOT,
    OP_OR,
    OP_REL1,
    OP_REL2,
    OP_RELK,
    OP_TRUE,
)

KERNEL_NAME = "python"


def eval_program(prog, enc, init, nslots):
    """Evaluate a lowered program on an encoded structure.

    ``init`` is a sequence of (slot, element) pairs for the free
    variables.  Returns a bool.
    """
    n, rel1, rel2, relk, dist = enc
    env = [0] * nslots
    for slot, val in init:
        env[slot] = val

    def ev(node):
        op = node[0]
        if op == OP_REL2:
            return (rel2[node[1]][env[node[2]]] >> env[node[3]]) & 1 != 0
        if op == OP_AND:
            for sub in node[1]:
                if not ev(sub):
                    return False
            return True
        if op == OP_OR:
            for sub in node[1]:
                if ev(sub):
                    return True
            return False
        if op == OP_EXISTS:
            slot, sub = node[1], node[2]
            for v in range(n):
                env[slot] = v
                if ev(sub):
                    return True
            return False
        if op == OP_FORALL:
            slot, sub = node[1], node[2]
            for v in range(n):
                env[slot] = v
                if not ev(sub):
                    return False
            return True
        if op == OP_NOT:
            return not ev(node[1])
        if op == OP_EQ:
            return env[node[1]] == env[node[2]]
        if op == OP_DIST:
            return (dist[node[1]][env[node[2]]] >> env[node[3]]) & 1 != 0
        if op == OP_REL1:
            return (rel1[node[1]] >> env[node[2]]) & 1 != 0
        if op == OP_RELK:
            return tuple(env[s] for s in node[2]) in relk[node[1]]
        if op == OP_TRUE:
            return True
        if op == OP_FALSE:
            return False
        raise ValueError("bad opcode %r" % (node[0],))

    return ev(prog)


def search_homs(nA, nB, dom0, rels, strongA, unary_cov,
                injective, strong, full, limit, budget):
    """Backtracking search for homomorphisms A -> B over binary/unary data.

    ``dom0``      initial candidate bitmask (over B) per A-element;
    ``rels``      per binary relation: (arcsA, outB, inB, arcsB) where
                  arcs are tuples of ordered pairs and outB/inB are
                  per-element neighbour masks of B;
    ``strongA``   per binary relation the out-neighbour masks of A, or
                  None when ``strong`` is off;
    ``unary_cov`` per unary relation (a_ids, b_mask), used only by the
                  ``full`` leaf check;
    ``limit``     stop after this many results (<= 0: no limit);
    ``budget``    maximum number of assignment attempts.

    Returns (results, nodes, exceeded): results is a list of nA-tuples
    (image of each A-element) in search order; exceeded means the budget
    cut the search short.
    """
    if nA == 0:
        if full and nB != 0:
            return [], 0, False
        return [()], 0, False

    # cons[a]: constraints pruning dom[a]; deps[a]: vertices to re-check
    # after dom[a] shrinks.
    cons = [[] for _ in range(nA)]
    deps = [[] for _ in range(nA)]
    for ridx, (arcsA, _outB, _inB, _arcsB) in enumerate(rels):
        for (a, a2) in arcsA:
            cons[a2].append((a, ridx, 0))
            deps[a].append(a2)
            cons[a].append((a2, ridx, 1))
            deps[a2].append(a)

    full_maskB = (1 << nB) - 1

    def revise(dom, a):
        d = dom[a]
        for (src, ridx, dirflag) in cons[a]:
            table = rels[ridx][2] if dirflag else rels[ridx][1]
            allowed = 0
            s = dom[src]
            while s:
                low = s & -s
                allowed |= table[low.bit_length() - 1]
                s ^= low
                if (allowed & d) == d:
                    break
            d &= allowed
            if d == 0:
                return 0
        return d

    def propagate(dom, start):
        queue = list(start)
        queued = set(queue)
        while queue:
            a = queue.pop()
            queued.discard(a)
            nd = revise(dom, a)
            if nd == 0:
                return False
            if nd != dom[a]:
                dom[a] = nd
                for a2 in deps[a]:
                    if a2 not in queued:
                        queued.add(a2)
                        queue.append(a2)
        return True

    results = []
    state = {"nodes": 0, "exceeded": False}
    mapping = [-1] * nA

    def full_leaf_ok():
        image = 0
        for b in mapping:
            image |= 1 << b
        if image != full_maskB:
            return False
        covered = set()
        for ridx, (arcsA, _o, _i, _arcsB) in enumerate(rels):
            for (a, a2) in arcsA:
                covered.add((ridx, mapping[a], mapping[a2]))
        for ridx, (_arcsA, _o, _i, arcsB) in enumerate(rels):
            for pair in arcsB:
                if (ridx, pair[0], pair[1]) not in covered:
                    return False
        for (a_ids, b_mask) in unary_cov:
            got = 0
            for a in a_ids:
                got |= 1 << mapping[a]
            if b_mask & ~got:
                return False
        return True

    def full_prune_ok(dom, unassigned):
        # Sound bounds: every uncovered B-element needs an unassigned
        # A-element, and every uncovered B-arc a not-fully-assigned A-arc.
        image = 0
        n_un = 0
        for a in range(nA):
            if mapping[a] >= 0:
                image |= 1 << mapping[a]
            else:
                n_un += 1
        missing = (full_maskB & ~image).bit_count()
        if missing > n_un:
            return False
        covered = set()
        pending = 0
        for ridx, (arcsA, _o, _i, _b) in enumerate(rels):
            for (a, a2) in arcsA:
                if mapping[a] >= 0 and mapping[a2] >= 0:
                    covered.add((ridx, mapping[a], mapping[a2]))
                else:
                    pending += 1
        uncovered = 0
        for ridx, (_arcsA, _o, _i, arcsB) in enumerate(rels):
            for pair in arcsB:
                if (ridx, pair[0], pair[1]) not in covered:
                    uncovered += 1
        return uncovered <= pending

    def strong_ok(a, b):
        for ridx, outA in enumerate(strongA):
            outBm = rels[ridx][1]
            for a2 in range(nA):
                b2 = mapping[a2]
                if b2 < 0:
                    continue
                if (outBm[b] >> b2) & 1 and not (outA[a] >> a2) & 1:
                    return False
                if (outBm[b2] >> b) & 1 and not (outA[a2] >> a) & 1:
                    return False
            if (outBm[b] >> b) & 1 and not (outA[a] >> a) & 1:
                return False
        return True

    def solve(dom, unassigned):
        if state["exceeded"]:
            return True
        if not unassigned:
            if full and not full_leaf_ok():
                return False
            results.append(tuple(mapping))
            return 0 < limit <= len(results)
        if full and not full_prune_ok(dom, unassigned):
            return False
        a = min(unassigned, key=lambda x: (dom[x].bit_count(), x))
        rest = unassigned - {a}
        cand = dom[a]
        while cand:
            low = cand & -cand
            cand ^= low
            b = low.bit_length() - 1
            state["nodes"] += 1
            if state["nodes"] > budget:
                state["exceeded"] = True
                return True
            if strong and not strong_ok(a, b):
                continue
            mapping[a] = b
            nd = list(dom)
            nd[a] = low
            ok = True
            if injective:
                for a2 in rest:
                    nd[a2] &= ~low
                    if nd[a2] == 0:
                        ok = False
                        break
            if ok and propagate(nd, deps[a]) and solve(nd, rest):
                mapping[a] = -1
                return True
            mapping[a] = -1
        return False

    dom = list(dom0)
    if all(dom) and propagate(dom, range(nA)):
        solve(dom, frozenset(range(nA)))
    return results, state["nodes"], state["exceeded"]

# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled evaluation and search kernel.

Mirror of ``fmtlab._pykernel`` with identical semantics and result
ordering, restricted to structures with at most 63 elements so domains
and neighbourhoods fit in single machine words.  ``fmtlab.kernel``
selects between the two implementations and falls back to the pure
kernel for larger structures.
"""

import array

from cpython cimport array

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil
    int __builtin_ctzll(unsigned long long) nogil

KERNEL_NAME = "c"

DEF MAXN = 64
DEF MAXSLOTS = 128

cdef enum:
    OP_TRUE = 0
    OP_FALSE = 1
    OP_EQ = 2
    OP_REL1 = 3
    OP_REL2 = 4
    OP_RELK = 5
    OP_DIST = 6
    OP_NOT = 7
    OP_AND = 8
    OP_OR = 9
    OP_EXISTS = 10
    OP_FORALL = 11


def _u64(x):
    return x & 0xFFFFFFFFFFFFFFFF


# ---------------------------------------------------------------------------
# formula evaluation
# ---------------------------------------------------------------------------

cdef class _EvalCtx:
    cdef int n
    cdef int[::1] ops, a1, a2, a3, kstart, kcount, kids
    cdef unsigned long long[::1] rel1m, rel2m, distm
    cdef list relk
    cdef int env[MAXSLOTS]

    cdef bint ev(self, int idx):
        cdef int op = self.ops[idx]
        cdef int i, v, slot, sub
        if op == OP_REL2:
            return (self.rel2m[self.a1[idx] * self.n + self.env[self.a2[idx]]]
                    >> self.env[self.a3[idx]]) & 1
        if op == OP_AND:
            for i in range(self.kcount[idx]):
                if not self.ev(self.kids[self.kstart[idx] + i]):
                    return False
            return True
        if op == OP_OR:
            for i in range(self.kcount[idx]):
                if self.ev(self.kids[self.kstart[idx] + i]):
                    return True
            return False
        if op == OP_EXISTS:
            slot = self.a1[idx]
            sub = self.kids[self.kstart[idx]]
            for v in range(self.n):
                self.env[slot] = v
                if self.ev(sub):
                    return True
            return False
        if op == OP_FORALL:
            slot = self.a1[idx]
            sub = self.kids[self.kstart[idx]]
            for v in range(self.n):
                self.env[slot] = v
                if not self.ev(sub):
                    return False
            return True
        if op == OP_NOT:
            return not self.ev(self.kids[self.kstart[idx]])
        if op == OP_EQ:
            return self.env[self.a1[idx]] == self.env[self.a2[idx]]
        if op == OP_DIST:
            return (self.distm[self.a1[idx] * self.n + self.env[self.a2[idx]]]
                    >> self.env[self.a3[idx]]) & 1
        if op == OP_REL1:
            return (self.rel1m[self.a1[idx]] >> self.env[self.a2[idx]]) & 1
        if op == OP_RELK:
            obj = self.relk[self.a1[idx]]
            return tuple([self.env[s] for s in obj[1]]) in obj[0]
        if op == OP_TRUE:
            return True
        return False


def eval_program(prog, enc, init, nslots):
    """Evaluate a lowered program on an encoded structure (n <= 63).

    Same contract as ``_pykernel.eval_program``: ``prog`` is the nested
    opcode tuple, ``enc = (n, rel1, rel2, relk, dist)`` the structure
    encoding, ``init`` an iterable of (slot, element) bindings for free
    variables, ``nslots`` the number of variable slots used.
    """
    n, rel1, rel2, relk, dist = enc
    if n > 63:
        raise ValueError("c kernel limited to 63 elements")
    if nslots > MAXSLOTS:
        raise ValueError("too many variable slots")

    ops = array.array("i")
    a1 = array.array("i")
    a2 = array.array("i")
    a3 = array.array("i")
    kstart = array.array("i")
    kcount = array.array("i")
    kids = array.array("i")
    relk_objs = []

    def flat(node):
        op = node[0]
        idx = len(ops)
        ops.append(op)
        a1.append(0)
        a2.append(0)
        a3.append(0)
        kstart.append(0)
        kcount.append(0)
        if op == OP_AND or op == OP_OR:
            children = [flat(sub) for sub in node[1]]
            kstart[idx] = len(kids)
            kcount[idx] = len(children)
            kids.extend(children)
        elif op == OP_EXISTS or op == OP_FORALL:
            a1[idx] = node[1]
            child = flat(node[2])
            kstart[idx] = len(kids)
            kcount[idx] = 1
            kids.append(child)
        elif op == OP_NOT:
            child = flat(node[1])
            kstart[idx] = len(kids)
            kcount[idx] = 1
            kids.append(child)
        elif op == OP_EQ or op == OP_REL1:
            a1[idx] = node[1]
            a2[idx] = node[2]
        elif op == OP_REL2 or op == OP_DIST:
            a1[idx] = node[1]
            a2[idx] = node[2]
            a3[idx] = node[3]
        elif op == OP_RELK:
            a1[idx] = len(relk_objs)
            relk_objs.append((relk[node[1]], node[2]))
        elif op == OP_TRUE or op == OP_FALSE:
            pass
        else:
            raise ValueError("bad opcode %r" % (op,))
        return idx

    flat(prog)

    rel1m = array.array("Q", [_u64(x) for x in rel1])
    rel2m = array.array("Q")
    for table in rel2:
        for u in range(n):
            rel2m.append(_u64(table[u]))
    distm = array.array("Q")
    for table in dist:
        for u in range(n):
            distm.append(_u64(table[u]))
    # pad buffers so empty arrays still expose a valid memoryview
    if not kids:
        kids.append(0)
    for arr in (rel1m, rel2m, distm):
        if not arr:
            arr.append(0)

    cdef _EvalCtx ctx = _EvalCtx()
    ctx.n = n
    ctx.ops = ops
    ctx.a1 = a1
    ctx.a2 = a2
    ctx.a3 = a3
    ctx.kstart = kstart
    ctx.kcount = kcount
    ctx.kids = kids
    ctx.rel1m = rel1m
    ctx.rel2m = rel2m
    ctx.distm = distm
    ctx.relk = relk_objs
    cdef int i
    for i in range(MAXSLOTS):
        ctx.env[i] = 0
    for slot, val in init:
        ctx.env[slot] = val
    return bool(ctx.ev(0))


# ---------------------------------------------------------------------------
# homomorphism search
# ---------------------------------------------------------------------------

cdef class _SearchCtx:
    cdef int nA, nB, nrel, narcA, narcB, ncov
    cdef bint injective, strong, full, exceeded
    cdef long long nodes, budget, limit
    cdef unsigned long long full_maskB
    cdef list results
    cdef int mapping[MAXN]
    cdef unsigned long long dombuf[MAXN * MAXN]
    cdef int queue[MAXN]
    cdef bint inq[MAXN]

    cdef int[::1] cons_src, cons_ridx, cons_dir, cons_start, cons_count
    cdef int[::1] deps_item, deps_start, deps_count
    cdef unsigned long long[::1] outB, inB, outA
    cdef int[::1] arcA_u, arcA_v, arcA_r
    cdef int[::1] arcB_u, arcB_v, arcB_r
    cdef int[::1] cov_ids, cov_start, cov_count
    cdef unsigned long long[::1] cov_mask

    cdef unsigned long long revise(self, unsigned long long *dom, int a):
        cdef unsigned long long d = dom[a]
        cdef unsigned long long allowed, s, low
        cdef int k, src, ridx, dirflag, b, base
        for k in range(self.cons_count[a]):
            base = self.cons_start[a] + k
            src = self.cons_src[base]
            ridx = self.cons_ridx[base]
            dirflag = self.cons_dir[base]
            allowed = 0
            s = dom[src]
            while s:
                low = s & (~s + 1)
                b = __builtin_ctzll(s)
                if dirflag:
                    allowed |= self.inB[ridx * self.nB + b]
                else:
                    allowed |= self.outB[ridx * self.nB + b]
                s ^= low
                if (allowed & d) == d:
                    break
            d &= allowed
            if d == 0:
                return 0
        return d

    cdef bint propagate(self, unsigned long long *dom, int seed_lo, int seed_hi,
                        int seed_deps_of):
        """Run the arc-consistency worklist to its fixpoint.

        Seeds are either the vertex range [seed_lo, seed_hi) (when
        seed_deps_of < 0) or deps[seed_deps_of].
        """
        cdef int qlen = 0
        cdef int i, a, a2
        cdef unsigned long long nd
        for i in range(self.nA):
            self.inq[i] = False
        if seed_deps_of >= 0:
            a = seed_deps_of
            for i in range(self.deps_count[a]):
                a2 = self.deps_item[self.deps_start[a] + i]
                if not self.inq[a2]:
                    self.inq[a2] = True
                    self.queue[qlen] = a2
                    qlen += 1
        else:
            for a in range(seed_lo, seed_hi):
                self.inq[a] = True
                self.queue[qlen] = a
                qlen += 1
        while qlen > 0:
            qlen -= 1
            a = self.queue[qlen]
            self.inq[a] = False
            nd = self.revise(dom, a)
            if nd == 0:
                return False
            if nd != dom[a]:
                dom[a] = nd
                for i in range(self.deps_count[a]):
                    a2 = self.deps_item[self.deps_start[a] + i]
                    if not self.inq[a2]:
                        self.inq[a2] = True
                        self.queue[qlen] = a2
                        qlen += 1
        return True

    cdef bint full_leaf_ok(self):
        cdef unsigned long long image = 0, got
        cdef int i, k, j
        for i in range(self.nA):
            image |= (<unsigned long long>1) << self.mapping[i]
        if image != self.full_maskB:
            return False
        covered = set()
        for i in range(self.narcA):
            covered.add((self.arcA_r[i],
                         self.mapping[self.arcA_u[i]],
                         self.mapping[self.arcA_v[i]]))
        for i in range(self.narcB):
            if (self.arcB_r[i], self.arcB_u[i], self.arcB_v[i]) not in covered:
                return False
        for k in range(self.ncov):
            got = 0
            for j in range(self.cov_count[k]):
                got |= (<unsigned long long>1) << \
                    self.mapping[self.cov_ids[self.cov_start[k] + j]]
            if self.cov_mask[k] & ~got:
                return False
        return True

    cdef bint full_prune_ok(self):
        cdef unsigned long long image = 0
        cdef int n_un = 0, a, i, pending = 0, uncovered = 0
        for a in range(self.nA):
            if self.mapping[a] >= 0:
                image |= (<unsigned long long>1) << self.mapping[a]
            else:
                n_un += 1
        if __builtin_popcountll(self.full_maskB & ~image) > n_un:
            return False
        covered = set()
        for i in range(self.narcA):
            if self.mapping[self.arcA_u[i]] >= 0 and self.mapping[self.arcA_v[i]] >= 0:
                covered.add((self.arcA_r[i],
                             self.mapping[self.arcA_u[i]],
                             self.mapping[self.arcA_v[i]]))
            else:
                pending += 1
        for i in range(self.narcB):
            if (self.arcB_r[i], self.arcB_u[i], self.arcB_v[i]) not in covered:
                uncovered += 1
        return uncovered <= pending

    cdef bint strong_ok(self, int a, int b):
        cdef int ridx, a2, b2
        for ridx in range(self.nrel):
            for a2 in range(self.nA):
                b2 = self.mapping[a2]
                if b2 < 0:
                    continue
                if (self.outB[ridx * self.nB + b] >> b2) & 1:
                    if not (self.outA[ridx * self.nA + a] >> a2) & 1:
                        return False
                if (self.outB[ridx * self.nB + b2] >> b) & 1:
                    if not (self.outA[ridx * self.nA + a2] >> a) & 1:
                        return False
            if (self.outB[ridx * self.nB + b] >> b) & 1:
                if not (self.outA[ridx * self.nA + a] >> a) & 1:
                    return False
        return True

    cdef bint solve(self, int level, unsigned long long unassigned):
        # Returns True to abort the whole search (limit or budget hit).
        cdef unsigned long long *dom = &self.dombuf[level * self.nA]
        cdef unsigned long long *nd = &self.dombuf[(level + 1) * self.nA]
        cdef int a = -1, best = MAXN + 1, pc, x, i, b
        cdef unsigned long long cand, low, rest_mask, u
        cdef bint ok
        if self.exceeded:
            return True
        if unassigned == 0:
            if self.full and not self.full_leaf_ok():
                return False
            res = []
            for i in range(self.nA):
                res.append(self.mapping[i])
            self.results.append(tuple(res))
            return 0 < self.limit <= len(self.results)
        if self.full and not self.full_prune_ok():
            return False
        u = unassigned
        while u:
            x = __builtin_ctzll(u)
            u &= u - 1
            pc = __builtin_popcountll(dom[x])
            if pc < best:
                best = pc
                a = x
        rest_mask = unassigned & ~((<unsigned long long>1) << a)
        cand = dom[a]
        while cand:
            low = cand & (~cand + 1)
            b = __builtin_ctzll(cand)
            cand ^= low
            self.nodes += 1
            if self.nodes > self.budget:
                self.exceeded = True
                return True
            if self.strong and not self.strong_ok(a, b):
                continue
            self.mapping[a] = b
            for i in range(self.nA):
                nd[i] = dom[i]
            nd[a] = low
            ok = True
            if self.injective:
                u = rest_mask
                while u:
                    x = __builtin_ctzll(u)
                    u &= u - 1
                    nd[x] &= ~low
                    if nd[x] == 0:
                        ok = False
                        break
            if ok and self.propagate(nd, 0, 0, a) and self.solve(level + 1, rest_mask):
                self.mapping[a] = -1
                return True
            self.mapping[a] = -1
        return False


def search_homs(nA, nB, dom0, rels, strongA, unary_cov,
                injective, strong, full, limit, budget):
    """Mirror of ``_pykernel.search_homs`` for nA, nB <= 63.

    Same inputs, same outputs (identical result ordering and node
    accounting): returns ``(results, nodes, exceeded)``.
    """
    if nA > 63 or nB > 63:
        raise ValueError("c kernel limited to 63 elements")
    if nA == 0:
        if full and nB != 0:
            return [], 0, False
        return [()], 0, False

    cdef _SearchCtx ctx = _SearchCtx()
    ctx.nA = nA
    ctx.nB = nB
    ctx.nrel = len(rels)
    ctx.injective = bool(injective)
    ctx.strong = bool(strong)
    ctx.full = bool(full)
    ctx.exceeded = False
    ctx.nodes = 0
    ctx.budget = budget
    ctx.limit = limit if limit > 0 else 0
    ctx.full_maskB = ((<unsigned long long>1) << nB) - 1
    ctx.results = []

    cons = [[] for _ in range(nA)]
    deps = [[] for _ in range(nA)]
    arcA_u = array.array("i")
    arcA_v = array.array("i")
    arcA_r = array.array("i")
    arcB_u = array.array("i")
    arcB_v = array.array("i")
    arcB_r = array.array("i")
    outB = array.array("Q")
    inB = array.array("Q")
    for ridx, (arcsA, outBm, inBm, arcsB) in enumerate(rels):
        for (a, a2) in arcsA:
            cons[a2].append((a, ridx, 0))
            deps[a].append(a2)
            cons[a].append((a2, ridx, 1))
            deps[a2].append(a)
            arcA_u.append(a)
            arcA_v.append(a2)
            arcA_r.append(ridx)
        for (b, b2) in arcsB:
            arcB_u.append(b)
            arcB_v.append(b2)
            arcB_r.append(ridx)
        for b in range(nB):
            outB.append(_u64(outBm[b]))
            inB.append(_u64(inBm[b]))
    ctx.narcA = len(arcA_u)
    ctx.narcB = len(arcB_u)

    cons_src = array.array("i")
    cons_ridx = array.array("i")
    cons_dir = array.array("i")
    cons_start = array.array("i")
    cons_count = array.array("i")
    for a in range(nA):
        cons_start.append(len(cons_src))
        cons_count.append(len(cons[a]))
        for (src, ridx, dirflag) in cons[a]:
            cons_src.append(src)
            cons_ridx.append(ridx)
            cons_dir.append(dirflag)

    deps_item = array.array("i")
    deps_start = array.array("i")
    deps_count = array.array("i")
    for a in range(nA):
        deps_start.append(len(deps_item))
        deps_count.append(len(deps[a]))
        deps_item.extend(deps[a])

    outA = array.array("Q")
    if strong:
        for masks in strongA:
            for a in range(nA):
                outA.append(_u64(masks[a]))

    cov_ids = array.array("i")
    cov_start = array.array("i")
    cov_count = array.array("i")
    cov_mask = array.array("Q")
    for (a_ids, b_mask) in unary_cov:
        cov_start.append(len(cov_ids))
        cov_count.append(len(a_ids))
        cov_ids.extend(a_ids)
        cov_mask.append(_u64(b_mask))
    ctx.ncov = len(unary_cov)

    # pad buffers so empty arrays still expose a valid memoryview; the
    # explicit counts stored above bound every loop
    for arr in (cons_src, cons_ridx, cons_dir, deps_item, arcA_u, arcA_v,
                arcA_r, arcB_u, arcB_v, arcB_r, cov_ids, cov_start,
                cov_count, cons_start, cons_count, deps_start, deps_count):
        if not arr:
            arr.append(0)
    for arr in (outB, inB, outA, cov_mask):
        if not arr:
            arr.append(0)

    ctx.cons_src = cons_src
    ctx.cons_ridx = cons_ridx
    ctx.cons_dir = cons_dir
    ctx.cons_start = cons_start
    ctx.cons_count = cons_count
    ctx.deps_item = deps_item
    ctx.deps_start = deps_start
    ctx.deps_count = deps_count
    ctx.outB = outB
    ctx.inB = inB
    ctx.outA = outA
    ctx.arcA_u = arcA_u
    ctx.arcA_v = arcA_v
    ctx.arcA_r = arcA_r
    ctx.arcB_u = arcB_u
    ctx.arcB_v = arcB_v
    ctx.arcB_r = arcB_r
    ctx.cov_ids = cov_ids
    ctx.cov_start = cov_start
    ctx.cov_count = cov_count
    ctx.cov_mask = cov_mask

    cdef int i
    for i in range(nA):
        ctx.mapping[i] = -1
        ctx.dombuf[i] = _u64(dom0[i])

    all_nonzero = all(dom0[i] != 0 for i in range(nA))
    if all_nonzero and ctx.propagate(&ctx.dombuf[0], 0, nA, -1):
        ctx.solve(0, ((<unsigned long long>1) << nA) - 1)
    return ctx.results, ctx.nodes, ctx.exceeded

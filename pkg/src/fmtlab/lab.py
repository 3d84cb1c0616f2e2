"""Verification harness: minimal-model scans, preservation checks over
finite pools, the chain-based extraction of ring graphs from models of
the planar sentence, and the named verification suites.

Reports are plain text and line oriented: one ``FAIL <suite> <witness>``
line per counterexample, so acceptance logs diff cleanly.
"""

from __future__ import annotations

import concurrent.futures
import itertools
import random
from dataclasses import dataclass
from typing import NamedTuple, Optional

from . import families, formulas, minors, solver, structures
from .structures import (Homomorphism, Structure, disjoint_union,
                         free_amalgam, free_amalgam_with_maps,
                         induced_substructure, iterated_amalgam)


class LabError(Exception):
    """Raised for precondition violations and unknown suites."""


# ---------------------------------------------------------------------------
# small graph-editing helpers used by suites and tests


def drop_edge(G, e):
    """G without the (undirected) edge e."""
    u, v = min(e), max(e)
    edges = tuple(x for x in G.edges if x != (u, v))
    if len(edges) == len(G.edges):
        raise LabError("edge %r not present" % (e,))
    return Structure.graph(G.n, edges, labels=dict(G.labels))


def add_edge(G, u, v):
    """G with one extra edge u-v."""
    return Structure.graph(G.n, G.edges + [(u, v)], labels=dict(G.labels))


def drop_vertex(G, v):
    """G with vertex v deleted (remaining vertices renumbered)."""
    keep = [u for u in range(G.n) if u != v]
    return induced_substructure(G, keep)[0]


# ---------------------------------------------------------------------------
# minimal induced models


@dataclass(frozen=True)
class MinimalityReport:
    minimal: bool
    mode: str  # "exhaustive" | "deletion"
    partial: bool  # deletion-only scans are partial evidence
    counterexample: Optional[tuple]
    subsets_checked: int
    spot_checks: int

    def __bool__(self):
        return self.minimal


def is_minimal_induced_model(
    phi,
    M,
    class_filter=None,
    *,
    mode="auto",
    max_exhaustive=12,
    evaluator=None,
    spot_fraction=0.0,
):
    """Check that no proper induced substructure of M, inside the class
    given by ``class_filter``, satisfies phi.

    mode "exhaustive" scans every proper subset of the domain (allowed
    only up to ``max_exhaustive`` elements); "deletion" scans only the
    single-vertex deletions and is reported as partial evidence;
    "auto" picks exhaustive when it fits.

    ``evaluator`` optionally replaces direct evaluation of phi on each
    candidate (a cheaper equivalent test); ``spot_fraction`` > 0 then
    re-checks that fraction of the candidates against phi directly and
    raises LabError on any disagreement.
    """
    if not formulas.evaluate(phi, M):
        raise LabError("the scanned structure does not satisfy the formula")
    if mode == "auto":
        mode = "exhaustive" if M.n <= max_exhaustive else "deletion"
    if mode not in ("exhaustive", "deletion"):
        raise LabError("unknown scan mode %r" % (mode,))
    if mode == "exhaustive" and M.n > max_exhaustive:
        raise LabError(
            "exhaustive scan over %d vertices exceeds the budget (%d)"
            % (M.n, max_exhaustive)
        )

    holds = evaluator if evaluator is not None else (lambda G: formulas.evaluate(phi, G))
    spot_every = int(round(1.0 / spot_fraction)) if spot_fraction > 0 else 0

    if mode == "exhaustive":
        subsets = (
            tuple(v for v in range(M.n) if (mask >> v) & 1)
            for mask in range((1 << M.n) - 1)  # every proper subset
        )
    else:
        subsets = (
            tuple(u for u in range(M.n) if u != v) for v in range(M.n)
        )

    checked = 0
    spots = 0
    for subset in subsets:
        sub, _ = induced_substructure(M, subset)
        sat = holds(sub)
        checked += 1
        if spot_every and evaluator is not None and checked % spot_every == 0:
            spots += 1
            direct = formulas.evaluate(phi, sub)
            if direct != sat:
                raise LabError(
                    "proxy evaluator disagrees with the formula on subset %r"
                    % (subset,)
                )
        if not sat:
            continue
        if class_filter is not None and not class_filter(sub):
            continue
        return MinimalityReport(
            minimal=False,
            mode=mode,
            partial=(mode == "deletion"),
            counterexample=subset,
            subsets_checked=checked,
            spot_checks=spots,
        )
    return MinimalityReport(
        minimal=True,
        mode=mode,
        partial=(mode == "deletion"),
        counterexample=None,
        subsets_checked=checked,
        spot_checks=spots,
    )


# ---------------------------------------------------------------------------
# preservation checking


@dataclass(frozen=True)
class PreservationReport:
    mode: str
    count: int  # structures in the pool
    violations: tuple  # (i, j) index pairs: i satisfies, maps into j, j fails
    skipped: tuple  # (i, j) pairs whose map search ran out of budget

    @property
    def ok(self):
        return not self.violations


def check_preservation(phi, instances, mode="hom", *, budget=solver.DEFAULT_BUDGET):
    """Flag ordered pairs (A, B) with A |= phi, a homomorphism (or, in
    mode "extension", an embedding) A -> B, and B |/= phi."""
    if mode not in ("hom", "extension"):
        raise LabError("unknown preservation mode %r" % (mode,))
    instances = list(instances)
    sats = [formulas.evaluate(phi, A) for A in instances]
    require = "embedding" if mode == "extension" else None
    violations = []
    skipped = []
    for i, j in itertools.permutations(range(len(instances)), 2):
        if not sats[i] or sats[j]:
            continue  # no violation possible for this pair
        try:
            h = solver.find_hom(
                instances[i], instances[j], require=require, budget=budget
            )
        except solver.BudgetExceededError:
            skipped.append((i, j))
            continue
        if h is not None:
            violations.append((i, j))
    return PreservationReport(
        mode=mode,
        count=len(instances),
        violations=tuple(violations),
        skipped=tuple(skipped),
    )


# ---------------------------------------------------------------------------
# chain extraction of induced ring graphs


class DmWitness(NamedTuple):
    m: int
    embedding: Homomorphism  # from families.dn(m) into the searched graph


def dm_preconditions(H):
    """Names of the extraction preconditions H fails (empty when all hold)."""
    reasons = []
    if solver.find_hom(families.clique(4), H) is not None:
        reasons.append("contains-K4")
    if minors.has_minor(H, "k5"):
        reasons.append("has-K5-minor")
    if not formulas.evaluate(formulas.BUILTIN_FORMULAS["phi_planar"], H):
        reasons.append("fails-phi-planar")
    return reasons


def _matrix_ok(adj, n, x1, x2):
    """The universal part of the planar sentence for outer witnesses
    x1, x2: every path x1-a-b-x2 admits the six-edge extension."""
    for a in _bits(adj[x1]):
        for b in _bits(adj[a]):
            if not ((adj[b] >> x2) & 1):
                continue
            found = False
            for c in _bits(adj[x1] & adj[a] & adj[b]):
                if adj[b] & adj[c] & adj[x2]:
                    found = True
                    break
            if not found:
                return False
    return True


def _bits(mask):
    while mask:
        low = mask & -mask
        mask ^= low
        yield low.bit_length() - 1


def find_induced_Dm(H):
    """Recover an induced ring graph from a model of the planar sentence.

    Requires H to satisfy phi_planar and be free of K_4 subgraphs and
    K_5 minors; returns (m, embedding) with m >= 4, or None when no
    seed's chain closes into a verified induced copy.

    The chain follows the sentence's own witness structure: starting
    from a seed path x1-y-z-x2, each pair (y_i, z_i) is extended by the
    first six-edge witness (y_{i+1}, z_{i+1}) in ascending order until
    the pair sequence revisits an earlier pair; the cycle segment is
    then checked to be an induced copy of the ring graph.
    """
    if not H.vocab.is_graph:
        raise LabError("the chain extraction works on graph structures")
    if dm_preconditions(H):
        return None
    adj = structures.gaifman_masks(H)
    n = H.n
    step_cap = 2 * n
    for x1 in range(n):
        for x2 in range(n):
            if not _matrix_ok(adj, n, x1, x2):
                continue
            for y in _bits(adj[x1]):
                for z in _bits(adj[y] & adj[x2]):
                    witness = _chain(adj, x1, x2, y, z, step_cap, H)
                    if witness is not None:
                        return witness
    return None


def _chain(adj, x1, x2, y, z, step_cap, H):
    pairs = [(y, z)]
    seen = {(y, z): 0}
    for _ in range(step_cap):
        cy, cz = pairs[-1]
        nxt = None
        for c in _bits(adj[x1] & adj[cy] & adj[cz]):
            dmask = adj[cz] & adj[c] & adj[x2]
            for d in _bits(dmask):
                nxt = (c, d)
                break
            if nxt is not None:
                break
        if nxt is None:
            return None  # this seed's chain dead-ends
        if nxt in seen:
            start = seen[nxt]
            cycle = pairs[start:]
            m = len(cycle)
            if m < 4:
                return None
            D = families.dn(m)
            mapping = [0] * D.n
            mapping[0] = x1
            mapping[1] = x2
            for i, (yy, zz) in enumerate(cycle, start=1):
                mapping[1 + i] = yy  # ring vertex a_i
                mapping[m + 1 + i] = zz  # ring vertex b_i
            h = Homomorphism(D, H, tuple(mapping))
            if h.is_valid() and h.is_embedding():
                return DmWitness(m=m, embedding=h)
            return None
        seen[nxt] = len(pairs)
        pairs.append(nxt)
    return None


# ---------------------------------------------------------------------------
# homomorphic-image audit


@dataclass(frozen=True)
class AuditRow:
    index: int
    hom_exists: bool
    induced_rings: tuple  # ring sizes m (dividing n, m >= 4) found induced
    consistent: bool


@dataclass(frozen=True)
class AuditReport:
    n: int
    rows: tuple

    @property
    def ok(self):
        return all(r.consistent for r in self.rows)


def hom_image_audit(n, candidates, *, budget=solver.DEFAULT_BUDGET):
    """For each K_4-free, K_5-minor-free candidate H: a homomorphism
    from the n-th ring graph into H must be matched by an induced copy
    of some ring graph of size m | n, m >= 4, and vice versa."""
    candidates = list(candidates)
    for H in candidates:
        if solver.find_hom(families.clique(4), H) is not None:
            raise LabError("audit candidate contains a K_4")
        if minors.has_minor(H, "k5"):
            raise LabError("audit candidate has a K_5 minor")
    Dn = families.dn(n)
    rows = []
    for idx, H in enumerate(candidates):
        hom_exists = solver.find_hom(Dn, H, budget=budget) is not None
        rings = []
        for m in range(4, n + 1):
            if n % m:
                continue
            if 2 * m + 2 > H.n:
                continue
            if solver.find_hom(families.dn(m), H, require="embedding", budget=budget):
                rings.append(m)
        consistent = (not hom_exists) or bool(rings)
        if not rings and hom_exists:
            consistent = False
        rows.append(
            AuditRow(
                index=idx,
                hom_exists=hom_exists,
                induced_rings=tuple(rings),
                consistent=consistent,
            )
        )
    return AuditReport(n=n, rows=tuple(rows))


# ---------------------------------------------------------------------------
# suites


@dataclass(frozen=True)
class SuiteReport:
    name: str
    checks: int
    failures: tuple
    notes: tuple = ()

    @property
    def passed(self):
        return not self.failures

    def lines(self):
        out = ["note: %s" % n for n in self.notes]
        out.extend("FAIL %s %s" % (self.name, w) for w in self.failures)
        out.append(
            "%s: %s (%d checks, %d failures)"
            % (
                self.name,
                "PASS" if self.passed else "FAIL",
                self.checks,
                len(self.failures),
            )
        )
        return out


def _run_tasks(fn, argses, jobs):
    """Run fn over the argument tuples, optionally in worker processes.
    Results keep submission order, so reports stay deterministic."""
    argses = list(argses)
    if jobs and jobs > 1 and len(argses) > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as ex:
            futures = [ex.submit(fn, *a) for a in argses]
            return [f.result() for f in futures]
    return [fn(*a) for a in argses]


def _phi(name):
    return formulas.BUILTIN_FORMULAS[name]


# -- suite: lemma-3-2 -------------------------------------------------------


def _suite_lemma_3_2(size, jobs):
    size = 13 if size is None else size
    checks = 0
    failures = []
    ns = [n for n in range(5, max(size, 5) + 1, 2)]
    for n in ns:
        W = families.wheel(n)
        checks += 1
        c = solver.chromatic_number(W)
        if c != 4:
            failures.append("chi(W_%d) = %d, expected 4" % (n, c))
        for e in W.edges:
            checks += 1
            c = solver.chromatic_number(drop_edge(W, e))
            if c != 3:
                failures.append(
                    "chi(W_%d minus edge %r) = %d, expected 3" % (n, e, c)
                )
    for n, m in itertools.product((5, 7), repeat=2):
        homs = solver.enumerate_homs(families.wheel(n), families.wheel(m))
        checks += 1
        if n == m and not homs:
            failures.append("no homomorphism W_%d -> W_%d found" % (n, m))
        for h in homs:
            checks += 1
            if not h.is_full():
                failures.append(
                    "non-full homomorphism W_%d -> W_%d: %r" % (n, m, h.map)
                )
    return checks, failures, []


# -- suite: lemma-3-3-exhaustive --------------------------------------------


def _bouquet_chunk(n, start, stop):
    pairs = list(itertools.combinations(range(n), 2))
    phi = _phi("phi_bouquet")
    fails = []
    for mask in range(start, stop):
        edges = tuple(pairs[i] for i in range(len(pairs)) if (mask >> i) & 1)
        G = Structure.graph(n, edges)
        got = formulas.evaluate(phi, G)
        want = families.bouquet_oracle(G)
        if got != want:
            fails.append(
                "graph on %d vertices, edge mask %d: formula=%s oracle=%s"
                % (n, mask, got, want)
            )
    return fails


def _suite_lemma_3_3(size, jobs):
    n = 6 if size is None else size
    if n > 7:
        raise LabError("exhaustive scan beyond 7 vertices is not feasible")
    total = 1 << (n * (n - 1) // 2)
    checks = total
    chunk = max(1, total // max(1, (jobs or 1) * 8))
    argses = [(n, s, min(s + chunk, total)) for s in range(0, total, chunk)]
    failures = []
    for fails in _run_tasks(_bouquet_chunk, argses, jobs):
        failures.extend(fails)

    phi = _phi("phi_bouquet")
    positives = [("W_%d" % k, families.wheel(k)) for k in range(3, 25)]
    positives += [
        ("W_{3,3}", families.bouquet([3, 3])),
        ("W_{3,4,5}", families.bouquet([3, 4, 5])),
        ("W_{5,7,9}", families.bouquet([5, 7, 9])),
        ("W_{4,4,4,4}", families.bouquet([4, 4, 4, 4])),
        ("W_{5,7,11}", families.bouquet([5, 7, 11])),
    ]
    for name, G in positives:
        if G.n > 25:
            continue
        checks += 1
        if not formulas.evaluate(phi, G):
            failures.append("%s (%d vertices) fails the bouquet sentence" % (name, G.n))
    for k in (5, 7):
        W = families.wheel(k)
        bad = Structure.graph(W.n + 1, W.edges + [(0, W.n)])
        checks += 1
        if formulas.evaluate(phi, bad):
            failures.append(
                "W_%d plus a pendant at the apex satisfies the bouquet sentence" % k
            )
    return checks, failures, []


# -- suite: thm-3-4-minimal-models ------------------------------------------


def _suite_thm_3_4_minimal(size, jobs):
    size = 9 if size is None else size
    phi = _phi("phi_bouquet")
    checks = 0
    failures = []
    notes = []
    for n in [k for k in (5, 7, 9) if k <= max(size, 5)]:
        W = families.wheel(n)
        checks += 1
        if not families.in_class_C(W):
            failures.append("W_%d not recognized as a class member" % n)
            continue
        if n == 5:
            rep = is_minimal_induced_model(
                phi, W, class_filter=families.in_class_C, mode="exhaustive"
            )
        else:
            rep = is_minimal_induced_model(
                phi,
                W,
                class_filter=families.in_class_C,
                mode="exhaustive",
                evaluator=families.bouquet_oracle,
                spot_fraction=0.05,
            )
            notes.append(
                "W_%d scanned with the oracle proxy (%d spot checks)"
                % (n, rep.spot_checks)
            )
        checks += rep.subsets_checked
        if not rep.minimal:
            failures.append(
                "W_%d has a satisfying proper induced class member: %r"
                % (n, rep.counterexample)
            )
    return checks, failures, notes


# -- suite: thm-3-4-preservation --------------------------------------------


def _suite_thm_3_4_preservation(size, jobs):
    size = 9 if size is None else size
    phi = _phi("phi_bouquet")
    checks = 0
    failures = []
    wheels = [(n, families.wheel(n)) for n in (5, 7, 9) if n <= max(size, 5)]
    pool = [("W_%d" % n, W) for n, W in wheels]
    for n, W in wheels:
        for e in W.edges:
            pool.append(("W_%d-e%r" % (n, (e,)), drop_edge(W, e)))
        for v in range(W.n):
            pool.append(("W_%d-v%d" % (n, v), drop_vertex(W, v)))
    for (n1, W1), (n2, W2) in itertools.combinations(wheels, 2):
        pool.append(("W_%d+W_%d" % (n1, n2), disjoint_union(W1, W2)))
    class_pool = [(name, G) for name, G in pool if families.in_class_C(G)]
    checks += len(pool)
    for n, _ in wheels:
        if not any(name == "W_%d" % n for name, _ in class_pool):
            failures.append("W_%d dropped from the class pool" % n)

    rep = check_preservation(phi, [G for _, G in class_pool])
    checks += rep.count * (rep.count - 1)
    for i, j in rep.violations:
        failures.append(
            "violation inside the class pool: %s -> %s"
            % (class_pool[i][0], class_pool[j][0])
        )
    for i, j in rep.skipped:
        failures.append(
            "budget exceeded on pair %s -> %s" % (class_pool[i][0], class_pool[j][0])
        )

    W5 = families.wheel(5)
    bad = Structure.graph(W5.n + 1, W5.edges + [(0, W5.n)])
    extended = [G for _, G in class_pool] + [bad]
    rep2 = check_preservation(phi, extended)
    checks += 1
    bad_idx = len(extended) - 1
    w5_idx = next(i for i, (name, _) in enumerate(class_pool) if name == "W_5")
    if (w5_idx, bad_idx) not in rep2.violations:
        failures.append(
            "expected violation W_5 -> W_5-plus-apex-pendant was not detected"
        )
    return checks, failures, []


# -- suite: def-4-1-interpretation ------------------------------------------


def random_sentence(rng, depth=3):
    """A random closed graph formula of quantifier depth <= depth."""
    counter = itertools.count(1)

    def atom(scope):
        if not scope:
            return formulas.TRUE if rng.random() < 0.5 else formulas.FALSE
        a = rng.choice(scope)
        b = rng.choice(scope)
        r = rng.random()
        if r < 0.55:
            return formulas.Atom("E", (a, b))
        if r < 0.75:
            return formulas.Equal(a, b)
        return formulas.DistLE(rng.randint(0, 2), a, b)

    def go(scope, d):
        r = rng.random()
        if d == 0:
            return atom(scope)
        if not scope or r < 0.45:
            v = "q%d" % next(counter)
            body = go(scope + [v], d - 1)
            if rng.random() < 0.5:
                return formulas.Exists(v, body)
            return formulas.Forall(v, body)
        if r < 0.6:
            return formulas.And((go(scope, d - 1), go(scope, d - 1)))
        if r < 0.75:
            return formulas.Or((go(scope, d - 1), go(scope, d - 1)))
        if r < 0.85:
            return formulas.Not(go(scope, d - 1))
        return atom(scope)

    return go([], depth)


def _suite_def_4_1(size, jobs):
    count = 50 if size is None else size
    rng = random.Random(0x0401)
    checks = 0
    failures = []
    for idx in range(count):
        n = rng.randint(1, 10)
        edges = [
            (u, v)
            for u, v in itertools.combinations(range(n), 2)
            if rng.random() < 0.4
        ]
        G = Structure.graph(n, edges)
        k = rng.randint(0, min(3, n))
        marks = tuple(sorted(rng.sample(range(n), k)))
        phi = random_sentence(rng, depth=3)
        fk = formulas.interpret_k(phi, k)
        pG = formulas.pbar_structure(G, marks)
        checks += 1
        left = formulas.evaluate(phi, G)
        right = formulas.evaluate(fk, pG)
        if left != right:
            failures.append(
                "instance %d (n=%d, marks=%r): original=%s interpreted=%s"
                % (idx, n, marks, left, right)
            )
        checks += 1
        if formulas.quantifier_rank(fk) != formulas.quantifier_rank(phi):
            failures.append(
                "instance %d: interpretation changed the quantifier rank" % idx
            )
    return checks, failures, []


# -- suite: amalgam-properties ----------------------------------------------


def _random_structure(rng):
    kind = rng.random()
    n = rng.randint(1, 8)
    if kind < 0.5:
        edges = [
            (u, v)
            for u, v in itertools.combinations(range(n), 2)
            if rng.random() < 0.4
        ]
        return Structure.graph(n, edges)
    if kind < 0.75:
        vocab = structures.Vocabulary.from_dict({"E": 2, "U": 1})
        rels = {
            "E": [
                (u, v) for u in range(n) for v in range(n) if rng.random() < 0.25
            ],
            "U": [(v,) for v in range(n) if rng.random() < 0.5],
        }
        return Structure(vocab, n, rels)
    vocab = structures.Vocabulary.from_dict({"R": 3, "U": 1})
    rels = {
        "R": [
            (a, b, c)
            for a in range(n)
            for b in range(n)
            for c in range(n)
            if rng.random() < 0.08
        ],
        "U": [(v,) for v in range(n) if rng.random() < 0.5],
    }
    return Structure(vocab, n, rels)


def _suite_amalgam(size, jobs):
    count = 100 if size is None else size
    rng = random.Random(0xA3A1)
    checks = 0
    failures = []
    for idx in range(count):
        M = _random_structure(rng)
        k = rng.randint(0, min(4, M.n))
        S = tuple(sorted(rng.sample(range(M.n), k)))

        checks += 1
        one = iterated_amalgam(M, S, 1)
        if not solver.isomorphic(one, M):
            failures.append("instance %d: single-fold amalgam differs from M" % idx)

        checks += 1
        Q, hA, hB = free_amalgam_with_maps(M, M, S)
        fold = [0] * Q.n
        for v in range(M.n):
            fold[hA.map[v]] = v
            fold[hB.map[v]] = v
        h = Homomorphism(Q, M, tuple(fold))
        if not (h.is_valid() and h.is_full()):
            failures.append("instance %d: fold of the double amalgam is not full" % idx)

        checks += 1
        B = _random_structure(rng)
        while B.vocab != M.vocab:
            B = _random_structure(rng)
        if not solver.isomorphic(
            free_amalgam(M, B, ()), disjoint_union(M, B)
        ):
            failures.append(
                "instance %d: empty-interface amalgam is not the disjoint union" % idx
            )

        for reps in range(2, 5):
            checks += 1
            size_got = iterated_amalgam(M, S, reps).n
            size_want = reps * M.n - (reps - 1) * len(S)
            if size_got != size_want:
                failures.append(
                    "instance %d: %d-fold amalgam has %d elements, expected %d"
                    % (idx, reps, size_got, size_want)
                )
    return checks, failures, []


# -- suite: thm-4-4-outerplanar-closure --------------------------------------


def _fan(k):
    """Apex joined to a k-vertex path."""
    edges = [(0, i) for i in range(1, k + 1)]
    edges += [(i, i + 1) for i in range(1, k)]
    return Structure.graph(k + 1, edges)


def _cycle_tree(k, pendants):
    """A k-cycle with a pendant path hung on each listed vertex."""
    G = families.cycle(k)
    edges = list(G.edges)
    n = G.n
    for v, length in pendants:
        prev = v
        for _ in range(length):
            edges.append((prev, n))
            prev = n
            n += 1
    return Structure.graph(n, edges)


def _outerplanar_pool():
    pool = [_fan(k) for k in range(3, 8)]
    pool += [families.cycle(k) for k in range(3, 9)]
    pool += [
        _cycle_tree(4, [(0, 2)]),
        _cycle_tree(5, [(0, 1), (2, 2)]),
        _cycle_tree(6, [(1, 3)]),
        _cycle_tree(7, [(0, 2), (3, 1)]),
        _cycle_tree(3, [(0, 3), (1, 3), (2, 3)]),
        _cycle_tree(8, [(4, 4)]),
        _cycle_tree(5, [(0, 1), (1, 1), (2, 1), (3, 1)]),
        _cycle_tree(6, [(0, 2), (2, 2), (4, 2)]),
        _cycle_tree(4, [(0, 4), (2, 4)]),
    ]
    return [G for G in pool if G.n <= 12]


def _suite_thm_4_4(size, jobs):
    count = 20 if size is None else size
    pool = _outerplanar_pool()[:count]
    checks = 0
    failures = []
    for gi, G in enumerate(pool):
        checks += 1
        if not minors.is_outerplanar(G):
            failures.append("pool graph %d is not outerplanar" % gi)
            continue
        for v in range(G.n):
            H = iterated_amalgam(G, (v,), 3)
            checks += 2
            if minors.has_minor(H, "k4"):
                failures.append(
                    "triple amalgam of pool graph %d at vertex %d has a K_4 minor"
                    % (gi, v)
                )
            if minors.has_minor(H, "k23"):
                failures.append(
                    "triple amalgam of pool graph %d at vertex %d has a K_2,3 minor"
                    % (gi, v)
                )
    checks += 1
    res = minors.find_bottleneck(families.bouquet([5, 5, 5, 5, 5]), 2, 4)
    if res is None or len(res.S) != 1:
        failures.append(
            "bottleneck search on the five-petal bouquet returned %r" % (res,)
        )
    return checks, failures, []


# -- suite: lemma-5-2-injective ----------------------------------------------


def _suite_lemma_5_2(size, jobs):
    checks = 0
    failures = []
    targets = [
        ("G_3", families.gn(3)),
        ("D_4", families.dn(4)),
        ("D_5", families.dn(5)),
        ("B_4", families.bn(4)),
        ("A_5", families.an(5)),
        ("C_5", families.cn(5)),
    ]
    K4 = families.clique(4)
    for name, H in targets:
        checks += 1
        if solver.find_hom(K4, H) is not None:
            failures.append("%s contains a K_4" % name)
    G3 = families.gn(3)
    for name, H in targets:
        homs = solver.enumerate_homs(G3, H)
        checks += 1
        if name == "G_3" and not homs:
            failures.append("no homomorphism G_3 -> G_3 found")
        for h in homs:
            checks += 1
            if not h.is_injective():
                failures.append(
                    "non-injective homomorphism G_3 -> %s: %r" % (name, h.map)
                )
    return checks, failures, []


# -- suite: prop-5-4-audit ----------------------------------------------------


def _audit_hom_pair(n, m, budget):
    if solver.find_hom(families.dn(n), families.dn(m), budget=budget) is not None:
        return ["unexpected homomorphism D_%d -> D_%d" % (n, m)]
    return []


def _audit_added_edge(n, u, v):
    G = add_edge(families.dn(n), u, v)
    if not minors.has_minor(G, "k5"):
        return ["D_%d plus edge (%d, %d) has no K_5 minor" % (n, u, v)]
    return []


def _suite_prop_5_4(size, jobs):
    checks = 1
    failures = []
    if solver.find_hom(families.dn(8), families.dn(4)) is None:
        failures.append("no homomorphism D_8 -> D_4 found")

    pairs = [(n, m) for n in range(4, 8) for m in range(4, 8) if n != m]
    pairs += [(8, 5), (8, 6), (8, 7), (9, 4), (9, 5)]
    argses = [(n, m, 10**8) for n, m in pairs]
    checks += len(pairs)
    for fails in _run_tasks(_audit_hom_pair, argses, jobs):
        failures.extend(fails)

    edge_args = []
    for n in (4, 5):
        G = families.dn(n)
        present = set(G.edges)
        for u, v in itertools.combinations(range(G.n), 2):
            if (u, v) not in present:
                edge_args.append((n, u, v))
    checks += len(edge_args)
    for fails in _run_tasks(_audit_added_edge, edge_args, jobs):
        failures.extend(fails)
    return checks, failures, []


# -- suite: lemma-5-6-chain ---------------------------------------------------


def _pendant_path_extension(G, at, length):
    """Free amalgam gluing a path of the given length onto vertex ``at``.

    The path structure reuses the id ``at`` for the shared vertex, as
    the amalgam glues equal ids.
    """
    ids = [at] + [i for i in range(length + 1) if i != at][:length]
    nB = max(ids) + 1
    edges = [(ids[i], ids[i + 1]) for i in range(length)]
    B = Structure.graph(nB, edges)
    return free_amalgam(G, B, (at,))


def _suite_lemma_5_6(size, jobs):
    checks = 0
    failures = []
    phi_planar = _phi("phi_planar")

    for n in (4, 5, 6):
        checks += 1
        res = find_induced_Dm(families.dn(n))
        if res is None or res.m != n or not res.embedding.is_embedding():
            failures.append("chain extraction on D_%d returned %r" % (n, res))

    extras = [
        ("D_4 + C_7", disjoint_union(families.dn(4), families.cycle(7))),
        ("D_4 glued to a path", _pendant_path_extension(families.dn(4), 2, 3)),
        (
            "D_4 glued to a 5-cycle",
            free_amalgam(families.dn(4), families.cycle(5), (2,)),
        ),
    ]
    for name, H in extras:
        checks += 1
        if solver.find_hom(families.clique(4), H) is not None:
            failures.append("%s unexpectedly contains a K_4" % name)
            continue
        res = find_induced_Dm(H)
        if res is None or res.m != 4 or not res.embedding.is_embedding():
            failures.append("chain extraction on %s returned %r" % (name, res))

    negatives = [
        ("C_9", families.cycle(9), "fails-phi-planar"),
        ("D_3", families.dn(3), "contains-K4"),
        ("K_4", families.clique(4), "contains-K4"),
    ]
    for name, H, reason in negatives:
        checks += 1
        if find_induced_Dm(H) is not None:
            failures.append("chain extraction on %s should return none" % name)
        if reason not in dm_preconditions(H):
            failures.append(
                "precondition flag %r missing for %s" % (reason, name)
            )

    # Every K_5-minor-free graph with an induced ring satisfies the
    # planar sentence; spot-check on the instances above.
    carriers = [("D_%d" % n, families.dn(n)) for n in (3, 4, 5, 6)]
    carriers += extras
    for name, H in carriers:
        checks += 1
        if minors.has_minor(H, "k5"):
            failures.append("%s has a K_5 minor" % name)
            continue
        if not formulas.evaluate(phi_planar, H):
            failures.append("%s fails the planar sentence" % name)
    return checks, failures, []


# -- suite: thm-5-8-witnesses -------------------------------------------------


def _suite_thm_5_8(size, jobs):
    checks = 0
    failures = []
    notes = []
    phi_hat = _phi("phi_hat")

    full_scans = [("K_4", families.clique(4)), ("D_4", families.dn(4))]
    for name, M in full_scans:
        checks += 1
        rep = is_minimal_induced_model(
            phi_hat, M, class_filter=minors.is_planar, mode="exhaustive"
        )
        checks += rep.subsets_checked
        if not rep.minimal:
            failures.append(
                "%s has a satisfying proper planar induced subgraph: %r"
                % (name, rep.counterexample)
            )

    for name, M in [("D_5", families.dn(5)), ("D_6", families.dn(6))]:
        checks += 1
        rep = is_minimal_induced_model(
            phi_hat, M, class_filter=minors.is_planar, mode="deletion"
        )
        notes.append("%s checked by vertex deletion only: partial evidence" % name)
        if not rep.minimal:
            failures.append(
                "%s has a satisfying vertex-deleted planar subgraph: %r"
                % (name, rep.counterexample)
            )

    witnesses = [("K_4", families.clique(4))] + [
        ("D_%d" % n, families.dn(n)) for n in (4, 5, 6, 7)
    ]
    for (na, A), (nb, B) in itertools.permutations(witnesses, 2):
        checks += 1
        try:
            h = solver.find_hom(A, B, budget=10**8)
        except solver.BudgetExceededError:
            failures.append("budget exceeded deciding hom %s -> %s" % (na, nb))
            continue
        if h is not None:
            failures.append("hom %s -> %s exists" % (na, nb))
    return checks, failures, notes


# -- registry -----------------------------------------------------------------

_SUITES = {
    "lemma-3-2": _suite_lemma_3_2,
    "lemma-3-3-exhaustive": _suite_lemma_3_3,
    "thm-3-4-minimal-models": _suite_thm_3_4_minimal,
    "thm-3-4-preservation": _suite_thm_3_4_preservation,
    "def-4-1-interpretation": _suite_def_4_1,
    "amalgam-properties": _suite_amalgam,
    "thm-4-4-outerplanar-closure": _suite_thm_4_4,
    "lemma-5-2-injective": _suite_lemma_5_2,
    "prop-5-4-audit": _suite_prop_5_4,
    "lemma-5-6-chain": _suite_lemma_5_6,
    "thm-5-8-witnesses": _suite_thm_5_8,
}

SUITE_NAMES = tuple(_SUITES)


def run_suite(name, *, size=None, jobs=1):
    """Run one named verification suite and return its report.

    ``size`` scales the suite where that is meaningful (largest wheel,
    instance count, pool size); None picks the suite's default.
    ``jobs`` > 1 fans independent checks out over worker processes
    where the suite supports it.
    """
    if name not in _SUITES:
        raise LabError(
            "unknown suite %r (known: %s)" % (name, ", ".join(SUITE_NAMES))
        )
    checks, failures, notes = _SUITES[name](size, jobs)
    return SuiteReport(
        name=name, checks=checks, failures=tuple(failures), notes=tuple(notes)
    )

"""Acceptance criteria, one test per criterion.

Each numbered test runs the matching verification suite (or, for the
cross-module criterion, the direct oracle comparisons) and asserts a
clean pass.  The conftest hook prints one ``ACCEPTANCE <nn> <name>:
PASS|FAIL`` line per criterion at the end of the run.

Criterion 11 is asserted exactly as stated and is expected to fail:
each D_n here is planar, planar graphs are 4-colorable, and a proper
4-coloring *is* a homomorphism D_n -> K_4, so the pairwise
hom-incomparability of {K_4, D_4..D_7} cannot hold.  The suite records
the four found homomorphisms as witnesses; see README.md for the
analysis.  The minimal-model half of the criterion does pass, which
test_criterion_11 verifies before asserting the full claim.
"""

import itertools
import random

from fmtlab import families, formulas, lab, solver
from fmtlab.structures import Structure, ball, induced_substructure


def _run(name, **kw):
    rep = lab.run_suite(name, **kw)
    for line in rep.lines():
        print(line)
    return rep


def test_criterion_01_lemma_3_2():
    rep = _run("lemma-3-2")
    assert rep.passed, rep.failures


def test_criterion_02_lemma_3_3_exhaustive():
    rep = _run("lemma-3-3-exhaustive", jobs=2)
    assert rep.checks >= 2 ** 15          # every labeled graph on <= 6 points
    assert rep.passed, rep.failures


def test_criterion_03_thm_3_4_minimal_models():
    rep = _run("thm-3-4-minimal-models")
    assert rep.passed, rep.failures
    assert any("oracle proxy" in note for note in rep.notes)


def test_criterion_04_thm_3_4_preservation():
    rep = _run("thm-3-4-preservation")
    assert rep.passed, rep.failures


def test_criterion_05_def_4_1_interpretation():
    rep = _run("def-4-1-interpretation")
    assert rep.checks >= 50
    assert rep.passed, rep.failures


def test_criterion_06_amalgam_properties():
    rep = _run("amalgam-properties")
    assert rep.checks >= 100
    assert rep.passed, rep.failures


def test_criterion_07_thm_4_4_outerplanar_closure():
    rep = _run("thm-4-4-outerplanar-closure")
    assert rep.passed, rep.failures


def test_criterion_08_lemma_5_2_injective():
    rep = _run("lemma-5-2-injective")
    assert rep.passed, rep.failures


def test_criterion_09_prop_5_4_audit():
    rep = _run("prop-5-4-audit", jobs=2)
    assert rep.passed, rep.failures


def test_criterion_10_lemma_5_6_chain():
    rep = _run("lemma-5-6-chain")
    assert rep.passed, rep.failures


def test_criterion_11_thm_5_8_witnesses():
    rep = _run("thm-5-8-witnesses")
    # the minimal-model half holds: every failure witness concerns the
    # hom-incomparability half, through homomorphisms D_n -> K_4 that
    # exist because these D_n are planar and hence 4-colorable
    assert all("-> K_4 exists" in f for f in rep.failures)
    for n in (4, 5, 6, 7):
        assert solver.find_hom(families.dn(n), families.clique(4)) is not None
    # the criterion as stated:
    assert rep.passed, rep.failures


# ---------------------------------------------------------------------------
# criterion 12: cross-module oracles
# ---------------------------------------------------------------------------

def _all_graphs(n):
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    for bits in range(1 << len(pairs)):
        yield Structure.graph(
            n, [p for k, p in enumerate(pairs) if bits >> k & 1])


def _random_graph(rng, n):
    edges = [(i, j) for i in range(n) for j in range(i + 1, n)
             if rng.random() < 0.45]
    return Structure.graph(n, edges)


def test_criterion_12_cross_module_oracles():
    # (a) canonical queries against the solver, every labeled pair with
    # at most 4 vertices each
    checked = 0
    for nA, nB in itertools.product(range(1, 5), repeat=2):
        for A in _all_graphs(nA):
            q = formulas.canonical_query(A)
            for B in _all_graphs(nB):
                sat = formulas.evaluate(q, B)
                hom = solver.find_hom(A, B) is not None
                assert sat == hom, (A.edges, B.edges)
                checked += 1
    assert checked == 75 * 75
    print(f"canonical-query oracle: {checked} pairs agree")

    # (b) distance-atom elimination, 100 random instances
    rng = random.Random(0x0C12)
    done = 0
    while done < 100:
        f = lab.random_sentence(rng)
        if "dist<=" not in formulas.to_text(f):
            continue
        G = _random_graph(rng, rng.randint(2, 8))
        assert formulas.evaluate(f, G) == \
            formulas.evaluate(formulas.to_pure_fo(f), G), formulas.to_text(f)
        done += 1
    print(f"pure-FO expansion oracle: {done} instances agree")

    # (c) relativization against induced balls, 100 random instances
    done = 0
    while done < 100:
        psi = lab.random_sentence(rng)
        if "dist<=" in formulas.to_text(psi):
            continue
        G = _random_graph(rng, rng.randint(1, 8))
        v = rng.randrange(G.n)
        r = rng.randint(0, 3)
        rel = formulas.relativize(psi, "center", r)
        B, _ = induced_substructure(G, ball(G, v, r))
        assert formulas.evaluate(rel, G, {"center": v}) == \
            formulas.evaluate(psi, B), formulas.to_text(psi)
        done += 1
    print(f"relativization oracle: {done} instances agree")

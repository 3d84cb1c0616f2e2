"""The compiled and pure evaluation kernels must agree exactly."""

import random

import pytest

from fmtlab import families, formulas, kernel, lab, solver
from fmtlab.structures import Structure

needs_c = pytest.mark.skipif(
    not kernel.have_c_kernel(), reason="compiled kernel not built")


@pytest.fixture(autouse=True)
def restore_kernel():
    yield
    kernel.set_kernel("auto")


def random_graph(rng, n):
    edges = [(i, j) for i in range(n) for j in range(i + 1, n)
             if rng.random() < 0.4]
    return Structure.graph(n, edges)


def test_kernel_mode_switching():
    kernel.set_kernel("py")
    assert kernel.active_kernel() == "python"
    if kernel.have_c_kernel():
        kernel.set_kernel("c")
        assert kernel.active_kernel() == "c"
    kernel.set_kernel("auto")
    with pytest.raises(RuntimeError):
        kernel.set_kernel("turbo")


@needs_c
def test_evaluation_parity_on_random_instances():
    rng = random.Random(0xBEEF)
    for _ in range(60):
        G = random_graph(rng, rng.randint(1, 9))
        f = lab.random_sentence(rng)
        kernel.set_kernel("py")
        py = formulas.evaluate(f, G)
        kernel.set_kernel("c")
        c = formulas.evaluate(f, G)
        assert py == c, formulas.to_text(f)


@needs_c
def test_evaluation_parity_on_builtins():
    cases = [
        ("phi_bouquet", families.wheel(5)),
        ("phi_bouquet", families.cycle(6)),
        ("phi_planar", families.dn(5)),
        ("phi_planar", families.cycle(7)),
        ("phi_hat", families.dn(4)),
    ]
    for name, G in cases:
        f = formulas.BUILTIN_FORMULAS[name]
        kernel.set_kernel("py")
        py = formulas.evaluate(f, G)
        kernel.set_kernel("c")
        assert formulas.evaluate(f, G) == py, (name, G.n)


@needs_c
def test_hom_search_parity_maps_and_node_counts():
    rng = random.Random(0xF00D)
    for _ in range(40):
        A = random_graph(rng, rng.randint(1, 5))
        B = random_graph(rng, rng.randint(1, 5))
        kernel.set_kernel("py")
        py = kernel.hom_search(A, B)
        kernel.set_kernel("c")
        c = kernel.hom_search(A, B)
        assert sorted(py[0]) == sorted(c[0])
        assert py[1] == c[1]          # node counts match exactly
        assert py[2] == c[2]


@needs_c
def test_distance_atom_parity():
    rng = random.Random(3)
    f = formulas.parse(
        "(exists x (exists y (and (dist<= 3 x y) (not (dist<= 1 x y)))))")
    for _ in range(30):
        G = random_graph(rng, rng.randint(2, 10))
        kernel.set_kernel("py")
        py = formulas.evaluate(f, G)
        kernel.set_kernel("c")
        assert formulas.evaluate(f, G) == py


def test_pure_kernel_handles_large_instances():
    big = families.cycle(70)          # beyond the 63-element mask limit
    f = formulas.parse("(forall x (exists y (rel E x y)))")
    kernel.set_kernel("py")
    assert formulas.evaluate(f, big)
    kernel.set_kernel("auto")         # auto must fall back, not fail
    assert formulas.evaluate(f, big)
    assert solver.find_hom(big, families.cycle(70)) is not None


@needs_c
def test_forced_c_kernel_rejects_oversize():
    big = families.cycle(70)
    f = formulas.parse("(exists x true)")
    kernel.set_kernel("c")
    with pytest.raises(ValueError):
        formulas.evaluate(f, big)


def test_env_variable_names_documented_mode():
    # the module accepts exactly auto/py/python/c
    for mode in ("auto", "py", "python"):
        kernel.set_kernel(mode)
    assert kernel.active_kernel() in ("python", "c")

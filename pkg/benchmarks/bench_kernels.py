#!/usr/bin/env python3
"""Compare the pure-Python and compiled evaluation kernels.

Runs a formula-evaluation sweep and a homomorphism-enumeration sweep on
identical inputs under each kernel and prints a timing table with
speedups.  Results must agree bit-for-bit; the script fails loudly if
they ever diverge.

Usage: python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import random
import sys
import time

from fmtlab import families, formulas, kernel, lab, solver
from fmtlab.structures import Structure


def random_graph(rng, n, p=0.4):
    edges = [(i, j) for i in range(n) for j in range(i + 1, n)
             if rng.random() < p]
    return Structure.graph(n, edges)


def build_eval_cases():
    rng = random.Random(0xBE9C)
    cases = [
        ("phi_bouquet on W_13", formulas.BUILTIN_FORMULAS["phi_bouquet"],
         families.wheel(13)),
        ("phi_bouquet on bouquet 5+7+9", formulas.BUILTIN_FORMULAS["phi_bouquet"],
         families.bouquet([5, 7, 9])),
        ("phi_planar on D_7", formulas.BUILTIN_FORMULAS["phi_planar"],
         families.dn(7)),
        ("phi_planar on C_16", formulas.BUILTIN_FORMULAS["phi_planar"],
         families.cycle(16)),
        ("phi_hat on D_5", formulas.BUILTIN_FORMULAS["phi_hat"],
         families.dn(5)),
    ]
    for i in range(3):
        cases.append((f"random depth-3 sentence #{i + 1} on G(14, .4)",
                      lab.random_sentence(rng), random_graph(rng, 14)))
    return cases


def build_hom_cases():
    return [
        ("enumerate C_7 -> C_7", families.cycle(7), families.cycle(7), {}),
        ("enumerate C_5 -> W_9", families.cycle(5), families.wheel(9), {}),
        ("embeddings G_3 -> D_5", families.gn(3), families.dn(5),
         {"require": "embedding"}),
        ("count W_5 -> K_4", families.wheel(5), families.clique(4), {}),
    ]


def timed(fn, repeat):
    best, result = None, None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        dt = time.perf_counter() - t0
        best = dt if best is None else min(best, dt)
    return best, result


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5,
                    help="timing repetitions per case (best is kept)")
    args = ap.parse_args(argv)

    if not kernel.have_c_kernel():
        print("compiled kernel not built; nothing to compare "
              "(reinstall with Cython available)")
        return 1

    rows = []

    def bench(label, fn):
        kernel.set_kernel("py")
        t_py, r_py = timed(fn, args.repeat)
        kernel.set_kernel("c")
        t_c, r_c = timed(fn, args.repeat)
        kernel.set_kernel("auto")
        if r_py != r_c:
            print(f"MISMATCH in {label}: {r_py!r} vs {r_c!r}")
            sys.exit(1)
        rows.append((label, t_py, t_c))

    for label, f, G in build_eval_cases():
        bench(f"eval  | {label}",
              lambda f=f, G=G: formulas.evaluate(f, G))
    for label, A, B, kw in build_hom_cases():
        bench(f"homs  | {label}",
              lambda A=A, B=B, kw=kw: [h.map for h in
                                       solver.enumerate_homs(A, B, **kw)])

    width = max(len(r[0]) for r in rows)
    print(f"{'case'.ljust(width)}  {'pure':>10}  {'compiled':>10}  speedup")
    print("-" * (width + 34))
    for label, t_py, t_c in rows:
        print(f"{label.ljust(width)}  {t_py * 1e3:>8.2f}ms  "
              f"{t_c * 1e3:>8.2f}ms  {t_py / t_c:>6.1f}x")
    total_py = sum(r[1] for r in rows)
    total_c = sum(r[2] for r in rows)
    print("-" * (width + 34))
    print(f"{'total'.ljust(width)}  {total_py * 1e3:>8.2f}ms  "
          f"{total_c * 1e3:>8.2f}ms  {total_py / total_c:>6.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())

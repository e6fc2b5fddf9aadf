"""Benchmark the kernel backends on the two hot loops.

Workloads come from the library itself: the polynomial product is the root
step of the fast rooted computation on the twin trees, the subset expansion
enumerates all edge subsets of a path.  Run a couple of times so the numba
timings reflect the cached compilation:

    python benchmarks/bench_kernels.py [--level k] [--subset-edges m]
"""

from __future__ import annotations

import argparse
import time

from upoly import kernels
from upoly.constructions import build_ab
from upoly.graphmodel import RootedTree
from upoly.invariants import u_rooted
from upoly.polycore import UPolynomial, star_specialize


def _product_operands(level: int) -> tuple[UPolynomial, UPolynomial]:
    a, b = build_ab(level)
    p = u_rooted(a, "fast")
    q = u_rooted(b, "fast")
    return p, q + star_specialize(q)


def _time(fn, repeat: int = 2) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--level", type=int, default=3,
                        help="twin-tree level for the product workload (default 3)")
    parser.add_argument("--subset-edges", type=int, default=16,
                        help="path length for the subset workload (default 16)")
    parser.add_argument("--skip-python", action="store_true",
                        help="skip the dict backend on the product workload")
    args = parser.parse_args()

    p, q = _product_operands(args.level)
    print(f"product workload: {len(p)} x {len(q)} terms "
          f"({len(p) * len(q) / 1e6:.1f}M monomial pairs)")
    n = args.subset_edges + 1
    path = RootedTree.path(n)
    edges = list(path.to_graph().edges)
    print(f"subset workload: {len(edges)} edges, {1 << len(edges)} subsets")

    saved = kernels.get_backend()
    reference: dict[str, UPolynomial] = {}
    try:
        for backend in kernels.available_backends():
            if backend == "python" and args.skip_python:
                continue
            kernels.set_backend(backend)
            prod = p * q  # warm-up (and correctness capture)
            reference[backend] = prod
            t_mul = _time(lambda: p * q)
            t_sub = _time(
                lambda: kernels.subset_class_counts(n, edges, root=0), repeat=1
            )
            print(f"{backend:>7}:  product {t_mul:8.3f}s   subsets {t_sub:8.3f}s")
    finally:
        kernels.set_backend(saved)

    results = list(reference.values())
    assert all(r == results[0] for r in results[1:]), "backends disagree"
    print(f"all backends agree on {len(results[0])} product terms")


if __name__ == "__main__":
    main()

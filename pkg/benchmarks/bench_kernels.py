"""Time the compiled and pure-Python width-search kernels on the same inputs.

Usage: python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import random
import time

from jsjtri import widths
from jsjtri.graph import Multigraph, complete_binary_tree, grid

CASES = [
    ("pathwidth T_4", lambda: widths.pathwidth_exact(complete_binary_tree(4), budget=64)),
    ("pathwidth T_5", lambda: widths.pathwidth_exact(complete_binary_tree(5), budget=64)),
    ("treewidth grid(4)", lambda: widths.treewidth_exact(grid(4))),
    ("pathwidth grid(4)", lambda: widths.pathwidth_exact(grid(4))),
]


def _random_graphs(seed: int, count: int, n: int, p: float) -> list[Multigraph]:
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        arcs = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
        out.append(Multigraph(n, tuple(arcs)))
    return out


def _random_case(kind: str):
    graphs = _random_graphs(7, 20, 14, 0.35)
    solve = widths.treewidth_exact if kind == "tw" else widths.pathwidth_exact
    return lambda: [solve(g).value for g in graphs]


CASES += [
    ("treewidth 20 random G(14, 0.35)", _random_case("tw")),
    ("pathwidth 20 random G(14, 0.35)", _random_case("pw")),
]


def _time(fn, repeat: int) -> tuple[float, object]:
    best, value = float("inf"), None
    for _ in range(repeat):
        start = time.perf_counter()
        value = fn()
        best = min(best, time.perf_counter() - start)
    return best, value


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    if not widths.compiled_available():
        raise SystemExit("compiled kernels are not built; run `pip install -e . --no-build-isolation`")
    print(f"{'case':34} {'compiled s':>11} {'python s':>10} {'speedup':>8}")
    for name, fn in CASES:
        widths.use_backend("compiled")
        fast, fast_value = _time(fn, args.repeat)
        widths.use_backend("python")
        slow, slow_value = _time(fn, args.repeat)
        fast_value = getattr(fast_value, "value", fast_value)
        slow_value = getattr(slow_value, "value", slow_value)
        if fast_value != slow_value:
            raise SystemExit(f"{name}: backends disagree ({fast_value} vs {slow_value})")
        print(f"{name:34} {fast:11.4f} {slow:10.4f} {slow / max(fast, 1e-9):7.0f}x")
    widths.use_backend("compiled")


if __name__ == "__main__":
    main()

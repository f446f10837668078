"""Benchmark the compiled matching kernel against the pure-Python one.

Run as ``python3 -m orthograph.bench``.  Times the dominant enumeration
kernels on a few representative workloads and prints a per-case speedup.
The workloads exercise the same code paths the library uses for symbolic
expectations and inner products, so the numbers reflect end-user latency.
"""

from __future__ import annotations

import argparse
import time

from . import _purecore

try:
    from . import _fastcore
except ImportError:
    _fastcore = None


def _k5_union_darts():
    """Dart arrays for the union of the two 5-cycles splitting K5."""
    outer = [(1, 2), (2, 3), (3, 4), (4, 5), (1, 5)]
    inner = [(1, 3), (1, 4), (2, 4), (2, 5), (3, 5)]
    index = {v: i for i, v in enumerate([1, 2, 3, 4, 5])}
    dart_vertex, dart_color = [], []
    for a, b in outer:
        dart_vertex.extend([index[a], index[b]])
        dart_color.extend([1, 1])
    for a, b in inner:
        dart_vertex.extend([index[a], index[b]])
        dart_color.extend([0, 0])
    return dart_vertex, dart_color, 5


def _bouquet_darts(k: int):
    """k parallel edges between two vertices: many matchings, tiny graph."""
    dart_vertex = []
    for _ in range(k):
        dart_vertex.extend([0, 1])
    return dart_vertex, 2


CASES = []


def _case(name):
    def wrap(fn):
        CASES.append((name, fn))
        return fn

    return wrap


@_case("pm_cycle_histogram, 8 parallel edges")
def _bench_cycle(mod):
    dv, nv = _bouquet_darts(8)
    return mod.pm_cycle_histogram(dv, nv)


@_case("pm_colored_histogram, K5 cycle split")
def _bench_colored(mod):
    dv, dc, nv = _k5_union_darts()
    return mod.pm_colored_histogram(dv, dc, nv)


@_case("pm_cross_histogram, K5 cycle split")
def _bench_cross(mod):
    dv, dc, nv = _k5_union_darts()
    return mod.pm_cross_histogram(dv, dc, nv)


@_case("cross_rematch_table, K5 cycle split")
def _bench_rematch(mod):
    dv, dc, nv = _k5_union_darts()
    return mod.cross_rematch_table(dv, dc, nv, list(range(nv)))


def _time(fn, mod, repeat):
    best = float("inf")
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn(mod)
        best = min(best, time.perf_counter() - t0)
    return best, result


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5, help="runs per case, best time kept")
    args = parser.parse_args(argv)

    if _fastcore is None:
        print("compiled kernel not available; nothing to compare")
        return 1

    width = max(len(name) for name, _ in CASES)
    print(f"{'case':<{width}}  {'pure':>10}  {'compiled':>10}  {'speedup':>8}")
    for name, fn in CASES:
        t_pure, r_pure = _time(fn, _purecore, args.repeat)
        t_fast, r_fast = _time(fn, _fastcore, args.repeat)
        if isinstance(r_pure, dict):
            match = r_pure == r_fast
        else:
            match = sorted(r_pure) == sorted(r_fast)
        tag = "" if match else "  MISMATCH"
        print(
            f"{name:<{width}}  {t_pure * 1e3:>8.2f}ms  {t_fast * 1e3:>8.2f}ms"
            f"  {t_pure / t_fast:>7.1f}x{tag}"
        )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

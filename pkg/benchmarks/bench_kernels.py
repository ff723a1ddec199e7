"""Time the compiled word kernels against the pure-Python fallback.

Run with ``python benchmarks/bench_kernels.py [--repeat N]``.
"""

import argparse
import random
import timeit

from orhier import _kernels_py as pure

try:
    from orhier import _kernels as compiled
except ImportError:
    compiled = None


def workload(seed=0, count=2000, length=60, rank=3):
    rng = random.Random(seed)
    letters = [g * s for g in range(1, rank + 1) for s in (1, -1)]
    raw = [tuple(rng.choice(letters) for _ in range(length)) for _ in range(count)]
    reduced = [pure.free_reduce(w) for w in raw]
    images = [tuple(rng.choice(letters) for _ in range(3)) for _ in range(rank)]
    return {
        "free_reduce": (lambda k: [k.free_reduce(w) for w in raw]),
        "cyclic_core": (lambda k: [k.cyclic_core(w) for w in reduced]),
        "substitute": (lambda k: [k.substitute(w, images) for w in reduced]),
        "prefix_function": (lambda k: [k.prefix_function(w) for w in reduced]),
        "whitehead_graph": (lambda k: [k.whitehead_graph(w, rank) for w in reduced if w]),
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    if compiled is None:
        print("compiled kernels not built; only the pure-Python timings are shown")
    print(f"{'kernel':<16} {'python ms':>10} {'compiled ms':>12} {'speedup':>8}")
    for name, job in workload().items():
        slow = min(timeit.repeat(lambda: job(pure), number=1, repeat=args.repeat)) * 1e3
        if compiled is None:
            print(f"{name:<16} {slow:>10.2f}")
            continue
        fast = min(timeit.repeat(lambda: job(compiled), number=1, repeat=args.repeat)) * 1e3
        print(f"{name:<16} {slow:>10.2f} {fast:>12.2f} {slow / fast:>7.1f}x")


if __name__ == "__main__":
    main()

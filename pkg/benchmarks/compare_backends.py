"""Time the compiled and pure-Python cell-scan kernels on the same hashes.

    python benchmarks/compare_backends.py [--sizes 2000,10000] [--repeats 3]

Both backends run on identical packed layouts; the script also checks that
flags and counters agree before reporting timings.
"""

import argparse
import statistics
import time

from swarmhash import QueryConfig, Scheme, build_index, detect
from swarmhash._kernels import BACKENDS
from swarmhash.datasets import family_spec, generate


def best_of(fn, repeats):
    samples = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = fn()
        samples.append(time.perf_counter() - t0)
    return result, statistics.median(samples)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="2000,10000,30000")
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()

    backends = sorted(BACKENDS)
    print(f"{'dataset':>14} {'scheme':>15} " + " ".join(f"{b + ' ms':>12}" for b in backends)
          + f" {'speedup':>8}")
    for n in (int(s) for s in args.sizes.split(",")):
        for family in ("dense", "sparse"):
            points = generate(family_spec(n, family, args.seed))
            for scheme in Scheme:
                cfg = QueryConfig(100.0, scheme)
                h = build_index(points, cfg)
                h.packed()
                results, times = {}, {}
                for b in backends:
                    results[b], times[b] = best_of(lambda: detect(h, cfg, backend=b), args.repeats)
                if len({r for r in results.values()}) != 1:
                    raise SystemExit(f"backends disagree on {family}-{n} {scheme.value}")
                speed = (f"{times['python'] / times['cython']:8.1f}x"
                         if "cython" in times else f"{'n/a':>8}")
                print(f"{family + '-' + str(n):>14} {scheme.value:>15} "
                      + " ".join(f"{times[b] * 1e3:12.2f}" for b in backends) + " " + speed)


if __name__ == "__main__":
    main()

"""Compare the compiled polynomial kernel with the pure-Python fallback.

    python benchmarks/bench_kernel.py [--repeat N] [--nvars K] [--degree D]

Times the raw dict kernels on dense random polynomials, then a full
Schouten bracket [w^C, w^C] of a quadratic structure through each backend.
"""
import argparse
import os
import random
import subprocess
import sys
import timeit

from poissonlift.ring import _pykernel

try:
    from poissonlift.ring import _ckernel
except ImportError:
    _ckernel = None


def dense(rng, nvars, degree):
    out = {}
    for _ in range(40):
        e = [0] * nvars
        for _ in range(rng.randint(0, degree)):
            e[rng.randrange(nvars)] += 1
        out[tuple(e)] = rng.randint(-9, 9) or 1
    return out


def time_kernels(args):
    rng = random.Random(0)
    a, b = dense(rng, args.nvars, args.degree), dense(rng, args.nvars, args.degree)
    cases = {
        "add": lambda k: k.add(a, b),
        "mul": lambda k: k.mul(a, b),
        "diff": lambda k: k.diff(a, 0),
    }
    print(f"{'op':<8}{'python (ms)':>14}{'cython (ms)':>14}{'speedup':>10}")
    for name, op in cases.items():
        py = min(timeit.repeat(lambda: op(_pykernel), number=20, repeat=args.repeat)) / 20
        if _ckernel is None:
            print(f"{name:<8}{py * 1e3:>14.3f}{'n/a':>14}{'':>10}")
            continue
        cy = min(timeit.repeat(lambda: op(_ckernel), number=20, repeat=args.repeat)) / 20
        print(f"{name:<8}{py * 1e3:>14.3f}{cy * 1e3:>14.3f}{py / cy:>9.2f}x")


SCHOUTEN = """
import time
from poissonlift import BACKEND, complete_lift, schouten_bracket
from poissonlift.cli import scenario
w = complete_lift(scenario("random-quadratic(1)").get("w").obj)
t = time.perf_counter()
for _ in range(5):
    schouten_bracket(w, w)
print(BACKEND, (time.perf_counter() - t) / 5)
"""


def time_end_to_end():
    print("\nschouten bracket of a complete lift (seconds)")
    base = {k: v for k, v in os.environ.items() if k != "POISSONLIFT_PURE"}
    for env in (base, dict(base, POISSONLIFT_PURE="1")):
        out = subprocess.run([sys.executable, "-c", SCHOUTEN], env=env,
                             capture_output=True, text=True, check=True).stdout.split()
        print(f"  {out[0]:<8}{float(out[1]):.4f}")


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--nvars", type=int, default=6)
    p.add_argument("--degree", type=int, default=4)
    args = p.parse_args()
    time_kernels(args)
    time_end_to_end()


if __name__ == "__main__":
    main()

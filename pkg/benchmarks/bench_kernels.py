#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

Runs the two workloads that dominate a solve -- scoring a dataset's parent
sets and answering BestScore queries during search -- once per kernel
family, each in a fresh subprocess so the BNOPT_NO_NUMBA flag takes effect
at import time.

Usage: python benchmarks/bench_kernels.py [n] [N]
"""

import os
import subprocess
import sys

WORKLOAD = r"""
import time
import bnopt

n, N = {n}, {N}
data = bnopt.random_dataset(n, N, seed=7)

# warm both hot paths so JIT compilation stays out of the timings
warm = bnopt.build_score_tables(bnopt.random_dataset(4, 40, seed=1))
bnopt.best_in(warm.tables[0], 0)

t0 = time.perf_counter()
scores = bnopt.build_score_tables(data)
t_score = time.perf_counter() - t0
full = (1 << n) - 1
t0 = time.perf_counter()
queries = 0
for x in range(n):
    t = scores.tables[x]
    for U in range(0, 1 << n, 7):
        cands = U & full & ~(1 << x)
        bnopt.best_in(t, cands)
        queries += 1
t_query = time.perf_counter() - t0

entries = sum(len(t) for t in scores.tables)
print(f"numba={{bnopt.using_numba}} entries={{entries}} "
      f"score_s={{t_score:.3f}} query_s={{t_query:.3f}} queries={{queries}}")
"""


def run(no_numba: bool, n: int, N: int) -> str:
    env = dict(os.environ, BNOPT_NO_NUMBA="1" if no_numba else "0")
    out = subprocess.run(
        [sys.executable, "-c", WORKLOAD.format(n=n, N=N)],
        env=env, capture_output=True, text=True, check=True)
    return out.stdout.strip()


def main():
    n = int(sys.argv[1]) if len(sys.argv) > 1 else 14
    N = int(sys.argv[2]) if len(sys.argv) > 2 else 400
    print(f"workload: n={n} variables, N={N} records")
    for no_numba in (True, False):
        label = "numpy fallback" if no_numba else "numba kernels"
        line = run(no_numba, n, N)
        print(f"{label:>16}: {line}")


if __name__ == "__main__":
    main()

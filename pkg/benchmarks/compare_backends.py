"""Time the compiled kernels against the numpy fallback on the same inputs.

    python benchmarks/compare_backends.py [--runs 3] [--quick]

Prints a markdown table with the best-of-R wall time per backend and the
speed-up of the compiled extension.
"""

from __future__ import annotations

import argparse
import time

from dfapar import (
    check_equiv,
    check_inclusion,
    gen_bitsplitter,
    gen_bitsplitter_ext,
    gen_cycle,
    gen_fib,
    gen_memory_forgetful,
    gen_memory_perfect,
    naive_pr,
    naive_pr_fused,
    trans_minimize,
    trans_pr,
)
from dfapar import _backend


def cases(quick: bool):
    big = not quick
    fib = gen_fib(19 if big else 15)
    bs = gen_bitsplitter(18 if big else 14)
    # the closure alphabet multiplies memory by log n, so keep this one smaller
    bs_t = gen_bitsplitter(15 if big else 12)
    ext = gen_bitsplitter_ext(16 if big else 12)
    cyc = gen_cycle(28 if big else 22)
    mem = (gen_memory_forgetful(14 if big else 10), gen_memory_perfect(14 if big else 10))
    small_fib = gen_fib(9)
    return [
        (f"naive_pr Fib N={fib.num_states}", lambda k: naive_pr(fib, kernels=k)),
        (f"naive_pr_fused Fib N={fib.num_states}", lambda k: naive_pr_fused(fib, kernels=k)),
        (f"naive_pr B{bs.num_states.bit_length() - 1}", lambda k: naive_pr(bs, kernels=k)),
        (f"trans_pr B{bs_t.num_states.bit_length() - 1}", lambda k: trans_pr(bs_t, kernels=k)),
        (f"trans Fib N={small_fib.num_states}", lambda k: trans_minimize(small_fib, kernels=k)),
        (f"equiv B{ext.num_states.bit_length() - 2}' self", lambda k: check_equiv(ext, ext, kernels=k)),
        (f"equiv C N={cyc.num_states} self", lambda k: check_equiv(cyc, cyc, kernels=k)),
        ("include memory", lambda k: check_inclusion(*mem, kernels=k)),
    ]


def best_of(fn, runs: int) -> float:
    best = float("inf")
    for _ in range(runs):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best * 1000.0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--runs", type=int, default=3)
    parser.add_argument("--quick", action="store_true", help="smaller instances")
    args = parser.parse_args(argv)

    names = _backend.available()
    kernels = {name: _backend.get(name) for name in names}
    header = ["case"] + [f"{n} (ms)" for n in names]
    if "cython" in names:
        header.append("speed-up")
    print("| " + " | ".join(header) + " |")
    print("|" + "---|" * len(header))
    for label, call in cases(args.quick):
        times = {n: best_of(lambda: call(k), args.runs) for n, k in kernels.items()}
        row = [label] + [f"{times[n]:.1f}" for n in names]
        if "cython" in names:
            row.append(f"{times['python'] / times['cython']:.1f}x")
        print("| " + " | ".join(row) + " |", flush=True)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

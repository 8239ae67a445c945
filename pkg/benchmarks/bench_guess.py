#!/usr/bin/env python3
"""Compare the compiled and pure-Python scan kernels on the guessing attack.

Builds one scenario, plants the true password at the end of each candidate
list (so every run scans the whole list), and times both engines.

    python benchmarks/bench_guess.py [--sizes 10000,100000] [--jobs 4]
"""

import argparse
import os
import random
import time

from authbreak import attacks, kernels, scheme
from authbreak.hashes import HashSuite
from authbreak.simulator import LogicalClock, eavesdrop, run_honest_session


def build_scenario(rng, suite):
    state = scheme.ServerState(master_key=scheme.new_master_key(rng))
    password = b"correct-horse-battery"
    salt = scheme.new_salt(rng)
    rpw = scheme.derive_rpw(suite, salt, password)
    card = scheme.register_user(suite, state, b"bench-user", rpw, salt)
    result = run_honest_session(suite, card, password, state, LogicalClock(1000))
    view = eavesdrop([result.transcript], card_dump=card)
    return view, password


def time_engine(suite, view, words, engine, jobs, repeats=3):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        result = attacks.offline_guess(suite, view, words, jobs=jobs, engine=engine)
        best = min(best, time.perf_counter() - start)
        assert result.recovered_password is not None
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="10000,100000,400000",
                        help="comma-separated candidate list sizes")
    parser.add_argument("--jobs", type=int, default=4,
                        help="worker count for the threaded compiled run")
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    suite = HashSuite()
    rng = random.Random(0)
    view, password = build_scenario(rng, suite)

    if not kernels.HAVE_COMPILED:
        print("note: compiled kernel not built; only the pure engine is timed")
    cpus = os.cpu_count()
    if cpus == 1:
        print("note: single cpu; the threaded run cannot beat single-threaded")

    header = f"{'candidates':>12} {'pure':>10} {'compiled':>10} {'speedup':>8}"
    if kernels.HAVE_COMPILED:
        header += f" {'compiled x{}'.format(args.jobs):>12} {'speedup':>8}"
    print(header)

    for size in sizes:
        words = [f"w-{i:08d}".encode() for i in range(size - 1)] + [password]
        pure = time_engine(suite, view, words, "pure", jobs=1)
        row = f"{size:>12} {pure * 1e3:>8.1f}ms"
        if kernels.HAVE_COMPILED:
            compiled = time_engine(suite, view, words, "compiled", jobs=1)
            threaded = time_engine(suite, view, words, "compiled", jobs=args.jobs)
            row += (f" {compiled * 1e3:>8.1f}ms {pure / compiled:>7.1f}x"
                    f" {threaded * 1e3:>10.1f}ms {pure / threaded:>7.1f}x")
        else:
            row += f" {'-':>10} {'-':>8}"
        print(row)


if __name__ == "__main__":
    main()

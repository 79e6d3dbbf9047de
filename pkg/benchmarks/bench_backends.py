"""Compare the compiled kernels with the pure-Python fallback.

    python benchmarks/bench_backends.py [--repeats 5] [--csv out.csv]

Times fingerprinting the bundled corpus, a candidate-mask scan, and one
objective evaluation on a 50-word x 20-query training instance.
"""

import argparse
import csv
import statistics
import sys
import time

import numpy as np

from strfp import _kernels_py
from strfp.core import Alphabet, round_robin_partition
from strfp.workload import (bundled_words_path, generate_workload, load_corpus, sample_training,
                            split_workload)

try:
    from strfp import _kernels_cy
except ImportError:
    _kernels_cy = None


def timed(fn, repeats):
    ts = []
    for _ in range(repeats):
        t = time.perf_counter()
        fn()
        ts.append(time.perf_counter() - t)
    return statistics.median(ts) * 1e3


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeats", type=int, default=5)
    ap.add_argument("--csv")
    args = ap.parse_args(argv)

    corpus = load_corpus(bundled_words_path(), Alphabet.printable_ascii())
    part = round_robin_partition(corpus.alphabet, 16)
    table = part.table
    wl = split_workload(generate_workload(corpus, [1, 2, 3], 10), 20, 0)
    train = sample_training(corpus, 65536, 50, 0)
    seen = wl.patterns("seen")
    pq = np.repeat(np.arange(len(seen), dtype=np.int64), len(train))
    pw = np.tile(np.arange(len(train), dtype=np.int64), len(seen))

    backends = [("python", _kernels_py)] + ([("cython", _kernels_cy)] if _kernels_cy else [])
    rows = []
    for name, k in backends:
        fps = k.fingerprint_many(table, corpus.words)
        mask = k.fingerprint(table, b"ae")
        qf, wf = k.fingerprint_many(table, seen), k.fingerprint_many(table, train.words)
        rows.append({
            "backend": name,
            "fingerprint_corpus_ms": timed(lambda: k.fingerprint_many(table, corpus.words), args.repeats),
            "candidate_mask_ms": timed(lambda: k.candidate_mask(fps, mask), args.repeats),
            "objective_eval_ms": timed(
                lambda: k.count_separated(k.fingerprint_many(table, seen),
                                          k.fingerprint_many(table, train.words), pq, pw), args.repeats),
        })
        assert k.count_separated(qf, wf, pq, pw) == _kernels_py.count_separated(qf, wf, pq, pw)

    cols = list(rows[0])
    print(f"{len(corpus)} words, {len(pq)} training pairs, median of {args.repeats}")
    print("  ".join(f"{c:>22}" for c in cols))
    for r in rows:
        print("  ".join(f"{r[c]:>22.3f}" if isinstance(r[c], float) else f"{r[c]:>22}" for c in cols))
    if len(rows) == 2:
        print("speedup " + "  ".join(f"{c}={rows[0][c] / rows[1][c]:.1f}x" for c in cols[1:]))
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=cols)
            w.writeheader()
            w.writerows(rows)
    return 0


if __name__ == "__main__":
    sys.exit(main())

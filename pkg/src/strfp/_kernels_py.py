"""Pure-Python kernels, used when the compiled extension is unavailable."""

import numpy as np


def fingerprint(table, s):
    bits = 0
    for b in set(s):
        bits |= 1 << table[b]
    return bits


def fingerprint_many(table, strings):
    out = np.empty(len(strings), dtype=np.uint64)
    for i, s in enumerate(strings):
        bits = 0
        for b in set(s):
            bits |= 1 << table[b]
        out[i] = bits
    return out


def candidate_mask(fps, mask, threads=1):
    m = np.uint64(mask)
    return (fps & m) == m


def count_candidates(fps, mask):
    return int(np.count_nonzero(candidate_mask(fps, mask)))


def count_separated(qfps, wfps, pair_q, pair_w):
    q = qfps.tolist()
    w = wfps.tolist()
    c = 0
    for i, j in zip(pair_q.tolist(), pair_w.tolist()):
        if q[i] & ~w[j]:
            c += 1
    return c

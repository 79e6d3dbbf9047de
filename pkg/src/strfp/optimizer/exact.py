from __future__ import annotations

import time

from .. import kernels
from ..core import Partition
from ..errors import GuardError
from .instance import SolveTrace, TrainingInstance

MAX_EXACT_ALPHABET = 14


def restricted_growth_strings(m: int, n: int):
    """Yield every set partition of ``m`` items into at most ``n`` blocks.

    Each is a list ``a`` with ``a[0] == 0`` and ``a[i] <= max(a[:i]) + 1``,
    capped at ``n - 1``. The list is reused between yields.
    """
    if m == 0:
        yield []
        return
    a = [0] * m
    mx = [0] * m  # mx[i] = max(a[:i+1])
    while True:
        yield a
        i = m - 1
        while i > 0 and (a[i] == n - 1 or a[i] > mx[i - 1]):
            i -= 1
        if i == 0:
            return
        a[i] += 1
        mx[i] = max(mx[i - 1], a[i])
        for t in range(i + 1, m):
            a[t] = 0
            mx[t] = mx[i]


def exact_solve(inst: TrainingInstance) -> tuple[Partition, SolveTrace]:
    """Enumerate all partitions of the alphabet and keep the first best one."""
    members = list(inst.alphabet)
    if len(members) > MAX_EXACT_ALPHABET:
        raise GuardError(f"exact enumeration limited to {MAX_EXACT_ALPHABET} characters, got {len(members)}")
    t0 = time.perf_counter()
    n = inst.width
    table = bytearray(b % n for b in range(256))
    trace = SolveTrace(total=inst.n_negatives)
    best_obj = -1
    best = None
    count = 0
    for rgs in restricted_growth_strings(len(members), n):
        count += 1
        for b, j in zip(members, rgs):
            table[b] = j
        if inst.n_negatives:
            qf = kernels.fingerprint_many(bytes(table), inst.queries)
            wf = kernels.fingerprint_many(bytes(table), inst.words)
            obj = kernels.count_separated(qf, wf, inst.pair_q, inst.pair_w)
        else:
            obj = 0
        if obj > best_obj:
            best_obj = obj
            best = Partition.from_assignment(inst.alphabet, n, dict(zip(members, rgs)), "exact")
            trace.record(time.perf_counter() - t0, obj, best)
            if obj == inst.n_negatives:
                break
    trace.status = "optimal"
    trace.iterations = count
    return best, trace

from __future__ import annotations

import random
import time

from .. import kernels
from ..core import Partition, round_robin_partition
from .instance import SolveTrace, TrainingInstance

DEFAULT_TIME_LIMIT = 300.0


def local_search(inst: TrainingInstance, time_limit: float = DEFAULT_TIME_LIMIT, seed: int = 0,
                 init="round_robin", max_iters: int | None = None,
                 kick_fraction: float = 0.1,
                 tiebreak: TrainingInstance | None = None) -> tuple[Partition, SolveTrace]:
    """Anytime first-improvement search over single-character moves.

    A move reassigns one alphabet byte to another bin; each candidate is
    scored by a full objective re-evaluation. At a local optimum the search
    restarts from the best incumbent with a random kick of a few bytes.
    Only bytes occurring in the training strings are moved, since moving
    any other byte cannot change the objective.

    ``tiebreak`` is an optional second instance over the same width whose
    objective only decides between moves of equal primary objective; the
    primary objective still never decreases.

    ``max_iters`` caps the number of scored moves. With a cap and a
    generous ``time_limit`` the result depends only on ``seed``.
    """
    if time_limit <= 0:
        raise ValueError("time_limit must be positive")
    t0 = time.perf_counter()
    deadline = t0 + time_limit
    rng = random.Random(seed)
    n = inst.width

    if isinstance(init, Partition):
        start = init
    elif init == "round_robin":
        start = round_robin_partition(inst.alphabet, n)
    elif init == "random":
        start = Partition.from_assignment(
            inst.alphabet, n, {b: rng.randrange(n) for b in inst.alphabet}, "local_search")
    else:
        raise ValueError(f"unknown init {init!r}")
    if start.width != n:
        raise ValueError(f"width mismatch: init {start.width}, instance {n}")

    meta = (("seed", str(seed)), ("time_limit", f"{time_limit:g}"),
            ("max_iters", str(max_iters) if max_iters is not None else "none"))
    total = inst.n_negatives

    def _count(t: bytes, ins: TrainingInstance) -> int:
        if not ins.n_negatives:
            return 0
        return kernels.count_separated(kernels.fingerprint_many(t, ins.queries),
                                       kernels.fingerprint_many(t, ins.words), ins.pair_q, ins.pair_w)

    if tiebreak is not None and tiebreak.width != n:
        raise ValueError("tiebreak instance width differs")

    def score(table: bytearray) -> tuple[int, int]:
        t = bytes(table)
        return _count(t, inst), (_count(t, tiebreak) if tiebreak is not None else 0)

    cur = bytearray(start.table)
    cur_obj = score(cur)
    best = bytearray(cur)
    best_obj = cur_obj
    trace = SolveTrace(total=total)
    trace.record(0.0, best_obj[0], start)

    active = inst.active_bytes()
    iters = 0
    status = None
    if best_obj[0] == total and tiebreak is None or n == 1 or not active:
        status = "optimal"

    while status is None:
        moves = [(b, j) for b in active for j in range(n) if j != cur[b]]
        rng.shuffle(moves)
        improved = False
        for b, j in moves:
            if max_iters is not None and iters >= max_iters:
                status = "iteration_limit"
                break
            if time.perf_counter() >= deadline:
                status = "time_limit"
                break
            iters += 1
            old = cur[b]
            cur[b] = j
            obj = score(cur)
            if obj > cur_obj:
                cur_obj = obj
                improved = True
                if obj > best_obj:
                    if obj[0] > best_obj[0]:
                        trace.record(time.perf_counter() - t0, obj[0],
                                     Partition(n, bytes(cur), inst.alphabet, "local_search", meta))
                    best_obj = obj
                    best[:] = cur
                    if best_obj[0] == total and (tiebreak is None or best_obj[1] == tiebreak.n_negatives):
                        status = "optimal"
                break
            cur[b] = old
        if status is None and not improved:
            cur[:] = best
            for b in rng.sample(active, max(1, round(kick_fraction * len(active)))):
                cur[b] = rng.randrange(n)
            cur_obj = score(cur)

    trace.status = status
    trace.iterations = iters
    if bytes(best) == start.table:
        return start, trace
    return Partition(n, bytes(best), inst.alphabet, "local_search", meta), trace


def gram_tiebreak(words, width: int, alphabet, ks=(2,)) -> TrainingInstance:
    """Tie-break instance using the training words' own distinct k-grams as queries."""
    grams = set()
    for w in words:
        for k in ks:
            grams.update(w[i:i + k] for i in range(len(w) - k + 1))
    return TrainingInstance.build(words, sorted(grams), width, alphabet)

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .. import kernels
from ..core import Alphabet, Partition, _check_width


@dataclass(frozen=True)
class TrainingInstance:
    """Training words, seen query patterns and their negative pairs.

    ``pair_q[i], pair_w[i]`` index one (query, word) combination where the
    word does not contain the query. Only those pairs can be misclassified.
    """

    words: tuple[bytes, ...]
    queries: tuple[bytes, ...]
    width: int
    alphabet: Alphabet
    matches: tuple[tuple[int, ...], ...]
    pair_q: np.ndarray = field(repr=False)
    pair_w: np.ndarray = field(repr=False)

    @classmethod
    def build(cls, words: Sequence[bytes], queries: Sequence[bytes], width: int,
              alphabet: Alphabet | None = None) -> TrainingInstance:
        _check_width(width)
        words = tuple(bytes(w) for w in words)
        queries = tuple(bytes(q) for q in queries)
        if alphabet is None:
            alphabet = Alphabet.from_strings(words + queries)
        matches = tuple(tuple(i for i, w in enumerate(words) if q in w) for q in queries)
        pq, pw = [], []
        for qi, q in enumerate(queries):
            hit = set(matches[qi])
            for wi in range(len(words)):
                if wi not in hit:
                    pq.append(qi)
                    pw.append(wi)
        return cls(words, queries, width, alphabet, matches,
                   np.asarray(pq, dtype=np.int64), np.asarray(pw, dtype=np.int64))

    @property
    def negative_pairs(self) -> list[tuple[int, int]]:
        return list(zip(self.pair_q.tolist(), self.pair_w.tolist()))

    @property
    def n_negatives(self) -> int:
        return len(self.pair_q)

    def active_bytes(self) -> list[int]:
        """Alphabet members that occur in some training string."""
        used = set()
        for s in self.words + self.queries:
            used.update(s)
        return [b for b in self.alphabet if b in used]


def objective(partition: Partition, inst: TrainingInstance) -> tuple[int, int]:
    """Correctly pruned negative pairs, and the number of negative pairs."""
    if partition.width != inst.width:
        raise ValueError(f"width mismatch: partition {partition.width}, instance {inst.width}")
    if not inst.n_negatives:
        return 0, 0
    qf = kernels.fingerprint_many(partition.table, inst.queries)
    wf = kernels.fingerprint_many(partition.table, inst.words)
    return kernels.count_separated(qf, wf, inst.pair_q, inst.pair_w), inst.n_negatives


def fpr(correct: int, total: int) -> float:
    return 0.0 if total == 0 else 1.0 - correct / total


@dataclass
class TraceEntry:
    elapsed: float
    objective: int
    partition: Partition


@dataclass
class SolveTrace:
    entries: list[TraceEntry] = field(default_factory=list)
    status: str = "time_limit"
    total: int = 0
    iterations: int = 0

    def record(self, elapsed: float, obj: int, partition: Partition) -> None:
        if self.entries and obj < self.entries[-1].objective:
            raise ValueError("incumbent objective must not decrease")
        self.entries.append(TraceEntry(elapsed, obj, partition))

    @property
    def best(self) -> int:
        return self.entries[-1].objective if self.entries else 0

    def write_csv(self, sink, header: dict | None = None) -> None:
        for k, v in (header or {}).items():
            sink.write(f"# {k}={v}\n")
        w = csv.writer(sink, lineterminator="\n")
        w.writerow(["elapsed_s", "objective", "fpr"])
        for e in self.entries:
            w.writerow([f"{e.elapsed:.6f}", e.objective, f"{fpr(e.objective, self.total):.6f}"])

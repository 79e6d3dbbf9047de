"""False-positive rates and scan timings for a partition over a corpus."""

from __future__ import annotations

import csv
import statistics
import time
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .core import Partition, render, Fingerprint
from .workload import Corpus, Workload, escape

REPORT_FIELDS = ["pattern", "role", "k", "freq_class", "true_matches", "candidates",
                 "false_positives", "fpr"]
BENCH_FIELDS = REPORT_FIELDS + ["t_full_ms", "t_filtered_ms", "speedup"]


@dataclass(frozen=True)
class FingerprintColumn:
    fps: np.ndarray
    partition: Partition

    def __len__(self) -> int:
        return len(self.fps)

    def rendered(self) -> list[str]:
        w = self.partition.width
        return [render(Fingerprint(int(b), w)) for b in self.fps]


def build_column(corpus: Corpus, partition: Partition) -> FingerprintColumn:
    return FingerprintColumn(kernels.fingerprint_many(partition.table, corpus.words), partition)


def filtered_scan(column: FingerprintColumn, corpus: Corpus, q: bytes) -> tuple[int, list[int]]:
    """Mask-test every row, then verify containment on candidate rows only."""
    if not q:
        raise ValueError("pattern must not be empty")
    mask = kernels.fingerprint(column.partition.table, q)
    cand = np.flatnonzero(kernels.candidate_mask(column.fps, mask, kernels.threads()))
    words = corpus.words
    return len(cand), [i for i in cand.tolist() if q in words[i]]


def full_scan(corpus: Corpus, q: bytes) -> list[int]:
    return [i for i, w in enumerate(corpus.words) if q in w]


@dataclass
class QueryRow:
    pattern: bytes
    role: str
    k: int
    freq_class: str
    true_matches: int
    candidates: int
    false_positives: int
    fpr: float
    t_full_ms: float | None = None
    t_filtered_ms: float | None = None

    @property
    def speedup(self) -> float | None:
        if self.t_full_ms is None or not self.t_filtered_ms:
            return None
        return self.t_full_ms / self.t_filtered_ms


@dataclass
class EvalReport:
    rows: list[QueryRow] = field(default_factory=list)
    corpus_size: int = 0

    def aggregate(self, role: str | None = None) -> float:
        """Pair-weighted FPR: false-positive pairs over negative pairs."""
        rows = [r for r in self.rows if role is None or r.role == role]
        fp = sum(r.false_positives for r in rows)
        neg = sum(self.corpus_size - r.true_matches for r in rows)
        return fp / neg if neg else 0.0

    def write_csv(self, sink, header: dict | None = None, timings: bool = False) -> None:
        for k, v in (header or {}).items():
            sink.write(f"# {k}={v}\n")
        w = csv.writer(sink, lineterminator="\n")
        w.writerow(BENCH_FIELDS if timings else REPORT_FIELDS)
        for r in self.rows:
            row = [escape(r.pattern).decode("latin-1"), r.role, r.k, r.freq_class,
                   r.true_matches, r.candidates, r.false_positives, f"{r.fpr:.6f}"]
            if timings:
                row += [f"{r.t_full_ms:.4f}", f"{r.t_filtered_ms:.4f}", f"{r.speedup:.4f}"]
            w.writerow(row)


def evaluate(corpus: Corpus, partition: Partition, workload: Workload,
             column: FingerprintColumn | None = None) -> EvalReport:
    column = column or build_column(corpus, partition)
    n = len(corpus)
    report = EvalReport(corpus_size=n)
    for q in workload.queries:
        cand, matches = filtered_scan(column, corpus, q.pattern)
        tm = len(matches)
        fp = cand - tm
        report.rows.append(QueryRow(q.pattern, q.role, q.k, q.freq_class, tm, cand, fp,
                                    fp / (n - tm) if n - tm else 0.0))
    return report


def bench_scan(corpus: Corpus, partition: Partition, workload: Workload, repeats: int = 5) -> EvalReport:
    """Median wall time of a full scan versus a fingerprint-filtered scan, per query."""
    if repeats < 1:
        raise ValueError("repeats must be >= 1")
    column = build_column(corpus, partition)
    report = evaluate(corpus, partition, workload, column)
    for row in report.rows:
        full, filt = [], []
        for _ in range(repeats):
            t = time.perf_counter()
            full_scan(corpus, row.pattern)
            full.append(time.perf_counter() - t)
            t = time.perf_counter()
            filtered_scan(column, corpus, row.pattern)
            filt.append(time.perf_counter() - t)
        row.t_full_ms = statistics.median(full) * 1e3
        row.t_filtered_ms = statistics.median(filt) * 1e3
    return report

"""Corpus ingestion, k-gram statistics, query workloads and the match oracle."""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

from .core import Alphabet
from .errors import DataError

FREQ_CLASSES = ("high", "mid", "low")
ROLES = ("seen", "unseen")


@dataclass(frozen=True)
class Corpus:
    words: tuple[bytes, ...]
    alphabet: Alphabet
    dropped_count: int = 0

    def __len__(self) -> int:
        return len(self.words)


@dataclass(frozen=True)
class Query:
    pattern: bytes
    k: int
    freq_class: str
    role: str = "unseen"


@dataclass(frozen=True)
class Workload:
    queries: tuple[Query, ...]
    seed: int | None = None

    def __len__(self) -> int:
        return len(self.queries)

    def patterns(self, role: str | None = None) -> list[bytes]:
        return [q.pattern for q in self.queries if role is None or q.role == role]


def bundled_words_path() -> Path:
    """Bundled word list: 60,000 entries of the public-domain web2 dictionary."""
    return Path(str(resources.files("strfp") / "data" / "words.txt"))


def load_corpus(source, alphabet: Alphabet, policy: str = "drop_row") -> Corpus:
    """Read newline-delimited rows from a path, bytes, or binary file object.

    ``drop_row`` excludes rows holding any byte outside ``alphabet``;
    ``keep_total`` keeps every row.
    """
    if policy not in ("drop_row", "keep_total"):
        raise ValueError(f"unknown policy {policy!r}")
    if isinstance(source, (bytes, bytearray)):
        data = bytes(source)
    elif hasattr(source, "read"):
        data = source.read()
        if isinstance(data, str):
            data = data.encode("utf-8")
    else:
        try:
            data = Path(source).read_bytes()
        except OSError as e:
            raise DataError(f"cannot read corpus {source}: {e}") from None
    rows = data.split(b"\n")
    if rows and rows[-1] == b"":
        rows.pop()
    rows = [r[:-1] if r.endswith(b"\r") else r for r in rows]
    if policy == "keep_total":
        return Corpus(tuple(rows), alphabet, 0)
    allowed = alphabet._set
    kept = [r for r in rows if allowed.issuperset(r)]
    return Corpus(tuple(kept), alphabet, len(rows) - len(kept))


def corpus_from_words(words: Iterable[bytes | str], alphabet: Alphabet | None = None) -> Corpus:
    ws = tuple(w.encode() if isinstance(w, str) else bytes(w) for w in words)
    if alphabet is None:
        alphabet = Alphabet.from_strings(ws) if any(ws) else Alphabet.printable_ascii()
    return Corpus(ws, alphabet, 0)


def kgram_frequencies(corpus: Corpus, k: int) -> dict[bytes, int]:
    """Document frequency of every k-gram: number of words containing it."""
    if k < 1:
        raise ValueError("k must be >= 1")
    counts = Counter()
    for w in corpus.words:
        if len(w) >= k:
            counts.update({w[i:i + k] for i in range(len(w) - k + 1)})
    return dict(counts)


def generate_workload(corpus: Corpus, ks: Sequence[int], per_class: int, seed: int | None = None) -> Workload:
    """High, mid and low document-frequency k-grams for each k.

    Grams are ordered by (frequency desc, bytes asc). The mid class is the
    ``per_class`` grams centred on rank ``count // 2``. A gram already taken
    by a higher-priority class (high > mid > low) is not repeated.
    """
    if per_class < 1:
        raise ValueError("per_class must be >= 1")
    queries = []
    seen = set()
    for k in ks:
        freqs = kgram_frequencies(corpus, k)
        order = sorted(freqs, key=lambda g: (-freqs[g], g))
        c = len(order)
        start = max(0, min(c - per_class, c // 2 - per_class // 2))
        picks = {
            "high": order[:per_class],
            "mid": order[start:start + per_class],
            "low": order[max(0, c - per_class):],
        }
        for cls in FREQ_CLASSES:
            for g in picks[cls]:
                if g not in seen:
                    seen.add(g)
                    queries.append(Query(g, k, cls))
    return Workload(tuple(queries), seed)


def split_workload(w: Workload, n_seen: int, seed: int) -> Workload:
    """Tag a uniformly random ``n_seen``-subset as seen, the rest unseen."""
    if not 0 <= n_seen <= len(w.queries):
        raise ValueError(f"n_seen must be in [0, {len(w.queries)}], got {n_seen}")
    chosen = set(random.Random(seed).sample(range(len(w.queries)), n_seen))
    qs = tuple(replace(q, role="seen" if i in chosen else "unseen") for i, q in enumerate(w.queries))
    return Workload(qs, seed)


@dataclass(frozen=True)
class MatchOracle:
    patterns: tuple[bytes, ...]
    matches: tuple[tuple[int, ...], ...]

    def __getitem__(self, i: int) -> tuple[int, ...]:
        return self.matches[i]

    def __len__(self) -> int:
        return len(self.patterns)

    def of(self, pattern: bytes) -> tuple[int, ...]:
        return self.matches[self.patterns.index(pattern)]


def oracle(corpus: Corpus, queries: Iterable[bytes]) -> MatchOracle:
    pats = tuple(bytes(q) for q in queries)
    words = corpus.words
    matches = tuple(tuple(i for i, w in enumerate(words) if q in w) for q in pats)
    return MatchOracle(pats, matches)


def sample_training(corpus: Corpus, block_size: int, sample_size: int, seed: int) -> Corpus:
    """Uniform sample without replacement from the first ``block_size`` words."""
    if block_size < 1 or sample_size < 1:
        raise ValueError("block_size and sample_size must be >= 1")
    if not corpus.words:
        raise DataError("cannot sample from an empty corpus")
    block = corpus.words[:block_size]
    if sample_size >= len(block):
        return Corpus(tuple(block), corpus.alphabet, 0)
    idx = sorted(random.Random(seed).sample(range(len(block)), sample_size))
    return Corpus(tuple(block[i] for i in idx), corpus.alphabet, 0)


# --- workload TSV ------------------------------------------------------------

_ESC = {b"\\"[0]: b"\\\\", b"\t"[0]: b"\\t", b"\n"[0]: b"\\n"}
_UNESC = {"\\": b"\\", "t": b"\t", "n": b"\n"}


def escape(pattern: bytes) -> bytes:
    return b"".join(_ESC.get(b, bytes((b,))) for b in pattern)


def unescape(text: bytes) -> bytes:
    out = bytearray()
    i = 0
    while i < len(text):
        b = text[i]
        if b == 0x5C:
            if i + 1 >= len(text) or chr(text[i + 1]) not in _UNESC:
                raise DataError(f"bad escape in {text!r}")
            out += _UNESC[chr(text[i + 1])]
            i += 2
        else:
            out.append(b)
            i += 1
    return bytes(out)


def dump_workload(w: Workload, sink, header: dict | None = None) -> None:
    """Write TSV rows ``pattern<TAB>k<TAB>freq_class<TAB>role`` to a binary sink.

    Header lines start with ``#`` and carry no tab, so they never collide
    with data rows.
    """
    for key, value in (header or {}).items():
        sink.write(f"# {key}={value}\n".replace("\t", " ").encode())
    for q in w.queries:
        sink.write(escape(q.pattern) + f"\t{q.k}\t{q.freq_class}\t{q.role}\n".encode())


def load_workload(source) -> Workload:
    if hasattr(source, "read"):
        data = source.read()
    else:
        try:
            data = Path(source).read_bytes()
        except OSError as e:
            raise DataError(f"cannot read workload {source}: {e}") from None
    if isinstance(data, str):
        data = data.encode()
    queries = []
    seed = None
    for lineno, line in enumerate(data.split(b"\n"), start=1):
        if not line:
            continue
        if line.startswith(b"#") and b"\t" not in line:
            key, _, value = line[1:].strip().partition(b"=")
            if key == b"split_seed":
                try:
                    seed = int(value)
                except ValueError:
                    pass
            continue
        parts = line.split(b"\t")
        if len(parts) != 4:
            raise DataError(f"workload line {lineno}: expected 4 tab-separated fields")
        pat, k, cls, role = parts
        cls, role = cls.decode(), role.decode()
        if cls not in FREQ_CLASSES or role not in ROLES:
            raise DataError(f"workload line {lineno}: bad class or role")
        try:
            k = int(k)
        except ValueError:
            raise DataError(f"workload line {lineno}: bad k {k!r}") from None
        queries.append(Query(unescape(pat), k, cls, role))
    return Workload(tuple(queries), seed)

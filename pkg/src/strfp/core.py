"""Letter-bin partitions and the fingerprints they induce.

A partition maps every byte value to one of ``width`` bins. The fingerprint
of a string has bit ``j`` set iff the string holds at least one byte in bin
``j``. Bin ``j`` is integer bit ``1 << j``; rendered bitstrings list bin 0
leftmost.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import Iterable

from . import kernels
from .errors import DataError

MAX_WIDTH = 64
PROVENANCES = ("round_robin", "local_search", "exact", "imported")


@dataclass(frozen=True)
class Alphabet:
    members: tuple[int, ...]

    def __init__(self, members: Iterable[int]):
        ms = tuple(sorted(set(int(b) for b in members)))
        if not ms:
            raise ValueError("alphabet must not be empty")
        if ms[0] < 0 or ms[-1] > 255:
            raise ValueError("alphabet members must be byte values 0-255")
        object.__setattr__(self, "members", ms)

    @classmethod
    def printable_ascii(cls) -> Alphabet:
        return cls(range(0x20, 0x7F))

    @classmethod
    def from_strings(cls, strings: Iterable[bytes]) -> Alphabet:
        seen = set()
        for s in strings:
            seen.update(s)
        return cls(seen)

    @classmethod
    def parse(cls, spec: str) -> Alphabet:
        """Parse ``"printable"`` or comma-separated decimals/ranges, e.g. ``"32-126"``."""
        spec = spec.strip()
        if spec in ("printable", "printable_ascii", "ascii"):
            return cls.printable_ascii()
        members = []
        for part in spec.split(","):
            part = part.strip()
            if not part:
                continue
            lo, sep, hi = part.partition("-")
            try:
                if sep:
                    members.extend(range(int(lo), int(hi) + 1))
                else:
                    members.append(int(lo))
            except ValueError:
                raise DataError(f"bad alphabet spec: {spec!r}") from None
        try:
            return cls(members)
        except ValueError as e:
            raise DataError(str(e)) from None

    def to_spec(self) -> str:
        runs = []
        start = prev = self.members[0]
        for b in self.members[1:]:
            if b == prev + 1:
                prev = b
                continue
            runs.append((start, prev))
            start = prev = b
        runs.append((start, prev))
        return ",".join(str(a) if a == b else f"{a}-{b}" for a, b in runs)

    @property
    def size(self) -> int:
        return len(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, b) -> bool:
        return b in self._set

    @property
    def _set(self) -> frozenset:
        s = self.__dict__.get("_cached_set")
        if s is None:
            s = frozenset(self.members)
            object.__setattr__(self, "_cached_set", s)
        return s


@dataclass(frozen=True)
class Fingerprint:
    bits: int
    width: int

    def __post_init__(self):
        _check_width(self.width)
        if not 0 <= self.bits < (1 << self.width):
            raise ValueError(f"bits {self.bits:#x} do not fit width {self.width}")

    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True)
class Partition:
    """Total map from all 256 byte values to bins ``[0, width)``.

    ``table[b]`` is the bin of byte ``b``. ``meta`` carries provenance
    details such as seed and time limit as string pairs.
    """

    width: int
    table: bytes
    alphabet: Alphabet
    provenance: str = "imported"
    meta: tuple[tuple[str, str], ...] = field(default=())

    def __post_init__(self):
        _check_width(self.width)
        if len(self.table) != 256:
            raise ValueError("partition table must cover all 256 byte values")
        if max(self.table) >= self.width:
            raise ValueError("bin index out of range")
        if self.provenance not in PROVENANCES:
            raise ValueError(f"unknown provenance {self.provenance!r}")

    @classmethod
    def from_assignment(cls, alphabet: Alphabet, width: int, assignment: dict[int, int],
                        provenance: str = "imported", meta=()) -> Partition:
        """Alphabet bytes from ``assignment``; every other byte falls back to ``byte % width``."""
        _check_width(width)
        table = bytearray(b % width for b in range(256))
        for b, j in assignment.items():
            if not 0 <= j < width:
                raise ValueError(f"bin {j} out of range for width {width}")
            table[b] = j
        return cls(width, bytes(table), alphabet, provenance, tuple(meta))

    def bin_of(self, b: int) -> int:
        return self.table[b]

    def bins(self) -> list[list[int]]:
        """Alphabet members grouped by bin."""
        out = [[] for _ in range(self.width)]
        for b in self.alphabet:
            out[self.table[b]].append(b)
        return out

    def assignment(self) -> dict[int, int]:
        return {b: self.table[b] for b in self.alphabet}

    def with_assignment(self, assignment: dict[int, int], provenance: str, meta=()) -> Partition:
        table = bytearray(self.table)
        for b, j in assignment.items():
            table[b] = j
        return Partition(self.width, bytes(table), self.alphabet, provenance, tuple(meta))


def _check_width(width: int) -> None:
    if not isinstance(width, int) or not 1 <= width <= MAX_WIDTH:
        raise ValueError(f"width must be in [1, {MAX_WIDTH}], got {width!r}")


def round_robin_partition(alphabet: Alphabet, width: int) -> Partition:
    """The i-th alphabet member (ascending) goes to bin ``i % width``."""
    _check_width(width)
    assignment = {b: i % width for i, b in enumerate(alphabet)}
    return Partition.from_assignment(alphabet, width, assignment, "round_robin")


def fingerprint(partition: Partition, s: bytes) -> Fingerprint:
    return Fingerprint(kernels.fingerprint(partition.table, bytes(s)), partition.width)


def is_candidate(query_fp: Fingerprint, word_fp: Fingerprint) -> bool:
    """Subset test: every bin set for the query is also set for the word."""
    if query_fp.width != word_fp.width:
        raise ValueError(f"width mismatch: {query_fp.width} vs {word_fp.width}")
    return query_fp.bits & word_fp.bits == query_fp.bits


def render(fp: Fingerprint) -> str:
    return "".join("1" if fp.bits >> j & 1 else "0" for j in range(fp.width))


def parse(s: str, width: int) -> Fingerprint:
    _check_width(width)
    if len(s) != width:
        raise ValueError(f"expected {width} characters, got {len(s)}")
    bits = 0
    for j, ch in enumerate(s):
        if ch == "1":
            bits |= 1 << j
        elif ch != "0":
            raise ValueError(f"bad character {ch!r} at position {j}")
    return Fingerprint(bits, width)


# --- partition file --------------------------------------------------------

def dump_partition(p: Partition, sink) -> None:
    meta = [("alphabet", p.alphabet.to_spec()), *p.meta]
    head = " ".join([p.provenance, *(f"{k}={v}" for k, v in meta)])
    sink.write(f"width {p.width}\n")
    sink.write(f"provenance {head}\n")
    for b in range(256):
        sink.write(f"map {b} {p.table[b]}\n")


def dumps_partition(p: Partition) -> str:
    buf = io.StringIO()
    dump_partition(p, buf)
    return buf.getvalue()


def load_partition(source) -> Partition:
    text = source.read() if hasattr(source, "read") else source
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if len(lines) < 2:
        raise DataError("partition file truncated")
    try:
        key, value = lines[0].split()
        if key != "width":
            raise ValueError
        width = int(value)
    except ValueError:
        raise DataError(f"line 1: expected 'width <n>', got {lines[0]!r}") from None
    head = lines[1].split()
    if not head or head[0] != "provenance" or len(head) < 2:
        raise DataError(f"line 2: expected 'provenance <tag>', got {lines[1]!r}")
    tag = head[1]
    meta = []
    alphabet = None
    for item in head[2:]:
        k, sep, v = item.partition("=")
        if not sep:
            raise DataError(f"line 2: bad metadata item {item!r}")
        if k == "alphabet":
            alphabet = Alphabet.parse(v)
        else:
            meta.append((k, v))
    table = [None] * 256
    for lineno, ln in enumerate(lines[2:], start=3):
        parts = ln.split()
        try:
            if len(parts) != 3 or parts[0] != "map":
                raise ValueError
            b, j = int(parts[1]), int(parts[2])
        except ValueError:
            raise DataError(f"line {lineno}: expected 'map <byte> <bin>', got {ln!r}") from None
        if not 0 <= b <= 255:
            raise DataError(f"line {lineno}: byte {b} out of range")
        if table[b] is not None:
            raise DataError(f"line {lineno}: duplicate byte {b}")
        if not 0 <= j < width:
            raise DataError(f"line {lineno}: bin {j} out of range for width {width}")
        table[b] = j
    missing = [b for b in range(256) if table[b] is None]
    if missing:
        raise DataError(f"partition file missing bytes: {missing[:8]}{'...' if len(missing) > 8 else ''}")
    if alphabet is None:
        alphabet = Alphabet(range(256))
    try:
        return Partition(width, bytes(table), alphabet, tag, tuple(meta))
    except ValueError as e:
        raise DataError(str(e)) from None

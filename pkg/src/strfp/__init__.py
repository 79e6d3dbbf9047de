"""Instance-optimized string fingerprints.

A fingerprint is a fixed-width bitmask over letter bins. A row can only
contain a pattern if the pattern's fingerprint is a subset of the row's,
so the mask test prunes ``LIKE '%p%'`` scans without false negatives.
"""

__version__ = "0.1.0"

from .core import (Alphabet, Fingerprint, Partition, dump_partition, dumps_partition, fingerprint,
                   is_candidate, load_partition, parse, render, round_robin_partition)
from .errors import DataError, GuardError, StrfpError
from .kernels import BACKEND

__all__ = [
    "Alphabet", "BACKEND", "DataError", "Fingerprint", "GuardError", "Partition", "StrfpError",
    "dump_partition", "dumps_partition", "fingerprint", "is_candidate", "load_partition", "parse",
    "render", "round_robin_partition",
]

"""Backend selection for the hot loops.

The compiled extension is used when importable. Set ``STRFP_PURE=1`` to
force the pure-Python fallback. ``BACKEND`` names the active one.
"""

import os

from . import _kernels_py

if os.environ.get("STRFP_PURE"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels_cy as _impl
    except ImportError:
        _impl = _kernels_py

BACKEND = "python" if _impl is _kernels_py else "cython"

fingerprint = _impl.fingerprint
fingerprint_many = _impl.fingerprint_many
candidate_mask = _impl.candidate_mask
count_candidates = _impl.count_candidates
count_separated = _impl.count_separated


def threads():
    """Thread cap from ``STRFP_THREADS`` (default 1)."""
    raw = os.environ.get("STRFP_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1

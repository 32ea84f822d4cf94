"""Selects the hitting-set kernel backend at import time.

The compiled extension is used when it imports; set ``CQAREPAIR_KERNELS=python``
to force the pure-Python implementation. ``BACKEND`` names the active one.
The bounded search tree always runs in Python: it only ever explores a tree
whose size depends on the parameter, not on the instance.
"""

from __future__ import annotations

import os

from . import _kernels_py
from ._kernels_py import hitting_set_bounded

_impl = _kernels_py
BACKEND = "python"

if os.environ.get("CQAREPAIR_KERNELS", "").lower() != "python":
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]
        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py

min_hitting_set = _impl.min_hitting_set
all_min_hitting_sets = _impl.all_min_hitting_sets
lex_least_min_hitting_set = _impl.lex_least_min_hitting_set
minimal_hitting_sets = _impl.minimal_hitting_sets

__all__ = [
    "BACKEND", "min_hitting_set", "all_min_hitting_sets", "lex_least_min_hitting_set",
    "minimal_hitting_sets", "hitting_set_bounded",
]

"""Sum-tree backend selection: compiled extension when available.

Set LAINSIM_BACKEND=python to force the numpy fallback, or =cython to
fail loudly if the extension is missing.  Both backends produce
bit-identical trees and samples.
"""

from __future__ import annotations

import os

from .sumtree_py import SumTree as PySumTree

_REQUESTED = os.environ.get("LAINSIM_BACKEND", "auto").lower()

if _REQUESTED not in ("auto", "python", "cython"):
    raise ValueError(f"LAINSIM_BACKEND must be auto, python, or cython, not {_REQUESTED!r}")

if _REQUESTED == "python":
    SumTree = PySumTree
    BACKEND = "python"
else:
    try:
        from ._sumtree import SumTree as _CySumTree
        SumTree = _CySumTree
        BACKEND = "cython"
    except ImportError:
        if _REQUESTED == "cython":
            raise
        SumTree = PySumTree
        BACKEND = "python"

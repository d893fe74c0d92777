"""Kernel backend selection.

The compiled Cython module is used when it imports; otherwise the numpy
fallback. Setting ``FTGATES_PURE_PYTHON=1`` forces the fallback.
"""

from __future__ import annotations

import os
from types import ModuleType

from . import _kernels_py

_compiled: ModuleType | None
try:
    from . import _kernels as _compiled  # type: ignore[attr-defined]
except ImportError:  # pragma: no cover - depends on the build
    _compiled = None


def available() -> list[str]:
    names = ["numpy"]
    if _compiled is not None:
        names.insert(0, "cython")
    return names


def get(name: str | None = None) -> ModuleType:
    """Return the kernel module called ``name`` (default: best available)."""
    if name is None:
        if os.environ.get("FTGATES_PURE_PYTHON", "") not in ("", "0"):
            return _kernels_py
        return _compiled if _compiled is not None else _kernels_py
    if name == "numpy":
        return _kernels_py
    if name == "cython":
        if _compiled is None:
            raise ImportError("compiled kernels are not built; run `pip install -e .`")
        return _compiled
    raise ValueError(f"unknown kernel backend {name!r}")


default = get()

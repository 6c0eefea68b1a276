"""Kernel backend selection: compiled extension when available, else pure Python.

Set BIHARM_LAB_BACKEND=python to force the fallback (used by the benchmark
and the backend-agreement tests).
"""
from __future__ import annotations

import os

from . import _core_py

_FORCED = os.environ.get("BIHARM_LAB_BACKEND", "").strip().lower()

if _FORCED in ("", "compiled", "c"):
    try:
        from . import _core  # type: ignore[attr-defined]
        _DEFAULT = _core
        BACKEND = "compiled"
    except ImportError:
        if _FORCED:
            raise
        _DEFAULT = _core_py
        BACKEND = "python"
elif _FORCED == "python":
    _DEFAULT = _core_py
    BACKEND = "python"
else:
    raise RuntimeError(f"unknown BIHARM_LAB_BACKEND value: {_FORCED!r}")


def kernel(backend: str | None = None):
    """Return the kernel module for ``backend`` (None = selected default)."""
    if backend in (None, "", "default"):
        return _DEFAULT
    if backend == "python":
        return _core_py
    if backend in ("compiled", "c"):
        from . import _core  # raises ImportError when the extension is absent
        return _core
    raise ValueError(f"unknown backend: {backend!r}")


def radial_ivp(*args, backend: str | None = None, **kwargs):
    return kernel(backend).radial_ivp(*args, **kwargs)

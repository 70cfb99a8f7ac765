"""Kernel selection: the compiled extension when importable, else pure Python.

Set ``FASTSLE_BACKEND=python`` to force the fallback.
"""

from __future__ import annotations

import importlib
import os
from types import ModuleType

_CHOICES = ("cython", "python")


def load(name: str | None = None) -> ModuleType:
    name = name or os.environ.get("FASTSLE_BACKEND", "").strip().lower() or None
    if name not in (None, *_CHOICES):
        raise ValueError(f"unknown backend {name!r}; choose from {_CHOICES}")
    if name in (None, "cython"):
        try:
            return importlib.import_module("fastsle._kernels")
        except ImportError:
            if name == "cython":
                raise
    return importlib.import_module("fastsle._pykernels")


kernels = load()
BACKEND: str = kernels.BACKEND

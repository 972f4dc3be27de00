"""Kernel backend selection.

The compiled extension is preferred; set ``DFAPAR_BACKEND=python`` to force
the numpy fallback (or ``cython`` to fail loudly when it is missing).
"""

import importlib
import os

from . import _pykernels


def _load(name: str):
    if name == "python":
        return _pykernels
    return importlib.import_module("dfapar._ckernels")


def _select():
    wanted = os.environ.get("DFAPAR_BACKEND", "auto").lower()
    if wanted not in ("auto", "python", "cython"):
        raise ImportError(f"unknown DFAPAR_BACKEND {wanted!r}")
    if wanted != "auto":
        return _load(wanted)
    try:
        return _load("cython")
    except ImportError:
        return _pykernels


kernels = _select()


def available() -> list[str]:
    names = ["python"]
    try:
        _load("cython")
        names.insert(0, "cython")
    except ImportError:
        pass
    return names


def get(name: str):
    return _load(name)

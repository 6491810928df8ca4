"""Sweep-kernel selection: compiled extension when available, else pure Python.

The compiled kernel (bisbm._sweep) and the fallback (bisbm._sweep_py) are
bit-for-bit interchangeable; selection only affects speed. Override with the
BISBM_ENGINE environment variable ("cython" or "python") or per call via the
engine= argument accepted by the fitting functions.
"""

import os

from . import _sweep_py
from .errors import BisbmError

try:
    from . import _sweep as _sweep_c
except ImportError:
    _sweep_c = None

_ENGINES = {"python": _sweep_py}
if _sweep_c is not None:
    _ENGINES["cython"] = _sweep_c

HAVE_COMPILED = _sweep_c is not None


def default_engine_name():
    env = os.environ.get("BISBM_ENGINE", "").strip().lower()
    if env:
        if env not in _ENGINES:
            raise BisbmError(
                f"BISBM_ENGINE={env!r} unavailable; choices: {sorted(_ENGINES)}"
            )
        return env
    return "cython" if HAVE_COMPILED else "python"


def get_engine(name=None):
    if name is None:
        name = default_engine_name()
    try:
        return _ENGINES[name]
    except KeyError:
        raise BisbmError(
            f"unknown engine {name!r}; choices: {sorted(_ENGINES)}"
        ) from None

"""Hot kernels: boundary-matrix column reduction.

The compiled extension ``_reduction`` is used when it has been built;
otherwise the pure-Python module ``_fallback`` is selected at import.  Set
``TDAKIT_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _fallback

try:
    if os.environ.get("TDAKIT_PURE_PYTHON"):
        raise ImportError("pure-Python core requested")
    from . import _reduction as _compiled
except ImportError:
    _compiled = None

BACKEND = "cython" if _compiled is not None else "python"


def available_backends():
    return ["cython", "python"] if _compiled is not None else ["python"]


def kernels(backend=None):
    if backend is None:
        backend = BACKEND
    if backend == "cython":
        if _compiled is None:
            raise RuntimeError("compiled core is not built")
        return _compiled
    if backend == "python":
        return _fallback
    raise ValueError(f"unknown backend {backend!r}")

"""Backend selection for the numerical hot loops.

The compiled extension is used when it imports; setting
``DIOPHANT_PURE_PYTHON=1`` forces the NumPy fallback.
"""
import os

from . import _pykernels

BACKEND = "python"
_impl = _pykernels

if os.environ.get("DIOPHANT_PURE_PYTHON") != "1":
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]
        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels

poly_eval = _impl.poly_eval
poly_eval_grad = _impl.poly_eval_grad
log_abs_sums = _impl.log_abs_sums
min_subspace_distance = _impl.min_subspace_distance


def get_backend(name=None):
    """Return the kernel module for ``name`` ('cython', 'python' or the active one)."""
    if name is None:
        return _impl
    if name == "python":
        return _pykernels
    if name == "cython":
        from . import _ckernels
        return _ckernels
    raise ValueError(f"unknown kernel backend {name!r}")

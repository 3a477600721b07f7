"""Dispatch to the compiled series kernels when available.

Set ``THETACERT_PURE=1`` to force the pure-Python implementations.
"""
import os

from . import _kernels_py

BACKEND = "python"

if os.environ.get("THETACERT_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl

        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _kernels_py
else:
    _impl = _kernels_py

mul_trunc = _impl.mul_trunc
div_trunc = _impl.div_trunc
euler_product = _impl.euler_product

__all__ = ["BACKEND", "mul_trunc", "div_trunc", "euler_product"]

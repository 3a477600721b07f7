"""Certified theta-product identities for generating functions of square sequences."""
from .kernels import BACKEND

__version__ = "0.1.0"

__all__ = ["BACKEND", "__version__"]

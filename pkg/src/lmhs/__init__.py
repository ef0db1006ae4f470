"""Exact computations with limiting mixed Hodge structures of one-parameter and
several-parameter degenerations, over the Gaussian rationals."""

from .errors import PreconditionError
from .qlinalg import GaussianRational, Matrix, Subspace

__all__ = ["GaussianRational", "Matrix", "Subspace", "PreconditionError"]
__version__ = "0.1.0"

"""Exact calculus for q-intersection numbers of equivariant Lagrangian objects."""

from .exactalg import QLaurent, RationalMatrix, generalized_eigenspaces
from .errors import QFloerError

__all__ = ["QLaurent", "RationalMatrix", "generalized_eigenspaces", "QFloerError"]
__version__ = "0.1.0"

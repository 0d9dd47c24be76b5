"""Exact computations with star algebras, their projective-bimodule bicategories
and the classification of simple transitive birepresentations."""

from .exact_linalg import QQ, Field, Matrix, Subspace
from .quiver_algebra import FiniteDimAlgebra, build_star_quotient, build_zigzag
from .star_bicategory import get_bicategory, build_biideal_I, verify_biideal
from .classification import SetPartition, classify, enumerate_partitions

__version__ = "0.1.0"

__all__ = ["QQ", "Field", "Matrix", "Subspace", "FiniteDimAlgebra", "build_star_quotient",
           "build_zigzag", "get_bicategory", "build_biideal_I", "verify_biideal", "SetPartition",
           "classify", "enumerate_partitions"]

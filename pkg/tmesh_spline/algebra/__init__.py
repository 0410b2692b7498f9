"""Exact linear algebra and bivariate polynomial helpers."""

from .linear import (
    LinearSystem,
    echelon_rank,
    normalize_integer,
    nullspace_basis,
    nullspace_dim,
    rank,
    solve,
    vectors_rank,
)
from .polynomial import POLY_RING, X, Y

__all__ = [
    "LinearSystem",
    "echelon_rank",
    "normalize_integer",
    "nullspace_basis",
    "nullspace_dim",
    "rank",
    "solve",
    "vectors_rank",
    "POLY_RING",
    "X",
    "Y",
]

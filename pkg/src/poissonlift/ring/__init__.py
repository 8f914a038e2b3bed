"""Exact coefficient ring: sparse polynomials and rational functions over Q."""

from .kernel import BACKEND
from .poly import (
    Poly,
    RatFunc,
    divexact,
    gcd,
    grlex_key,
    partial_derivative,
    poly_arith,
    ratfunc_normalize,
)

__all__ = [
    "BACKEND",
    "Poly",
    "RatFunc",
    "divexact",
    "gcd",
    "grlex_key",
    "partial_derivative",
    "poly_arith",
    "ratfunc_normalize",
]

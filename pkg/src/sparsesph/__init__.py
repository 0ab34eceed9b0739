"""Sparse recovery of spherical harmonic expansions from random samples."""
from . import harness, l1solve, orthopoly, ripcheck, sensing, spherical
from ._errors import BudgetExceededError, DegenerateMatrixError, DomainError, ParameterError

__all__ = [
    "harness",
    "l1solve",
    "orthopoly",
    "ripcheck",
    "sensing",
    "spherical",
    "BudgetExceededError",
    "DegenerateMatrixError",
    "DomainError",
    "ParameterError",
]

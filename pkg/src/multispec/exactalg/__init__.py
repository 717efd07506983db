"""Exact polynomial arithmetic over Q with multi-modular acceleration."""

from .poly import (
    Poly,
    SquarefreeDecomposition,
    compose,
    coprime_basis,
    gcd,
    interpolate,
    iterate,
    lcm,
    radical,
    radical_divides,
    resultant,
    squarefree,
)
from .charpoly import charpoly_images, charpoly_mod, root_bound_log2, value_bound_log2

__all__ = [
    "Poly",
    "SquarefreeDecomposition",
    "compose",
    "coprime_basis",
    "gcd",
    "interpolate",
    "iterate",
    "lcm",
    "radical",
    "radical_divides",
    "resultant",
    "squarefree",
    "charpoly_images",
    "charpoly_mod",
    "root_bound_log2",
    "value_bound_log2",
]

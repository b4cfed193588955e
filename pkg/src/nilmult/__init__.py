"""Nilpotent multipliers of finite groups: Witt counts, Hall bases, abelian
multipliers, small-group analysis and bound evaluation."""

from nilmult.abelian import AbelianGroup, canonicalize, direct_sum, tensor, tensor_power
from nilmult.witt_hall import BasicCommutator, hall_basis, mobius, witt

__all__ = [
    "AbelianGroup",
    "BasicCommutator",
    "canonicalize",
    "direct_sum",
    "hall_basis",
    "mobius",
    "tensor",
    "tensor_power",
    "witt",
]

__version__ = "0.1.0"

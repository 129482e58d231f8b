"""Sharpness, unsharpness and bias measures of quantum effects.

The package computes spectral measures of effects (operators ``0 <= A <= 1``),
decides coexistence of qubit effect pairs in closed form, and checks both
against independent numerical oracles.
"""

from .effect_core import (Effect, EffectError, HermitianOperator, State, complement, dispersion,
                          luders_sequential_prob, spectral_summary, validate_effect)
from .measures import CATALOGUE, evaluate, get_measure
from .qubit import CoexistenceVerdict, QubitEffect, Status, are_coexistent, coexistence_lhs

__version__ = "0.1.0"

__all__ = [
    "CATALOGUE", "CoexistenceVerdict", "Effect", "EffectError", "HermitianOperator", "QubitEffect",
    "State", "Status", "are_coexistent", "coexistence_lhs", "complement", "dispersion", "evaluate",
    "get_measure", "luders_sequential_prob", "spectral_summary", "validate_effect",
]

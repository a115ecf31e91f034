"""Ordinals below epsilon_0, cofinal-sequence systems, the fast-growing hierarchy,
and the graph/pushdown/tree machinery that presents such orderings."""

from .ordinal import OMEGA, ONE, ZERO, Ordinal, format_ordinal, parse, standard_fundamental
from .funseq import ORDINALS, ShiftedSystem, StandardSystem, TableSystem
from .fgh import EvalBudget, EvalOutcome, fgh_eval

__all__ = [
    "OMEGA", "ONE", "ZERO", "Ordinal", "format_ordinal", "parse", "standard_fundamental",
    "ORDINALS", "ShiftedSystem", "StandardSystem", "TableSystem",
    "EvalBudget", "EvalOutcome", "fgh_eval",
]

__version__ = "0.1.0"

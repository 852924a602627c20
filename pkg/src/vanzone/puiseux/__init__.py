from .expand import (
    EXACT_ROOT,
    BranchExpansion,
    nested_expand,
    puiseux_expand,
    resubstitution_valuation,
)
from .monodromy import Permutation, InconsistentBranchSet, conjugates, monodromy_permutation
from .newton import EmptyInput, NewtonPolygonEdge, newton_polygon
from .series import PuiseuxSeries, TruncationTooShort

__all__ = [
    "EXACT_ROOT",
    "BranchExpansion",
    "EmptyInput",
    "InconsistentBranchSet",
    "NewtonPolygonEdge",
    "Permutation",
    "PuiseuxSeries",
    "TruncationTooShort",
    "conjugates",
    "monodromy_permutation",
    "nested_expand",
    "newton_polygon",
    "puiseux_expand",
    "resubstitution_valuation",
]

"""Error types shared by the pipeline stages."""

from __future__ import annotations

from .algebra.isolation import IsolationError
from .algebra.multipoly import EliminationError
from .algebra.numberfield import TowerError
from .puiseux.series import TruncationTooShort


class HypothesisViolation(ValueError):
    """The input germ is outside the class the construction applies to."""


class InternalError(RuntimeError):
    """A consistency check between independent computations failed."""


class InvalidTrunk(ValueError):
    pass


__all__ = [
    "EliminationError",
    "HypothesisViolation",
    "InternalError",
    "InvalidTrunk",
    "IsolationError",
    "TowerError",
    "TruncationTooShort",
]

"""Exact cohomology computations for W-groups given by quadratic k-invariants over F2."""

from wittlab.errors import (
    BudgetExceeded,
    FormallyRealInput,
    GroupTooSmall,
    InputTooLarge,
    MixedGroups,
    NoProductBasis,
    NotFree,
    UnknownPreset,
    WittlabError,
)

__version__ = "0.1.0"

__all__ = [
    "BudgetExceeded",
    "FormallyRealInput",
    "GroupTooSmall",
    "InputTooLarge",
    "MixedGroups",
    "NoProductBasis",
    "NotFree",
    "UnknownPreset",
    "WittlabError",
]

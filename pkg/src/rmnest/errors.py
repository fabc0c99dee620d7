"""Exception hierarchy shared across the toolkit.

Feasibility refusals are kept distinct from bad parameters because the CLI
maps them to different exit codes (2 vs 1).
"""


class ParameterError(ValueError):
    """An argument is outside the documented domain."""


class FeasibilityError(RuntimeError):
    """The request is valid but exceeds the exact-enumeration budget."""


class StructureError(ValueError):
    """A structural precondition fails (e.g. unequal look projections)."""


class SymmetryError(ParameterError):
    """A discrete channel symbol list is not closed under value negation."""


class ConstructionError(RuntimeError):
    """An internal algebraic construction failed its self-check."""

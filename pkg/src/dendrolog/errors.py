"""Exception hierarchy shared by every module."""


class DendrologError(Exception):
    """Base class."""


class DomainError(DendrologError, ValueError):
    """An element was used outside the field it belongs to."""


class CapabilityError(DendrologError):
    """The object lacks the capability (enumerator, generator, ...) an operation needs."""


class StructuralError(DendrologError, ValueError):
    """Malformed input: a bad code, a non-tree, an arity mismatch."""


class BudgetError(DendrologError):
    """Not enough data or budget to finish a construction."""


class ValidationError(DendrologError, ValueError):
    """Input rejected by a semantic check (e.g. a non-positive operator template)."""


class BranchInvalidError(DendrologError):
    """A branch carries contradictory information; signals an engine bug."""

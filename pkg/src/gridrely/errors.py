"""Exception types shared across the package."""


class GridRelyError(Exception):
    """Base class for all package-specific errors."""


class EmptyNodeSet(GridRelyError):
    """No eligible node exists for a ranking or dispatch request."""


class TooManyNodes(GridRelyError):
    """Node count exceeds the exact state-space cap."""


class SingularSystem(GridRelyError):
    """The steady-state linear system could not be solved."""


class DomainError(GridRelyError):
    """An argument lies outside its mathematical domain."""


class ParseError(GridRelyError):
    """A scenario file is structurally invalid."""


class ValidationError(GridRelyError):
    """A parsed scenario violates one or more invariants."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))

"""Exception hierarchy shared by all modules."""


class SocietyBsgError(Exception):
    """Base class for every error raised by this package."""


class SizeLimitError(SocietyBsgError):
    """An input exceeds the size this exact implementation can enumerate."""


class DimensionError(SocietyBsgError, ValueError):
    """Two objects that must agree in shape do not."""


class UnknownReferenceError(SocietyBsgError, KeyError):
    """A type id, variable or candidate does not exist."""

    def __str__(self):
        return Exception.__str__(self)


class DegenerateElectionError(SocietyBsgError):
    """The election has no voters."""


class UnsupportedRuleError(SocietyBsgError):
    """The operation is not defined for the given voting rule."""


class ConservationError(SocietyBsgError):
    """A plan or step would create or destroy voters."""


class InfeasibleActionError(SocietyBsgError):
    """A plan uses a bribery action with infinite cost."""


class PlanError(SocietyBsgError):
    """A shift matrix violates its structural invariants."""


class SpecError(SocietyBsgError):
    """A diffusion process specification cannot be applied."""


class PartialResultError(SocietyBsgError):
    """An exhaustive search hit its state budget before finishing."""

    def __init__(self, message, states_explored):
        super().__init__(message)
        self.states_explored = states_explored


class BoundednessError(SocietyBsgError):
    """A big-M construction was asked for an unbounded variable."""


class LpParseError(SocietyBsgError):
    """A solution or LP file could not be parsed."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class VerificationError(SocietyBsgError):
    """An assignment violates a model constraint."""

    def __init__(self, message, constraint=None):
        super().__init__(message)
        self.constraint = constraint


class SearchFailureError(SocietyBsgError):
    """A budget search found no successful budget below its cap."""


class OracleLimitError(SocietyBsgError):
    """The brute-force oracle hit a limit before reaching a verdict."""

    def __init__(self, message, frontier):
        super().__init__(message)
        self.frontier = frontier


class EmptyPlotError(SocietyBsgError):
    """Nothing to plot."""

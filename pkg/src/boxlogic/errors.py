"""Exception hierarchy shared across the package."""


class BoxLogicError(Exception):
    """Base class for every package-specific error."""


class ScenarioError(BoxLogicError, ValueError):
    """Invalid scenario description or out-of-range scenario coordinates."""


class CapExceeded(BoxLogicError, RuntimeError):
    """A configured resource cap was hit before the computation finished."""


class GammaCapExceeded(CapExceeded):
    """The sample space would contain more points than allowed."""


class ClosureBudgetExceeded(CapExceeded):
    """The closure grew past the configured element budget."""


class VariableCapExceeded(CapExceeded):
    """The polytope would have more variables than allowed."""


class ForeignElementError(BoxLogicError, KeyError):
    """An element index or bit vector does not belong to the logic."""


class NotAboveError(BoxLogicError, ValueError):
    """Order classification was requested for an atom not below the element."""


class StateError(BoxLogicError, ValueError):
    """A probability table or state map violates its defining constraints."""


class WellDefinednessViolation(BoxLogicError):
    """Two atomic decompositions of one element received different values."""


class TheoremViolation(BoxLogicError):
    """A structural property expected of every two-box logic failed to hold."""


class ObservableError(BoxLogicError, ValueError):
    """Invalid observable assignment."""


class OverlappingSupports(ObservableError):
    """Two values of an observable were assigned non-disjoint elements."""


class IncompleteCover(ObservableError):
    """The supports of an observable do not cover the whole sample space."""


class SubJoinNotInLogic(ObservableError):
    """A union of value supports is missing from the logic."""

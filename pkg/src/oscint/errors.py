"""Exception hierarchy shared by all oscint modules."""


class OscintError(Exception):
    """Base class for all library errors."""


class ExpressionSyntaxError(OscintError):
    """Malformed expression text; carries the offending position."""

    def __init__(self, message, position):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class GrammarError(OscintError):
    """Expression is well-formed but outside the supported fragment."""


class DomainError(OscintError):
    """Evaluation point outside the domain of the expression."""


class DomainMismatch(OscintError):
    """Binary operation on sums with incompatible domains."""


class OracleError(OscintError):
    """The numeric oracle could not certify a value."""


class Diverges(OracleError):
    """Requested integral is not absolutely convergent."""


class ToleranceError(OracleError):
    """Requested tolerance not reached within the evaluation budget."""


class NotIntegrable(OscintError):
    """Integration requested for a function that is not L^1."""


class RuleNotApplicable(OscintError):
    """A rewrite rule was invoked on a term outside its precondition."""


class InternalError(OscintError):
    """Invariant violation; indicates a bug, not a user error."""


class DivergedRewrite(OscintError):
    """prepare() failed to reach a fixed point within its step budget."""


class NotNaive(OscintError):
    """Operation requires a naive (gamma-free in y) prepared sum."""


class DependentPhases(OscintError):
    """Phase family is linearly dependent over the rationals."""


class AllPhasesZero(OscintError):
    """Operation requires at least one nonzero phase."""


class DegeneratePhase(OscintError):
    """Leading phase coefficient vanishes somewhere on the parameter grid."""

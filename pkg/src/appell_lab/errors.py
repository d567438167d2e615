"""Exception hierarchy.

Every evaluation failure raised by the library derives from
:class:`EvaluationError`; the CLI maps it to exit code 1 and prints the
``rule`` attribute as the diagnostic.
"""


class EvaluationError(ValueError):
    """Base class for refused or failed numerical evaluations."""

    rule = "evaluation"


class NonFiniteInputError(EvaluationError):
    rule = "nonfinite-input"


class DomainError(EvaluationError):
    """Input outside the domain (e.g. Im tau <= 0, x == 0)."""

    rule = "domain"


class TruncationError(EvaluationError):
    """The a-posteriori tail bound exceeds the requested tolerance."""

    rule = "truncation"


class PoleProximityError(EvaluationError):
    """y lies inside the exclusion radius of a pole q^n."""

    rule = "pole-exclusion"


class ThetaZeroError(EvaluationError):
    """The theta argument lies inside the exclusion radius of a zero q^n."""

    rule = "theta-zero-exclusion"


class ConditioningError(EvaluationError):
    """Resonant division with a right-hand side below the detection threshold."""

    rule = "conditioning"


class QuadratureError(EvaluationError):
    """Quadrature refinements failed to agree or the tail bound is too large."""

    rule = "quadrature"


class RangeError(EvaluationError):
    """Coefficient range too small to close a recurrence."""

    rule = "range"


class InconsistentIncrementError(EvaluationError):
    """Quasi-period increments disagree across base points."""

    rule = "increment-consistency"

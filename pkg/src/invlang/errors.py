"""Exception taxonomy shared across the package.

Everything numerical derives from NumericalError so callers (and the CLI)
can distinguish "the computation failed" from "you called it wrong".
Domain violations on user-facing evaluation routines raise DomainError,
which is also a ValueError.
"""


class NumericalError(Exception):
    """Base class for failures of a numerical procedure."""


class DomainError(NumericalError, ValueError):
    """Argument outside the mathematical domain of the routine."""


# --- series construction ---

class ZeroLinearCoefficient(NumericalError):
    """Series reversion requires a nonzero coefficient of the linear term."""


class InsufficientOrder(NumericalError):
    """The input series is too short for the requested operation."""


class NoCycleFound(NumericalError):
    """No repeating sign pattern could be established from the tail."""


# --- singularity estimation ---

class NoConvergence(NumericalError):
    """An iteration failed to converge within its iteration budget."""


class SingularJacobian(NumericalError):
    """Newton system was singular at the current iterate."""


class NegativeRatio(NumericalError):
    """Ratio under an even root was negative; estimate undefined here."""


class ZeroCoefficient(NumericalError):
    """A coefficient that is divided by vanished."""


class TooFewPoints(NumericalError):
    """Not enough usable points for a least-squares fit."""


# --- complex-plane evaluation ---

class NearPole(NumericalError):
    """Evaluation point too close to a pole for reliable results."""


class QuadrantEscape(NumericalError):
    """Root iteration left the first quadrant and could not be pulled back."""


class AtSingularity(NumericalError):
    """A transform was requested exactly at one of its singular points."""

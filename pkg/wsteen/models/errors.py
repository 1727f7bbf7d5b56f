"""Exception hierarchy for the verification engine."""

from typing import Any, Optional


class WsteenError(Exception):
    """Base class for every error raised by the engine."""

    #: exit code used by the command line when this error escapes a command
    exit_code = 2


class PresetMismatch(WsteenError):
    """Two operands were built over different field presets."""

    def __init__(self, left: str, right: str):
        super().__init__(f"operands live over different presets: {left!r} vs {right!r}")
        self.left = left
        self.right = right


class PresetError(WsteenError):
    """A preset file is malformed or a preset lacks required data (e.g. a Witt model)."""


class InvalidArgument(WsteenError):
    """An operation received an argument outside its domain."""


class MalformedIndexSet(InvalidArgument):
    """Index sets only contain integers >= 2; disjoint unions must not overlap."""


class GeneratorCapExceeded(WsteenError):
    """A computation needed a generator above the configured index cap."""

    def __init__(self, index: int, cap: int, what: str = "generator"):
        super().__init__(f"{what} index {index} exceeds the generator cap {cap}")
        self.index = index
        self.cap = cap


class ExpressionSyntaxError(WsteenError):
    """Parse failure in the element grammar."""

    def __init__(self, message: str, token: str, position: int):
        super().__init__(f"{message}: {token!r} at position {position}")
        self.token = token
        self.position = position


class NotInSubalgebra(WsteenError):
    """The element has a component outside the requested subalgebra."""

    def __init__(self, bidegree: Any, component: Any):
        super().__init__(f"component {component} in bidegree {bidegree} is not in the subalgebra")
        self.bidegree = bidegree
        self.component = component


class NotInImage(WsteenError):
    """A torsion class has no preimage under d_left."""


class IncompatiblePair(WsteenError):
    """The two halves of a pullback pair disagree in k^M H_W."""

    exit_code = 1

    def __init__(self, left_residue: Any, right_residue: Any):
        super().__init__(
            f"pair is not compatible: pi(a) = {left_residue}, r(b) = {right_residue}"
        )
        self.left_residue = left_residue
        self.right_residue = right_residue


class PredictorRefused(WsteenError):
    """The closed-form predictor only applies when rho^3 = 0."""


class UniqueLiftRefused(WsteenError):
    """The Witt model needs k^M_2 = 0 so that rho*t_j lifts uniquely."""


class LiftDependence(WsteenError):
    """A quotient map gave different answers on two lifts of the same class."""

    exit_code = 1

    def __init__(self, map_id: str, detail: Optional[str] = None):
        message = f"{map_id} depends on the chosen lift"
        if detail:
            message = f"{message}: {detail}"
        super().__init__(message)
        self.map_id = map_id


class UnknownBidegree(WsteenError):
    """A matrix was requested outside the registered sweep window."""

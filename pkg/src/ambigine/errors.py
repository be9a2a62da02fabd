"""Exception hierarchy shared by every module."""


class AmbigineError(ValueError):
    """Base class for validation and domain errors."""


class ShapeMismatch(AmbigineError):
    pass


class UnknownLabel(AmbigineError):
    pass


class NotSimple(AmbigineError):
    """Extreme points disagree on the marginal over states."""


class NullSignal(AmbigineError):
    """The observed signal has zero probability under every prior."""


class InvalidMobius(AmbigineError):
    pass


class MalformedPair(AmbigineError):
    """The two extended acts do not differ at exactly one cell."""


class ColumnsDiffer(AmbigineError):
    """Two prior sets do not agree on the observed signal's column."""


class PreconditionFailed(AmbigineError):
    pass


class NotRationalizable(AmbigineError):
    pass


class AssumptionFailed(AmbigineError):
    """Some attainable action has no interior belief supporting it."""

    def __init__(self, message, actions=()):
        super().__init__(message)
        self.actions = tuple(actions)


class DegenerateTargets(AmbigineError):
    pass


class NotImplementable(AmbigineError):
    def __init__(self, message, condition=None, location=None):
        super().__init__(message)
        self.condition = condition
        self.location = location

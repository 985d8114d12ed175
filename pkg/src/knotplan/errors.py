"""Exception hierarchy shared across the library."""


class KnotPlanError(Exception):
    """Base class for all library errors."""


class TopologyError(KnotPlanError):
    """Malformed crossing sequence (odd length, unpaired ids, mismatched signs...)."""


class ActionError(KnotPlanError):
    """A topological action is not applicable to the given state."""


class DegeneracyError(KnotPlanError):
    """A rope configuration cannot be read as a clean diagram.

    ``reason`` is a short category tag: "angle", "height", "tip", or "tangency".
    """

    def __init__(self, message: str, reason: str = ""):
        super().__init__(message)
        self.reason = reason or message.split(":", 1)[0]


class DynamicsError(KnotPlanError):
    """Simulation blow-up (NaN positions or runaway energy)."""


class SettleTimeoutError(KnotPlanError):
    """The rope did not come to rest within the step budget."""

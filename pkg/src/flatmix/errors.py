"""Exception types shared across the package.

Every error carries a short machine-readable ``code`` so the CLI can map
failures onto exit codes and JSON error payloads without string matching.
"""


class FlatmixError(Exception):
    """Base class; ``code`` is a stable identifier like ``NOT_CLOSED``."""

    code = "ERROR"

    def __init__(self, message="", **details):
        super().__init__(message or self.code)
        self.details = details


class FieldTooLargeError(FlatmixError):
    code = "FIELD_TOO_LARGE"


class PolygonError(FlatmixError):
    """Invalid polygon data; ``code`` set per instance."""

    def __init__(self, code, message="", **details):
        self.code = code
        super().__init__(message or code, **details)


class SurfaceError(FlatmixError):
    code = "BAD_SURFACE"


class DisconnectedError(FlatmixError):
    code = "DISCONNECTED"


class NotAnUnfoldingError(FlatmixError):
    code = "NOT_AN_UNFOLDING"


class NotK2Error(FlatmixError):
    code = "NOT_K2"


class NotAWitnessError(FlatmixError):
    code = "NOT_A_WITNESS"


class SaddleConnectionError(FlatmixError):
    """An orbit or an induction step ran into a singularity."""

    code = "SADDLE_CONNECTION_HIT"


class TieError(FlatmixError):
    code = "TIE"


class DegenerateError(FlatmixError):
    code = "DEGENERATE"


class NotPeriodicError(FlatmixError):
    """Inconclusive: a separatrix failed to close within the budget."""

    code = "NOT_PERIODIC"


class PrecisionError(FlatmixError):
    """Floating mode could not certify a predicate; retry exact."""

    code = "PRECISION"


class InputError(FlatmixError):
    code = "BAD_INPUT"

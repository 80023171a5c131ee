"""Exception hierarchy shared across the toolkit.

Every domain failure raises a subclass of :class:`VitalkitError` with a short,
stable message (the CLI and HTTP layers match on these).
"""


class VitalkitError(Exception):
    """Base class for all domain errors raised by this package."""


class FrameError(VitalkitError):
    """Bad frame data: malformed files, broken sequences, invalid payloads."""


class SignalError(VitalkitError):
    """Signal processing failure: empty bands, missing signal, bad windows."""


class EstimationError(VitalkitError):
    """A vitals estimator could not produce a value for the given input."""


class SynthError(VitalkitError):
    """Synthetic sequence parameters that cannot be realized."""


class TriageError(VitalkitError):
    """Invalid patient record, weight table, or store operation."""


class DialogError(VitalkitError):
    """Invalid dialog graph or illegal session transition."""

"""Exception types shared across the package."""


class PhotonCapExceeded(Exception):
    """Raised when a state would carry more photons than the configured cap."""


class DegenerateSystemError(Exception):
    """A construction that needs a nonzero norm or denominator hit zero."""


class ConditionsUnsatisfiableError(Exception):
    """The sign-shift projection conditions cannot be solved as posed."""


class SingularNetworkError(Exception):
    """The network probability denominator vanishes."""


class BoundViolationError(Exception):
    """A sweep produced a probability above the conjectured 1/4 bound.

    This is reserved for results that would contradict the bound the
    sweeps are probing; it maps to exit code 2 in the CLI so that CI can
    tell it apart from ordinary bugs.
    """

import numpy as np


class RadialError(Exception):
    """Base class for every error raised by the radial operator library."""


class InvalidArgumentError(RadialError, ValueError):
    pass


class IncompatibleOperandsError(RadialError, ValueError):
    pass


class UnsupportedDecayError(RadialError):
    """Raised when an integral needs a decaying input and gets a non-decaying one."""


class SingularPointError(RadialError, ValueError):
    pass


class UnsupportedRealizationError(RadialError):
    pass


class NotSymmetricError(RadialError, np.linalg.LinAlgError):
    pass


class MalformedInputError(RadialError):
    pass

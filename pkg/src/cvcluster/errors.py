"""Exception types shared across the package.

Everything raised on purpose derives from :class:`CvClusterError` so callers
can catch one base class.  Argument errors that a stock Python library would
signal with ``ValueError`` subclass both.
"""


class CvClusterError(Exception):
    """Base class for all errors raised by cvcluster."""


class InvalidSizeError(CvClusterError, ValueError):
    """A register, state or graph was requested with a non-positive size."""


class ConsumedModeError(CvClusterError):
    """A gate, measurement or read touched a mode that was already measured."""


class SelfInteractionError(CvClusterError, ValueError):
    """A two-mode operation was given the same mode twice."""


class DomainError(CvClusterError, ValueError):
    """A numeric parameter fell outside its allowed range (e.g. transmittance)."""


class RecordOwnershipError(CvClusterError):
    """A measurement record from one register was used with another register."""


class InternalConsistencyError(CvClusterError):
    """The engine detected a broken invariant (e.g. unbalanced commutator terms)."""


class SingularMeasurementError(CvClusterError):
    """A homodyne was attempted on a quadrature with (numerically) zero variance."""


class InvalidGraphError(CvClusterError, ValueError):
    """An edge list contained loops, duplicates or out-of-range vertices."""


class ProtocolPreconditionError(CvClusterError):
    """A protocol was handed a register/graph pair it does not apply to."""


class UnsupportedOperationError(CvClusterError):
    """An operation outside the engine's tracked algebra was requested."""

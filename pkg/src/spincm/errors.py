"""Exception types shared across the package."""


class SpinCMError(Exception):
    """Base class for all package errors."""


class DimensionMismatchError(SpinCMError, ValueError):
    pass


class SubspaceTagError(SpinCMError, ValueError):
    pass


class PoleProximityError(SpinCMError, ValueError):
    """Evaluation too close to a pole of a spectral kernel."""


class CollisionError(SpinCMError, RuntimeError):
    """Two particle coordinates got too close for the interaction kernel.

    Carries the time at which the integrator gave up and the offending gap.
    """

    def __init__(self, message, time=None, gap=None):
        super().__init__(message)
        self.time = time
        self.gap = gap


class StepUnderflowError(SpinCMError, RuntimeError):
    """Adaptive integrator drove the step size below its floor."""


class GaugeFixError(SpinCMError, ValueError):
    """Gauge fixing impossible (a superdiagonal spin entry vanishes)."""


class EigenvalueCollisionError(SpinCMError, RuntimeError):
    """Spectral gap too small for a well-defined smooth eigenframe."""


class SpectrumConeError(SpinCMError, ValueError):
    """Matrix spectrum left the cone required by the soliton construction."""


class TauZeroError(SpinCMError, RuntimeError):
    """A tau function vanished (singular locus of the field configuration)."""

    def __init__(self, message, where=None):
        super().__init__(message)
        self.where = where


class FlowValidationError(SpinCMError, RuntimeError):
    """A conjectured closed-form vector field failed its per-call check."""


class ConfigError(SpinCMError, ValueError):
    """Invalid run configuration (CLI exit code 2)."""

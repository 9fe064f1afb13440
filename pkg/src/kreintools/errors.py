class KreinError(ValueError):
    """Base class for every error raised by kreintools."""


class DimensionError(KreinError):
    pass


class StructureError(KreinError):
    """An input fails a structural requirement (involution, Hermitian, J-self-adjoint, ...)."""


class SpectralSeparationError(KreinError):
    """Eigenvalue clusters cannot be separated by contours."""


class QuadratureError(KreinError):
    pass


class BoundaryCollisionError(KreinError):
    """An eigenvalue sits on (or within tolerance of) the boundary of a set."""


class SampleRangeError(KreinError):
    """The resolvent sampling window collapsed."""


class PreconditionError(KreinError):
    """A theorem's hypotheses are not met; ``blocking`` names the failed conditions."""

    def __init__(self, message: str, blocking: list[str] | None = None):
        super().__init__(message)
        self.blocking = list(blocking or [])

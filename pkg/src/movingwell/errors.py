"""Exception hierarchy and warning categories shared across the package."""


class MovingWellError(Exception):
    """Base class for all package-specific errors."""


class WallCollision(MovingWellError):
    """The well width w(t) = w2(t) - w1(t) is not positive at the queried time."""


class OutOfDomain(MovingWellError):
    """A coordinate or time lies outside the valid domain of an operation."""


class GridMismatch(MovingWellError):
    """Two fields that must share a grid do not."""


class FrameMismatch(MovingWellError):
    """A field is in the wrong frame (lab vs comoving) for a transformation."""


class ParallelWalls(MovingWellError):
    """The walls are parallel (dv = 0), so the intersection point is at infinity."""


class OutOfRange(MovingWellError):
    """A rescaled time tau exceeds the supremum attainable on the trajectory."""


class UnreachableTau(OutOfRange):
    """A requested revival fraction tau' = p/q is never reached by the well."""


class DegeneratePacket(MovingWellError):
    """A Gaussian packet loses too much norm when clipped at the walls."""


class Singularity(MovingWellError):
    """A coordinate map is evaluated at its singular time."""


class ConfigError(MovingWellError):
    """A run configuration file or override is malformed."""


class SlowAccelWarning(UserWarning):
    """The slow-acceleration criterion is violated; approximations degrade."""

"""Exception types raised by the library."""


class AdsStarError(Exception):
    """Base class for all library errors."""


class DomainError(AdsStarError, ValueError):
    """Argument outside the domain where the function is defined."""


class PoleError(DomainError):
    """Evaluation at a pole (gamma function, Moebius denominator)."""


class UnsupportedOrderError(AdsStarError, ValueError):
    """Bessel order not supported by the requested routine."""


class SingularOrderError(AdsStarError, ValueError):
    """Order at which a normalizing prefactor is singular."""


class ConvergenceError(AdsStarError, RuntimeError):
    """Quadrature or extrapolation failed to converge."""


class ChartMismatchError(AdsStarError, ValueError):
    """Grid functions carry incompatible chart tags."""


class GridMismatchError(AdsStarError, ValueError):
    """Grid functions are sampled on incompatible grids."""


class AliasingError(AdsStarError, ValueError):
    """Input does not decay at the grid boundary, so Fourier sums alias."""


class ShiftOutOfGridError(AdsStarError, ValueError):
    """A translation moves the sampled support outside the grid."""


class InvalidConfigError(AdsStarError, ValueError):
    """Invalid command line or suite configuration."""

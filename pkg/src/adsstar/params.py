"""Deformation parameters shared by all modules."""
import math
from dataclasses import dataclass

from .errors import InvalidConfigError


@dataclass(frozen=True)
class DeformParams:
    """Deformation parameter theta (nonzero) and orbit level kappa (positive)."""

    theta: float = 1.0
    kappa: float = 1.0

    def __post_init__(self):
        if not math.isfinite(self.theta) or self.theta == 0:
            raise InvalidConfigError("theta must be a nonzero real number")
        if not math.isfinite(self.kappa) or self.kappa <= 0:
            raise InvalidConfigError("kappa must be positive")

    @property
    def nu(self):
        """Bessel order parameter sqrt(kappa)/theta."""
        return math.sqrt(self.kappa) / self.theta

    @property
    def mu(self):
        """Principal-series parameter -sqrt(kappa)/theta."""
        return -math.sqrt(self.kappa) / self.theta

    def frequency(self, chart):
        """Fourier frequency scale of the hat transform in a chart."""
        if chart in ("phi", "hat-phi"):
            return self.kappa / self.theta
        if chart in ("psi", "hat-psi"):
            return math.sqrt(self.kappa) / self.theta
        raise InvalidConfigError(f"no hat frequency for chart {chart!r}")

    def hat_prefactor(self, chart):
        """Prefactor of the kernel composition in the hat picture."""
        if chart in ("phi", "hat-phi"):
            return self.kappa / (2 * math.pi * abs(self.theta))
        return math.sqrt(self.kappa) / (2 * math.pi * abs(self.theta))

    def symplectic_density(self, chart):
        """Liouville density: kappa for (a, l), sqrt(kappa) for (x, y)."""
        if chart in ("phi", "hat-phi"):
            return self.kappa
        return math.sqrt(self.kappa)

"""Uniform 1D grids shared by every solver."""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import ConfigurationError


@dataclass(frozen=True)
class Grid1D:
    """Uniform grid on [z_min, z_max).

    With ``periodic=True`` (the default) the right end is excluded and
    ``dz = (z_max - z_min) / n``; otherwise both ends are sampled and
    ``dz = (z_max - z_min) / (n - 1)``.
    """

    z_min: float
    z_max: float
    n: int
    periodic: bool = True

    def __post_init__(self):
        if not self.z_max > self.z_min:
            raise ConfigurationError("grid requires z_max > z_min")
        if self.n < 2:
            raise ConfigurationError("grid requires at least two points")

    @property
    def length(self):
        return self.z_max - self.z_min

    @property
    def dz(self):
        if self.periodic:
            return self.length / self.n
        return self.length / (self.n - 1)

    @cached_property
    def z(self):
        return self.z_min + self.dz * np.arange(self.n)

    @cached_property
    def k(self):
        """Angular wavenumbers in FFT order."""
        return 2.0 * np.pi * np.fft.fftfreq(self.n, d=self.dz)

    def require_power_of_two(self, minimum=16):
        if self.n < minimum or self.n & (self.n - 1):
            raise ConfigurationError(
                f"grid size must be a power of two >= {minimum}, got {self.n}"
            )
        return self

    def integrate(self, values):
        """Quadrature over the grid.

        Periodic grids use the rectangle rule, which is the trapezoidal rule
        for a periodic integrand; open grids use the trapezoidal rule.
        """
        values = np.asarray(values)
        if self.periodic:
            return np.sum(values, axis=-1) * self.dz
        return np.trapezoid(values, dx=self.dz, axis=-1)

"""Periodic 1-D grid and the FFT conventions used by the solver.

Forward transform is the unnormalized DFT, inverse carries the 1/n factor
(numpy's default).  With this choice Parseval reads

    sum |f_j|^2 dx == (1/length) * sum |F_m|^2 dx^2
"""
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, DimensionError

DEFAULT_N = 4096
DEFAULT_X_MIN = -50.0
DEFAULT_LENGTH = 100.0


def _is_power_of_two(n):
    return n >= 2 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class Grid:
    n_points: int
    x_min: float
    length: float
    x: np.ndarray = field(init=False, repr=False, compare=False)
    k: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not isinstance(self.n_points, (int, np.integer)) or not _is_power_of_two(int(self.n_points)):
            raise ConfigurationError(f"n_points must be a power of two >= 2, got {self.n_points!r}")
        if not np.isfinite(self.length) or self.length <= 0:
            raise ConfigurationError(f"length must be positive, got {self.length!r}")
        if not np.isfinite(self.x_min):
            raise ConfigurationError(f"x_min must be finite, got {self.x_min!r}")
        n = int(self.n_points)
        x = self.x_min + np.arange(n) * self.dx
        # fftfreq gives m/n with standard ordering; scale to angular wavenumbers
        k = 2.0 * np.pi * np.fft.fftfreq(n, d=self.dx)
        x.flags.writeable = False
        k.flags.writeable = False
        object.__setattr__(self, "n_points", n)
        object.__setattr__(self, "x_min", float(self.x_min))
        object.__setattr__(self, "length", float(self.length))
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "k", k)

    @property
    def dx(self):
        return self.length / self.n_points

    @property
    def dk(self):
        return 2.0 * np.pi / self.length

    def check(self, values):
        values = np.asarray(values)
        if values.shape != (self.n_points,):
            raise DimensionError(f"expected array of shape ({self.n_points},), got {values.shape}")
        return values

    def forward(self, values):
        return np.fft.fft(self.check(values))

    def inverse(self, spectrum):
        return np.fft.ifft(self.check(spectrum))

    def second_derivative(self, values):
        """Spectral d^2/dx^2 of periodic samples."""
        return self.inverse(-(self.k**2) * self.forward(values))

    def shift(self, values, distance):
        """Periodic translation f(x) -> f(x - distance), exact for band-limited data."""
        return self.inverse(np.exp(-1j * self.k * distance) * self.forward(values))

    def snap_wavenumber(self, k):
        """Nearest integer multiple of 2*pi/length."""
        return round(k / self.dk) * self.dk

    def l2_norm_squared(self, values):
        return float(np.sum(np.abs(values) ** 2) * self.dx)


def make_grid(n_points=DEFAULT_N, x_min=DEFAULT_X_MIN, length=DEFAULT_LENGTH):
    return Grid(n_points, x_min, length)


def forward_transform(grid, values):
    return grid.forward(values)


def inverse_transform(grid, spectrum):
    return grid.inverse(spectrum)

"""Analytic wavefunctions of the dimensionless cubic NLSE

    i psi_t + 1/2 psi_xx + |psi|^2 psi = 0

and the two symmetries used with them: the amplitude scaling law and the
gauge map from a linearly tilted potential to the free equation.

Profiles are plain callables ``f(x, t) -> complex array``; the grid-level
constructors sample them into a :class:`WaveField`.
"""
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, DimensionError
from .grid import Grid


@dataclass
class WaveField:
    grid: Grid
    values: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        self.values = np.asarray(self.grid.check(self.values), dtype=np.complex128)
        if not np.all(np.isfinite(self.values)):
            raise ValueError("wavefield contains non-finite samples")

    @property
    def modulus(self):
        return np.abs(self.values)

    def norm(self):
        """Discrete L2 norm squared, sum |psi|^2 dx."""
        return self.grid.l2_norm_squared(self.values)


def sample(grid, profile, t=0.0):
    return WaveField(grid, profile(grid.x, t), t)


# --- profiles -------------------------------------------------------------

def sech_profile(amplitude=0.5):
    a = float(amplitude)
    if a <= 0:
        raise ConfigurationError("soliton amplitude must be positive")

    def profile(x, t):
        phase = 2.0 * x + 2.0 * (1.0 - a * a) * t + np.pi / 2
        return 2.0 * a * np.exp(-1j * phase) / np.cosh(2.0 * a * x + 4.0 * a * t)

    return profile


def plane_wave_profile(k):
    """Unit-modulus plane wave; its frequency k^2/2 - 1 follows from the equation."""
    omega = 0.5 * k * k - 1.0

    def profile(x, t):
        return np.exp(1j * (k * np.asarray(x, dtype=float) - omega * t))

    return profile


def peregrine_profile(x, t):
    x = np.asarray(x, dtype=float)
    return (1.0 - 4.0 * (1.0 + 2j * t) / (1.0 + 4.0 * x**2 + 4.0 * t**2)) * np.exp(1j * t)


def rational2_terms(x, t):
    """Numerator pieces G2, H2 and denominator D2 of the second-order solution."""
    x = np.asarray(x, dtype=float)
    x2, t2 = x * x, t * t
    g = 3.0 / 8 - 3 * x2 - 2 * x2**2 - 9 * t2 - 10 * t2**2 - 12 * x2 * t2
    h = 15.0 / 4 + 6 * x2 - 4 * x2**2 - 2 * t2 - 4 * t2**2 - 8 * x2 * t2
    d = (
        3.0 / 4 + 9 * x2 + 4 * x2**2 + 16.0 / 3 * x2**3
        + 33 * t2 + 36 * t2**2 + 16.0 / 3 * t2**3
        - 24 * x2 * t2 + 16 * x2**2 * t2 + 16 * x2 * t2**2
    ) / 8
    return g, h, d


def rational2_profile(x, t):
    g, h, d = rational2_terms(x, t)
    return (1.0 + (g + 1j * t * h) / d) * np.exp(1j * t)


def scale_solution(profile, b):
    """Scaling law psi(x, t) -> b * psi(b x, b^2 t); peak moduli scale by b."""
    if not b > 0:
        raise ConfigurationError(f"scale factor must be positive, got {b!r}")

    def scaled(x, t):
        return b * profile(b * np.asarray(x, dtype=float), b * b * t)

    return scaled


def tilted_transform(profile, slope_a, beta=0.5):
    """Map a free-NLSE solution to one of the NLSE with potential ``slope_a * x``.

    psi(x, t) = f(x - beta a t^2, t) * exp(i a x t - i beta a^2 t^3 / 3)
    """
    a = float(slope_a)

    def tilted(x, t):
        x = np.asarray(x, dtype=float)
        gauge = np.exp(1j * (a * x * t - beta * a * a * t**3 / 3.0))
        return profile(x - beta * a * t * t, t) * gauge

    return tilted


def tilted_field(free, slope_a, beta=0.5):
    """Grid version of :func:`tilted_transform` for sampled free-NLSE fields.

    The translation by beta a t^2 is applied spectrally (periodic).
    """
    grid, t, a = free.grid, free.time, float(slope_a)
    shifted = grid.shift(free.values, beta * a * t * t)
    gauge = np.exp(1j * (a * grid.x * t - beta * a * a * t**3 / 3.0))
    return WaveField(grid, shifted * gauge, t)


# --- grid-level constructors ---------------------------------------------

def sech_soliton(grid, t=0.0, amplitude=0.5):
    return sample(grid, sech_profile(amplitude), t)


def plane_wave(grid, k=1.0):
    """Unit plane wave with ``k`` snapped to the nearest grid wavenumber."""
    return sample(grid, plane_wave_profile(grid.snap_wavenumber(k)), 0.0)


def peregrine(grid, t=0.0):
    return sample(grid, peregrine_profile, t)


def rational_order2(grid, t=0.0):
    return sample(grid, rational2_profile, t)


def pde_residual(fields, dt, m_of_x=None, beta=0.5, zeta=1.0, window=None):
    """Max-norm residual of i psi_t + beta psi_xx + zeta |psi|^2 psi + M psi.

    ``fields`` holds snapshots at t-dt, t, t+dt; psi_t is the central
    difference and psi_xx is spectral.  ``window=(lo, hi)`` restricts the
    maximum to lo <= x <= hi, which keeps the derivative kink at the
    periodic seam of non-decaying fields out of the measurement.
    """
    before, mid, after = fields
    grid = mid.grid
    if before.grid != grid or after.grid != grid:
        raise DimensionError("residual snapshots live on different grids")
    psi = mid.values
    m = np.zeros(grid.n_points) if m_of_x is None else grid.check(m_of_x)
    r = (
        1j * (after.values - before.values) / (2.0 * dt)
        + beta * grid.second_derivative(psi)
        + zeta * np.abs(psi) ** 2 * psi
        + m * psi
    )
    r = np.abs(r)
    if window is not None:
        lo, hi = window
        r = r[(grid.x >= lo) & (grid.x <= hi)]
    return float(np.max(r))


def residual_of_profile(grid, profile, t, dt=1e-4, m_of_x=None, beta=0.5, zeta=1.0, window=None):
    triple = [sample(grid, profile, s) for s in (t - dt, t, t + dt)]
    return pde_residual(triple, dt, m_of_x, beta, zeta, window)

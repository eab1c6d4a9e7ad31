"""Piecewise potentials M(x, t) = V - E with per-step white noise.

The three barrier families are built from the Heaviside formulas taken
literally, with H(0) = 1, so each nonzero piece lives on a half-open
interval [left, right).  Note the literal formulas give *negative* M inside
the single and triangular barriers; ``negate_base`` flips the sign.

Noise is r(x, t) ~ U[-1, 1] i.i.d., redrawn every time step from a Philox
counter-based stream keyed by (seed, step_index), so any step's realization
can be regenerated without replaying the ones before it.
"""
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError

KINDS = ("single_rectangular", "double_rectangular", "triangular", "custom_piecewise")
_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class Segment:
    left: float
    right: float
    c0: float
    c1: float = 0.0

    def __post_init__(self):
        if not all(np.isfinite([self.left, self.right, self.c0, self.c1])):
            raise ConfigurationError("segment values must be finite")
        if not self.left < self.right:
            raise ConfigurationError(f"segment needs left < right, got [{self.left}, {self.right})")

    def evaluate(self, x):
        inside = (x >= self.left) & (x < self.right)
        return np.where(inside, self.c0 + self.c1 * x, 0.0)


@dataclass(frozen=True)
class PotentialSpec:
    kind: str = "custom_piecewise"
    segments: tuple = ()
    noise_amplitude_alpha: float = 0.0
    rng_seed: int = 0
    negate_base: bool = False

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigurationError(f"unknown potential kind {self.kind!r}")
        if not self.noise_amplitude_alpha >= 0:
            raise ConfigurationError("noise_amplitude_alpha must be >= 0")
        if not 0 <= int(self.rng_seed) <= _MASK64:
            raise ConfigurationError("rng_seed must fit in 64 unsigned bits")
        segs = tuple(s if isinstance(s, Segment) else Segment(*s) for s in self.segments)
        ordered = sorted(segs, key=lambda s: s.left)
        for a, b in zip(ordered, ordered[1:]):
            if b.left < a.right:
                raise ConfigurationError(f"segments [{a.left}, {a.right}) and [{b.left}, {b.right}) overlap")
        object.__setattr__(self, "segments", segs)
        object.__setattr__(self, "rng_seed", int(self.rng_seed))

    def base(self, x):
        x = np.asarray(x, dtype=float)
        m = np.zeros_like(x)
        for seg in self.segments:
            m += seg.evaluate(x)
        return -m if self.negate_base else m

    def with_seed(self, seed):
        return PotentialSpec(self.kind, self.segments, self.noise_amplitude_alpha, seed, self.negate_base)


def single_rectangular_spec(alpha=1.0, seed=0, negate_base=False):
    # 4 [H(x-2) - H(x+2)]
    return PotentialSpec("single_rectangular", (Segment(-2.0, 2.0, -4.0),), alpha, seed, negate_base)


def double_rectangular_spec(alpha=1.0, seed=0, negate_base=False):
    # 3 [H(x-8) - H(x-6)] + 4 [H(x+8) - H(x+6)]
    segs = (Segment(-8.0, -6.0, 4.0), Segment(6.0, 8.0, -3.0))
    return PotentialSpec("double_rectangular", segs, alpha, seed, negate_base)


def triangular_spec(alpha=1.0, seed=0, negate_base=False):
    # (x/2 + 2.5) [H(x-5) - H(x+5)]
    return PotentialSpec("triangular", (Segment(-5.0, 5.0, -2.5, -0.5),), alpha, seed, negate_base)


def linear_spec(grid, slope):
    """M = slope * x over the whole grid, noise free."""
    seg = Segment(grid.x_min, grid.x_min + grid.length, 0.0, slope)
    return PotentialSpec("custom_piecewise", (seg,), 0.0, 0)


def noise_realization(seed, step_index, n):
    """U[-1, 1] samples for one (seed, step) pair; pure function of its arguments."""
    bitgen = np.random.Philox(key=np.array([seed & _MASK64, step_index & _MASK64], dtype=np.uint64))
    return np.random.Generator(bitgen).uniform(-1.0, 1.0, n)


@dataclass
class SampledPotential:
    grid: object
    spec: PotentialSpec
    base_values: np.ndarray = field(init=False)
    current_values: np.ndarray = field(init=False)
    step_index: int = field(init=False, default=-1)

    def __post_init__(self):
        self.base_values = self.spec.base(self.grid.x)
        self.current_values = self.base_values.copy()

    @property
    def alpha(self):
        return self.spec.noise_amplitude_alpha

    def refresh_noise(self, step_index):
        """Overwrite ``current_values`` with base + alpha * r(seed, step_index)."""
        self.step_index = step_index
        if self.alpha == 0:
            self.current_values[:] = self.base_values
        else:
            r = noise_realization(self.spec.rng_seed, step_index, self.grid.n_points)
            np.multiply(r, self.alpha, out=self.current_values)
            self.current_values += self.base_values
        return self


def build(grid, spec):
    return SampledPotential(grid, spec)


def build_single_rectangular(grid, alpha=1.0, seed=0):
    return SampledPotential(grid, single_rectangular_spec(alpha, seed))


def build_double_rectangular(grid, alpha=1.0, seed=0):
    return SampledPotential(grid, double_rectangular_spec(alpha, seed))


def build_triangular(grid, alpha=1.0, seed=0):
    return SampledPotential(grid, triangular_spec(alpha, seed))


def refresh_noise(pot, step_index):
    return pot.refresh_noise(step_index)


def base_csv_rows(pot):
    return [(float(x), float(m)) for x, m in zip(pot.grid.x, pot.base_values)]

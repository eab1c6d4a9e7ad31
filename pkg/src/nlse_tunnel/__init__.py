"""Split-step Fourier simulation of the NLSE with noisy tunneling potentials,
with analytic rogue-wave solutions and peak statistics."""

__version__ = "0.1.0"

from .grid import Grid, make_grid
from .fields import WaveField
from .potentials import PotentialSpec, SampledPotential
from .solver import SimulationConfig, Trajectory, run

__all__ = ["Grid", "make_grid", "WaveField", "PotentialSpec", "SampledPotential",
           "SimulationConfig", "Trajectory", "run", "__version__"]

"""Peak extraction, rogue classification and rational-profile matching.

Significant amplitude follows the H_1/3 convention applied to crests of
|psi|: the mean of the highest ceil(n/3) local maxima.
"""
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, DegenerateFieldError, DimensionError
from .fields import rational2_profile, scale_solution

RATIONAL2_PEAK = 5.0
THRESHOLD_RANGE = (1.5, 3.0)


@dataclass(frozen=True)
class PeakRecord:
    position_x: float
    amplitude: float
    snapshot_time: float
    index: int


@dataclass(frozen=True)
class MatchScore:
    peak: PeakRecord
    b_factor: float
    l2_window_error: float


@dataclass
class RogueReport:
    significant_amplitude: float
    threshold_factor: float
    peaks: list
    rogue_peaks: list
    match_scores: list = field(default_factory=list)

    def is_rogue(self, peak):
        return peak.amplitude >= self.threshold_factor * self.significant_amplitude


def local_maxima(modulus):
    """Indices of strict local maxima, neighbours taken periodically."""
    return np.flatnonzero((modulus > np.roll(modulus, 1)) & (modulus > np.roll(modulus, -1)))


def find_peaks(field_, min_separation=1.0):
    grid = field_.grid
    if min_separation < grid.dx:
        raise ConfigurationError("min_separation must be at least one grid spacing")
    mod = field_.modulus
    idx = local_maxima(mod)
    idx = idx[mod[idx] > mod.mean()]
    # highest first; stable sort keeps ties in index order
    order = idx[np.argsort(-mod[idx], kind="stable")]
    n = grid.n_points
    # suppress every index closer than min_separation to an accepted peak
    reach = math.ceil(min_separation / grid.dx - 1e-9) - 1
    blocked = np.zeros(n, dtype=bool)
    peaks = []
    for i in order:
        if blocked[i]:
            continue
        peaks.append(PeakRecord(float(grid.x[i]), float(mod[i]), float(field_.time), int(i)))
        blocked[np.arange(i - reach, i + reach + 1) % n] = True
    return peaks


def significant_amplitude(field_):
    mod = field_.modulus
    if not np.any(mod > 0):
        raise DegenerateFieldError("field is identically zero")
    amps = np.sort(mod[local_maxima(mod)])[::-1]
    if len(amps) < 3:
        return float(np.sqrt(2.0 * np.mean(mod**2)))
    return float(amps[: math.ceil(len(amps) / 3)].mean())


def _check_threshold(threshold_factor):
    lo, hi = THRESHOLD_RANGE
    if not lo <= threshold_factor <= hi:
        raise ConfigurationError(f"threshold_factor must lie in [{lo}, {hi}], got {threshold_factor!r}")


def classify_rogues(field_, threshold_factor=2.0, min_separation=1.0, match=True):
    """Peaks of ``field_`` with rogue flags; raises DegenerateFieldError if there are none."""
    _check_threshold(threshold_factor)
    peaks = find_peaks(field_, min_separation)
    if not peaks:
        raise DegenerateFieldError("field has no peaks")
    hs = significant_amplitude(field_)
    rogues = [p for p in peaks if p.amplitude >= threshold_factor * hs]
    scores = []
    if match:
        for p in rogues:
            try:
                b, err = match_rational_profile(field_, p)
            except DimensionError:
                continue
            scores.append(MatchScore(p, b, err))
    return RogueReport(hs, threshold_factor, peaks, rogues, scores)


def comparison_window(field_, peak, window_halfwidth=None):
    """Window indices plus numerical and scaled-analytic moduli around ``peak``."""
    grid = field_.grid
    b = peak.amplitude / RATIONAL2_PEAK
    if not b > 0:
        raise DegenerateFieldError("peak has zero amplitude")
    hw = 1.5 / b if window_halfwidth is None else window_halfwidth
    lo, hi = peak.position_x - hw, peak.position_x + hw
    if lo < grid.x_min or hi > grid.x[-1]:
        raise DimensionError(f"comparison window [{lo:.3g}, {hi:.3g}] leaves the grid")
    sel = np.flatnonzero((grid.x >= lo - 1e-12) & (grid.x <= hi + 1e-12))
    ref = np.abs(scale_solution(rational2_profile, b)(grid.x[sel] - peak.position_x, 0.0))
    return b, sel, field_.modulus[sel], ref


def match_rational_profile(field_, peak, window_halfwidth=None):
    """Scale factor b = amplitude / 5 and relative L2 profile error on the window."""
    b, _, num, ref = comparison_window(field_, peak, window_halfwidth)
    err = np.linalg.norm(num - ref) / np.linalg.norm(ref)
    return float(b), float(err)


def amplitude_histogram(trajectory, n_bins=50, burn_in=0.0, value_range=None):
    """Histogram of |psi| pooled over snapshots with time >= t0 + burn_in."""
    if len(trajectory) == 0:
        raise DegenerateFieldError("empty trajectory")
    if n_bins < 1:
        raise ConfigurationError("n_bins must be positive")
    keep = trajectory.times >= trajectory.times[0] + burn_in - 1e-12
    pooled = np.abs(trajectory.values[keep]).ravel()
    if pooled.size == 0:
        raise DegenerateFieldError("burn-in discards every snapshot")
    if value_range is None:
        value_range = (0.0, float(pooled.max()) or 1.0)
    counts, edges = np.histogram(pooled, bins=n_bins, range=value_range)
    return edges, counts


def low_amplitude_fit(edges, counts, cutoff):
    """L1 distances, over bins centred below ``cutoff``, between the
    normalized histogram and two densities fitted to the whole sample:
    Rayleigh (sigma^2 = E|psi|^2 / 2) and uniform on the occupied support.

    Returns ``(rayleigh_l1, uniform_l1)``.
    """
    edges = np.asarray(edges, dtype=float)
    counts = np.asarray(counts)
    total = counts.sum()
    if total == 0:
        raise DegenerateFieldError("empty histogram")
    centers = 0.5 * (edges[1:] + edges[:-1])
    widths = np.diff(edges)
    density = counts / (total * widths)
    sigma2 = np.sum(centers**2 * counts) / (2.0 * total)
    rayleigh = centers / sigma2 * np.exp(-(centers**2) / (2.0 * sigma2))
    top = edges[np.flatnonzero(counts)[-1] + 1]
    uniform = np.where(centers < top, 1.0 / top, 0.0)
    sel = centers < cutoff
    w = widths[sel]
    return (float(np.sum(np.abs(density[sel] - rayleigh[sel]) * w)),
            float(np.sum(np.abs(density[sel] - uniform[sel]) * w)))

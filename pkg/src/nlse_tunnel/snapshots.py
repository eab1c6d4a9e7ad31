"""Binary and CSV serialization of trajectories.

Binary layout, little-endian throughout::

    magic            4 bytes  b"NLS1"
    n_points         uint64
    x_min            float64
    length           float64
    n_snapshots      uint64
    dt               float64
    snapshot_every   uint64
    then per snapshot:
        time         float64
        values       n_points x (re float64, im float64)
"""
import csv
import struct

import numpy as np

from .errors import SnapshotFormatError
from .grid import Grid
from .solver import SimulationConfig, Trajectory

MAGIC = b"NLS1"
HEADER = struct.Struct("<4sQddQdQ")
_TIME = np.dtype("<f8")
_VALUES = np.dtype("<c16")


def encode(trajectory):
    g, cfg = trajectory.grid, trajectory.config
    parts = [HEADER.pack(MAGIC, g.n_points, g.x_min, g.length, len(trajectory), cfg.dt, cfg.snapshot_every)]
    for t, row in zip(trajectory.times, trajectory.values):
        parts.append(np.asarray(t, dtype=_TIME).tobytes())
        parts.append(np.ascontiguousarray(row, dtype=_VALUES).tobytes())
    return b"".join(parts)


def write_binary(trajectory, path):
    with open(path, "wb") as fh:
        fh.write(encode(trajectory))


def decode(data, potential_spec=None):
    if len(data) < HEADER.size:
        raise SnapshotFormatError("truncated header", len(data))
    magic, n, x_min, length, count, dt, every = HEADER.unpack_from(data, 0)
    if magic != MAGIC:
        raise SnapshotFormatError(f"bad magic {magic!r}", 0)
    try:
        grid = Grid(int(n), x_min, length)
    except ValueError as exc:
        raise SnapshotFormatError(f"invalid grid in header: {exc}", 4) from None
    record = 8 + 16 * grid.n_points
    expected = HEADER.size + count * record
    if len(data) != expected:
        # report where the first incomplete (or surplus) record starts
        offset = HEADER.size + min(count, (len(data) - HEADER.size) // record) * record
        raise SnapshotFormatError(
            f"file holds {len(data)} bytes, header promises {expected}", offset)
    times = np.empty(count)
    values = np.empty((count, grid.n_points), dtype=np.complex128)
    for i in range(count):
        off = HEADER.size + i * record
        times[i] = np.frombuffer(data, _TIME, 1, off)[0]
        values[i] = np.frombuffer(data, _VALUES, grid.n_points, off + 8)
        if not (np.isfinite(times[i]) and np.all(np.isfinite(values[i]))):
            raise SnapshotFormatError(f"non-finite data in snapshot {i}", off)
    if count > 1 and not np.all(np.diff(times) > 0):
        raise SnapshotFormatError("snapshot times not increasing", HEADER.size)
    try:
        t_end = max(dt, float(times[-1] - times[0])) if count else dt
        config = SimulationConfig(dt=dt, t_end=t_end, snapshot_every=int(every))
    except ValueError as exc:
        raise SnapshotFormatError(f"invalid solver fields in header: {exc}", 36) from None
    return Trajectory(grid, config, potential_spec, times, values)


def read_binary(path, potential_spec=None):
    with open(path, "rb") as fh:
        return decode(fh.read(), potential_spec)


def write_csv(trajectory, path):
    """Long-format rows (t, x, re, im, abs); intended for small runs."""
    x = trajectory.grid.x
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "x", "re", "im", "abs"])
        for t, row in zip(trajectory.times, trajectory.values):
            for xj, v in zip(x, row):
                w.writerow([repr(float(t)), repr(float(xj)), repr(float(v.real)), repr(float(v.imag)), repr(float(abs(v)))])

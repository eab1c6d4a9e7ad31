import csv
import struct

import numpy as np
import pytest

from nlse_tunnel import fields as F, potentials as P
from nlse_tunnel.errors import SnapshotFormatError
from nlse_tunnel.snapshots import HEADER, decode, encode, read_binary, write_binary, write_csv
from nlse_tunnel.solver import SimulationConfig, run


@pytest.fixture(scope="module")
def traj():
    from nlse_tunnel.grid import make_grid

    g = make_grid(64, -8.0, 16.0)
    return run(F.plane_wave(g), P.single_rectangular_spec(1.0), SimulationConfig(t_end=0.01, snapshot_every=5, seed=2))


def test_round_trip_is_bit_exact(traj, tmp_path):
    path = tmp_path / "t.nls"
    write_binary(traj, path)
    back = read_binary(path)
    assert back.grid == traj.grid
    assert back.values.tobytes() == traj.values.tobytes()
    assert back.times.tobytes() == traj.times.tobytes()
    assert (back.config.dt, back.config.snapshot_every) == (traj.config.dt, traj.config.snapshot_every)


def test_layout(traj):
    blob = encode(traj)
    assert HEADER.size == 52
    magic, n, x_min, length, count, dt, every = struct.unpack_from("<4sQddQdQ", blob)
    assert (magic, n, x_min, length, count, dt, every) == (b"NLS1", 64, -8.0, 16.0, 3, 1e-3, 5)
    rec = 8 + 16 * 64
    assert len(blob) == 52 + 3 * rec
    t1, re0, im0 = struct.unpack_from("<ddd", blob, 52 + rec)
    assert t1 == traj.times[1]
    assert complex(re0, im0) == traj.values[1, 0]


def test_truncated_file_reports_offset(traj):
    blob = encode(traj)
    rec = 8 + 16 * 64
    with pytest.raises(SnapshotFormatError) as info:
        decode(blob[: 52 + rec + 100])
    assert info.value.offset == 52 + rec
    with pytest.raises(SnapshotFormatError) as info:
        decode(blob[:20])
    assert info.value.offset == 20


def test_bad_magic(traj):
    blob = bytearray(encode(traj))
    blob[:4] = b"XXXX"
    with pytest.raises(SnapshotFormatError) as info:
        decode(bytes(blob))
    assert info.value.offset == 0


def test_non_finite_payload(traj):
    blob = bytearray(encode(traj))
    off = 52 + (8 + 16 * 64) + 8
    blob[off:off + 8] = struct.pack("<d", float("nan"))
    with pytest.raises(SnapshotFormatError) as info:
        decode(bytes(blob))
    assert info.value.offset == 52 + 8 + 16 * 64


def test_bad_grid_in_header(traj):
    blob = bytearray(encode(traj))
    blob[4:12] = struct.pack("<Q", 3)
    with pytest.raises(SnapshotFormatError):
        decode(bytes(blob))


def test_csv_export(traj, tmp_path):
    path = tmp_path / "t.csv"
    write_csv(traj, path)
    with open(path) as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["t", "x", "re", "im", "abs"]
    assert len(rows) == 1 + 3 * 64
    t, x, re, im, ab = map(float, rows[1 + 64 + 5])
    v = traj.values[1, 5]
    assert (t, x, re, im) == (traj.times[1], traj.grid.x[5], v.real, v.imag)
    assert ab == pytest.approx(abs(v), rel=1e-15)

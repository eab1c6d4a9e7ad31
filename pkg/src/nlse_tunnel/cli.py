"""``nlse-tunnel`` command line: simulate | analyze | ensemble | compare.

Exit codes: 0 success, 2 configuration/argument error, 3 numerical
blow-up, 4 I/O or file-format error.
"""
import argparse
import csv
import hashlib
import json
import logging
import os
import platform
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from . import analysis as A
from .config import MANIFEST_KIND, PRESETS, AnalysisConfig, load_config
from .errors import BlowUpError, ConfigurationError, DegenerateFieldError, DimensionError, SnapshotFormatError
from .potentials import SampledPotential
from .snapshots import encode, read_binary, write_csv
from .solver import run

log = logging.getLogger("nlse_tunnel")

EXIT_OK, EXIT_CONFIG, EXIT_BLOWUP, EXIT_IO = 0, 2, 3, 4
TRAJECTORY_FILE = "trajectory.nls"
MANIFEST_FILE = "manifest.json"


class CLIError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def _prepare_dir(path):
    path = Path(path)
    try:
        path.mkdir(parents=True, exist_ok=True)
        probe = path / ".write-probe"
        probe.write_bytes(b"")
        probe.unlink()
    except OSError as exc:
        raise CLIError(f"cannot write to {path}: {exc}", EXIT_IO) from None
    return path


def _write_text(path, text):
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise CLIError(f"cannot write {path}: {exc}", EXIT_IO) from None


def _write_rows(path, header, rows):
    try:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(header)
            w.writerows(rows)
    except OSError as exc:
        raise CLIError(f"cannot write {path}: {exc}", EXIT_IO) from None


def _load_trajectory(path):
    try:
        return read_binary(path)
    except SnapshotFormatError as exc:
        raise CLIError(f"{path}: format error: {exc}", EXIT_IO) from None
    except OSError as exc:
        raise CLIError(f"cannot read {path}: {exc}", EXIT_IO) from None


def versions():
    return {"nlse_tunnel": __version__, "numpy": np.__version__, "python": platform.python_version()}


# --- simulate ----------------------------------------------------------------

def simulate(cfg):
    grid = cfg.make_grid()
    return run(cfg.initial_field(grid), cfg.potential_spec(), cfg.solver)


def write_run(cfg, traj, out_dir, wall_time):
    out_dir = _prepare_dir(out_dir)
    blob = encode(traj)
    try:
        (out_dir / TRAJECTORY_FILE).write_bytes(blob)
        files = {TRAJECTORY_FILE: hashlib.sha256(blob).hexdigest()}
        if "csv" in cfg.outputs.formats:
            write_csv(traj, out_dir / "trajectory.csv")
            pot = SampledPotential(traj.grid, cfg.potential_spec())
            _write_rows(out_dir / "potential.csv", ["x", "M_base"],
                        [(repr(float(x)), repr(float(m))) for x, m in zip(pot.grid.x, pot.base_values)])
    except OSError as exc:
        raise CLIError(f"cannot write outputs in {out_dir}: {exc}", EXIT_IO) from None
    manifest = {
        "kind": MANIFEST_KIND,
        "scenario": cfg.to_dict(),
        "seed": cfg.solver.seed,
        "assumptions": cfg.notes,
        "versions": versions(),
        "wall_time_s": round(wall_time, 3),
        "files": files,
    }
    _write_text(out_dir / MANIFEST_FILE, json.dumps(manifest, indent=2) + "\n")
    return out_dir


def cmd_simulate(args):
    cfg = load_config(args.config)
    if args.seed is not None:
        cfg = cfg.with_seed(args.seed)
    out_dir = args.out or cfg.outputs.directory
    _prepare_dir(out_dir)
    t0 = time.perf_counter()
    try:
        traj = simulate(cfg)
    except BlowUpError as exc:
        raise CLIError(str(exc), EXIT_BLOWUP) from None
    out = write_run(cfg, traj, out_dir, time.perf_counter() - t0)
    print(f"wrote {out / TRAJECTORY_FILE} ({len(traj)} snapshots, max |psi| = {traj.max_modulus():.4f})")
    return EXIT_OK


# --- analyze -----------------------------------------------------------------

def analyze_trajectory(traj, acfg, threshold=None, snapshot=None):
    """Rogue report at one snapshot (default: the one holding the largest |psi|)
    plus the pooled amplitude histogram.  ``report`` is None for peakless fields.
    """
    threshold = acfg.threshold_factor if threshold is None else threshold
    A._check_threshold(threshold)
    i = traj.argmax_snapshot() if snapshot is None else snapshot
    field_ = traj.snapshot(i)
    try:
        report = A.classify_rogues(field_, threshold, acfg.min_separation)
    except DegenerateFieldError:
        report = None
    hist = A.amplitude_histogram(traj, acfg.n_bins, acfg.burn_in, (0.0, acfg.histogram_max))
    return field_, report, hist


def report_rows(report):
    scores = {id(s.peak): s for s in report.match_scores}
    rows = []
    for rank, p in enumerate(report.peaks, 1):
        s = scores.get(id(p))
        rows.append([rank, repr(p.position_x), repr(p.amplitude), repr(p.snapshot_time), p.index,
                     int(report.is_rogue(p)), "" if s is None else repr(s.b_factor),
                     "" if s is None else repr(s.l2_window_error)])
    return rows


def summary_text(field_, report):
    if report is None:
        return f"snapshot t={field_.time:.6g}: no peaks\n"
    lines = [
        f"snapshot t={field_.time:.6g}",
        f"significant amplitude {report.significant_amplitude:.6g}",
        f"threshold factor {report.threshold_factor:g} -> rogue level {report.threshold_factor * report.significant_amplitude:.6g}",
        f"peaks {len(report.peaks)}, rogue peaks {len(report.rogue_peaks)}",
        "top peaks:",
    ]
    for rank, p in enumerate(report.peaks[:5], 1):
        flag = "ROGUE" if report.is_rogue(p) else "-"
        lines.append(f"  {rank}. x={p.position_x:+.4f} |psi|={p.amplitude:.4f} {flag}")
    return "\n".join(lines) + "\n"


def cmd_analyze(args):
    traj = _load_trajectory(args.trajectory)
    acfg = AnalysisConfig(n_bins=args.bins, min_separation=args.min_separation)
    try:
        field_, report, (edges, counts) = analyze_trajectory(traj, acfg, args.threshold, args.snapshot)
    except IndexError:
        raise CLIError(f"snapshot index {args.snapshot} out of range", EXIT_CONFIG) from None
    out = _prepare_dir(args.out or Path(args.trajectory).parent)
    header = ["rank", "x", "amplitude", "time", "index", "rogue", "b_factor", "window_error"]
    _write_rows(out / "report.csv", header, report_rows(report) if report else [])
    _write_rows(out / "histogram.csv", ["left", "right", "count"],
                [(repr(float(a)), repr(float(b)), int(c)) for a, b, c in zip(edges[:-1], edges[1:], counts)])
    text = summary_text(field_, report)
    _write_text(out / "summary.txt", text)
    print(text, end="")
    return EXIT_OK


# --- ensemble ----------------------------------------------------------------

def ensemble_member(cfg_dict, seed):
    """Simulate and analyze one seed; returns a plain dict (picklable)."""
    from .config import from_dict

    cfg = from_dict(cfg_dict).with_seed(seed)
    row = {"seed": seed, "status": "ok", "max_amplitude": float("nan"), "significant_amplitude": float("nan"),
           "n_peaks": 0, "n_rogues": 0, "top_b_factor": float("nan"), "top_window_error": float("nan")}
    try:
        traj = simulate(cfg)
    except BlowUpError as exc:
        row["status"] = f"blowup@step{exc.step_index}"
        return row, None
    _, report, (_, counts) = analyze_trajectory(traj, cfg.analysis)
    row["max_amplitude"] = traj.max_modulus()
    if report is not None:
        row.update(significant_amplitude=report.significant_amplitude, n_peaks=len(report.peaks),
                   n_rogues=len(report.rogue_peaks))
        try:
            b, err = A.match_rational_profile(traj.snapshot(traj.argmax_snapshot()), report.peaks[0],
                                              cfg.analysis.window_halfwidth)
            row.update(top_b_factor=b, top_window_error=err)
        except (DimensionError, DegenerateFieldError):
            pass
    return row, counts


def worker_count(requested=None):
    cap = int(os.environ.get("NLSE_TUNNEL_WORKERS", os.cpu_count() or 1))
    return max(1, min(cap, requested or cap))


def run_ensemble(cfg, n_seeds, base_seed=0, workers=1):
    seeds = [base_seed ^ i for i in range(n_seeds)]
    cfg_dict = cfg.to_dict()
    if workers <= 1:
        results = [ensemble_member(cfg_dict, s) for s in seeds]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(ensemble_member, [cfg_dict] * n_seeds, seeds))
    rows = [r for r, _ in results]
    pooled = np.zeros(cfg.analysis.n_bins, dtype=np.int64)
    for _, counts in results:
        if counts is not None:
            pooled += counts
    edges = np.linspace(0.0, cfg.analysis.histogram_max, cfg.analysis.n_bins + 1)
    return rows, edges, pooled


ENSEMBLE_COLUMNS = ["seed", "status", "max_amplitude", "significant_amplitude", "n_peaks", "n_rogues",
                    "top_b_factor", "top_window_error"]


def cmd_ensemble(args):
    cfg = load_config(args.config)
    if args.seeds < 1:
        raise CLIError("--seeds must be >= 1", EXIT_CONFIG)
    out = _prepare_dir(args.out or cfg.outputs.directory)
    rows, edges, pooled = run_ensemble(cfg, args.seeds, args.base_seed, worker_count(args.workers))
    _write_rows(out / "ensemble.csv", ENSEMBLE_COLUMNS,
                [[r[c] if isinstance(r[c], (int, str)) else repr(r[c]) for c in ENSEMBLE_COLUMNS] for r in rows])
    _write_rows(out / "ensemble_histogram.csv", ["left", "right", "count"],
                [(repr(float(a)), repr(float(b)), int(c)) for a, b, c in zip(edges[:-1], edges[1:], pooled)])
    ok = [r for r in rows if r["status"] == "ok"]
    above = sum(r["max_amplitude"] > 2.0 for r in ok)
    with_rogue = sum(r["n_rogues"] > 0 for r in ok)
    text = (f"members {len(rows)}, completed {len(ok)}\n"
            f"max |psi| > 2: {above}/{len(ok)}\n"
            f"with rogue peaks: {with_rogue}/{len(ok)}\n")
    _write_text(out / "ensemble_summary.txt", text)
    print(text, end="")
    return EXIT_OK


# --- compare -----------------------------------------------------------------

def cmd_compare(args):
    traj = _load_trajectory(args.trajectory)
    field_ = traj.snapshot(traj.argmax_snapshot())
    peaks = A.find_peaks(field_, args.min_separation)
    if not 1 <= args.peak_rank <= len(peaks):
        raise CLIError(f"--peak-rank {args.peak_rank} out of range (field has {len(peaks)} peaks)", EXIT_CONFIG)
    peak = peaks[args.peak_rank - 1]
    try:
        b, sel, num, ref = A.comparison_window(field_, peak, args.window)
    except DimensionError as exc:
        raise CLIError(str(exc), EXIT_CONFIG) from None
    err = float(np.linalg.norm(num - ref) / np.linalg.norm(ref))
    out = _prepare_dir(args.out or Path(args.trajectory).parent)
    _write_rows(out / "compare.csv", ["x", "numerical_abs", "analytic_abs"],
                [(repr(float(x)), repr(float(n)), repr(float(r))) for x, n, r in zip(field_.grid.x[sel], num, ref)])
    text = (f"peak rank {args.peak_rank}: x={peak.position_x:+.6f} |psi|={peak.amplitude:.6f} t={field_.time:.6g}\n"
            f"b_factor {b!r}\nwindow_error {err!r}\n")
    _write_text(out / "compare_summary.txt", text)
    print(text, end="")
    return EXIT_OK


def cmd_presets(args):
    for name in PRESETS:
        print(name)
    return EXIT_OK


# --- entry point ---------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="nlse-tunnel", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("simulate", help="run one scenario (config path, manifest or preset name)")
    s.add_argument("config")
    s.add_argument("--seed", type=int)
    s.add_argument("--out")
    s.set_defaults(func=cmd_simulate)

    a = sub.add_parser("analyze", help="peak and rogue report for a trajectory file")
    a.add_argument("trajectory")
    a.add_argument("--threshold", type=float, default=2.0)
    a.add_argument("--min-separation", type=float, default=1.0)
    a.add_argument("--bins", type=int, default=50)
    a.add_argument("--snapshot", type=int, help="snapshot index (default: largest |psi|)")
    a.add_argument("--out")
    a.set_defaults(func=cmd_analyze)

    e = sub.add_parser("ensemble", help="seeded ensemble with aggregate statistics")
    e.add_argument("config")
    e.add_argument("--seeds", type=int, required=True)
    e.add_argument("--base-seed", type=int, default=0)
    e.add_argument("--workers", type=int)
    e.add_argument("--out")
    e.set_defaults(func=cmd_ensemble)

    c = sub.add_parser("compare", help="profile of a peak against the scaled second-order rational solution")
    c.add_argument("trajectory")
    c.add_argument("--peak-rank", type=int, default=1)
    c.add_argument("--window", type=float, help="window half-width (default 1.5 / b)")
    c.add_argument("--min-separation", type=float, default=1.0)
    c.add_argument("--out")
    c.set_defaults(func=cmd_compare)

    sub.add_parser("presets", help="list figure presets").set_defaults(func=cmd_presets)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except CLIError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except ConfigurationError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (OSError, SnapshotFormatError) as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())

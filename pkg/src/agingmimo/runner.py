"""Experiment execution: sweep points to deterministic CSV/JSON artifacts.

Every experiment kind expands the config into an ordered list of sweep
points, evaluates each point independently (optionally across threads),
and writes one row per point. Per-point failures land in the row's
error column instead of aborting the run. Output bytes are deterministic
for a fixed config: floats are formatted with 12 significant digits,
rows keep expansion order, and line endings are LF.
"""

import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, fields
from pathlib import Path

from . import __version__
from .config import ExperimentConfig
from .errors import AgingMimoError
from .optimize import optimal_frame_size
from .sinr import frame_spectral_efficiency, monte_carlo_sinr
from .bounds import se_upper_total


@dataclass
class SweepRecord:
    """One output row; None fields serialize as empty cells."""

    experiment: str
    scenario_hash: str
    n_r: int
    k: int
    f_d_hz: float
    p_pilot_mw: float
    window: str
    delta: int = None
    slot: int = None
    factor: float = None
    gamma_tagged: float = None
    se_slot: float = None
    se_frame: float = None
    se_upper: float = None
    mc_mean: float = None
    mc_stderr: float = None
    error: str = None


CSV_COLUMNS = tuple(f.name for f in fields(SweepRecord))


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return format(value, ".12g")
    return str(value)


def write_csv(records, path):
    """Write records with a fixed header, 12-significant-digit floats, LF."""
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(CSV_COLUMNS) + "\n")
        for rec in records:
            row = [_fmt(getattr(rec, name)) for name in CSV_COLUMNS]
            fh.write(",".join(cell.replace(",", ";") for cell in row) + "\n")
    return path


def write_json(records, path):
    path = Path(path)
    payload = [{name: getattr(rec, name) for name in CSV_COLUMNS} for rec in records]
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def write_manifest(cfg: ExperimentConfig, records, out_path, wall_time_s, path):
    """Companion JSON describing the run (not byte-deterministic: wall time)."""
    failed = sum(1 for r in records if r.error is not None)
    manifest = {
        "experiment": cfg.experiment,
        "scenario_hash": cfg.scenario_hash(),
        "config": cfg.as_dict(),
        "code_version": __version__,
        "n_rows": len(records),
        "n_failed": failed,
        "output": Path(out_path).name,
        "wall_time_s": round(wall_time_s, 3),
    }
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def _base_record(cfg: ExperimentConfig, n_r, f_d, p_pilot=None, window=None,
                 **extra) -> SweepRecord:
    return SweepRecord(
        experiment=cfg.experiment, scenario_hash=cfg.scenario_hash(),
        n_r=n_r, k=cfg.k, f_d_hz=f_d,
        p_pilot_mw=cfg.p_pilot_mw if p_pilot is None else p_pilot,
        window=window or cfg.window, **extra)


def _expand_points(cfg: ExperimentConfig):
    """Ordered (record, evaluate) pairs for the configured experiment.

    evaluate mutates its record in place; it runs on worker threads, so
    it must not touch shared state.
    """
    kind = cfg.experiment
    points = []

    def add(rec, fn):
        points.append((rec, fn))

    if kind == "frame-sweep":
        for n_r in cfg.n_r_list:
            for f_d in cfg.f_d_hz:
                scn = cfg.build_scenario(n_r, f_d)
                for delta in cfg.delta_range():
                    rec = _base_record(cfg, n_r, f_d, delta=delta)

                    def fn(rec=rec, scn=scn, delta=delta):
                        rec.se_frame = frame_spectral_efficiency(scn, delta).se
                    add(rec, fn)

    elif kind == "per-slot":
        for n_r in cfg.n_r_list:
            for f_d in cfg.f_d_hz:
                scn = cfg.build_scenario(n_r, f_d)
                recs = [_base_record(cfg, n_r, f_d, delta=cfg.delta, slot=i)
                        for i in range(1, cfg.delta + 1)]

                def fn(recs=recs, scn=scn):
                    fs = frame_spectral_efficiency(scn, scn.frame.delta)
                    for idx, rec in enumerate(recs):
                        rec.gamma_tagged = float(fs.gamma[scn.tagged, idx])
                        rec.se_slot = float(fs.slot_se[scn.tagged, idx])
                        rec.se_frame = fs.se
                # one evaluation fills the whole slot column; attach it to
                # the first row and no-ops to the rest to keep row order
                add(recs[0], fn)
                for rec in recs[1:]:
                    add(rec, lambda: None)

    elif kind == "power-surface":
        for n_r in cfg.n_r_list:
            for f_d in cfg.f_d_hz:
                for p_pilot in cfg.p_pilot_grid_mw:
                    scn = cfg.build_scenario(n_r, f_d, p_pilot=p_pilot)
                    for delta in cfg.delta_range():
                        rec = _base_record(cfg, n_r, f_d, p_pilot=p_pilot,
                                           delta=delta)

                        def fn(rec=rec, scn=scn, delta=delta):
                            rec.se_frame = frame_spectral_efficiency(scn, delta).se
                        add(rec, fn)

    elif kind == "doppler-optimum":
        for n_r in cfg.n_r_list:
            for p_pilot in cfg.p_pilot_grid_mw:
                for f_d in cfg.f_d_hz:
                    scn = cfg.build_scenario(n_r, f_d, p_pilot=p_pilot)
                    rec = _base_record(cfg, n_r, f_d, p_pilot=p_pilot)

                    def fn(rec=rec, scn=scn):
                        trace = optimal_frame_size(scn)
                        rec.delta = trace.delta_opt
                        rec.se_frame = trace.se_opt
                    add(rec, fn)

    elif kind == "bound-curve":
        for n_r in cfg.n_r_list:
            for f_d in cfg.f_d_hz:
                scn = cfg.build_scenario(n_r, f_d)
                for delta in cfg.delta_range():
                    rec = _base_record(cfg, n_r, f_d, delta=delta)

                    def fn(rec=rec, scn=scn, delta=delta):
                        rec.se_frame = frame_spectral_efficiency(scn, delta).se
                        rec.se_upper = se_upper_total(scn, delta)
                    add(rec, fn)

    elif kind == "window-compare":
        for n_r in cfg.n_r_list:
            for window in ("2b1a", "1b1a", "2b"):
                for f_d in cfg.f_d_hz:
                    scn = cfg.build_scenario(n_r, f_d, window=window)
                    for delta in cfg.delta_range():
                        rec = _base_record(cfg, n_r, f_d, window=window,
                                           delta=delta)

                        def fn(rec=rec, scn=scn, delta=delta):
                            rec.se_frame = frame_spectral_efficiency(scn, delta).se
                        add(rec, fn)

    elif kind == "mismatch":
        for n_r in cfg.n_r_list:
            for f_d in cfg.f_d_hz:
                scn = cfg.build_scenario(n_r, f_d)
                for factor in cfg.mismatch_factors:
                    for delta in cfg.delta_range():
                        rec = _base_record(cfg, n_r, f_d, delta=delta,
                                           factor=factor)

                        def fn(rec=rec, scn=scn, delta=delta, factor=factor):
                            rec.se_frame = frame_spectral_efficiency(
                                scn, delta, doppler_scale=factor).se
                        add(rec, fn)

    elif kind == "mc-validate":
        idx = 0
        for n_r in cfg.n_r_list:
            for f_d in cfg.f_d_hz:
                scn = cfg.build_scenario(n_r, f_d)
                rec = _base_record(cfg, n_r, f_d, delta=cfg.delta, slot=cfg.slot)

                def fn(rec=rec, scn=scn, point_idx=idx):
                    fs = frame_spectral_efficiency(scn, scn.frame.delta)
                    rec.gamma_tagged = float(fs.gamma[scn.tagged, cfg.slot - 1])
                    rec.se_slot = float(fs.slot_se[scn.tagged, cfg.slot - 1])
                    mc = monte_carlo_sinr(scn, cfg.slot, cfg.mc_trials,
                                          seed=(cfg.seed, point_idx))
                    rec.mc_mean = mc.mean
                    rec.mc_stderr = mc.stderr
                add(rec, fn)
                idx += 1

    else:  # pragma: no cover - parse_config rejects unknown kinds
        raise AgingMimoError(f"unknown experiment kind {kind!r}")
    return points


def run_experiment(cfg: ExperimentConfig, out_dir, threads: int = 1,
                   fmt: str = "csv"):
    """Run the configured experiment and write results plus a manifest.

    Returns (records, data_path, manifest_path). Raises AgingMimoError
    if every point failed.
    """
    if fmt not in ("csv", "json"):
        raise AgingMimoError(f"unknown output format {fmt!r}")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    start = time.monotonic()

    points = _expand_points(cfg)

    def evaluate(point):
        rec, fn = point
        try:
            fn()
        except (AgingMimoError, FloatingPointError, ValueError) as exc:
            rec.error = f"{type(exc).__name__}: {exc}"
        return rec

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            records = list(pool.map(evaluate, points))
    else:
        records = [evaluate(p) for p in points]

    value_fields = ("gamma_tagged", "se_slot", "se_frame", "se_upper",
                    "mc_mean")
    def productive(rec):
        return any(getattr(rec, name) is not None for name in value_fields)
    if records and not any(productive(r) for r in records):
        raise AgingMimoError(
            f"every sweep point failed; first error: {records[0].error}")

    stem = f"{cfg.experiment}_{cfg.scenario_hash()}"
    writer = write_csv if fmt == "csv" else write_json
    data_path = writer(records, out_dir / f"{stem}.{fmt}")
    manifest_path = write_manifest(cfg, records, data_path,
                                   time.monotonic() - start,
                                   out_dir / f"{stem}.manifest.json")
    return records, data_path, manifest_path

"""CSV loading, series extraction and figure rendering.

Every figure kind reduces to a family of (label, x, y) series derived
purely by grouping and sorting CSV columns. The same series feed both
the plot and the checksum, so a figure can be verified against its
source data without re-reading pixels.
"""

import hashlib
from pathlib import Path

import matplotlib
matplotlib.use("Agg")
# fixed hash salt so SVG element ids are reproducible across runs
matplotlib.rcParams["svg.hashsalt"] = "figrender"
import matplotlib.pyplot as plt
import numpy as np
import pandas as pd

from .errors import EmptyDatasetError, MissingColumnError
from .spec import FigureSpec

# per figure kind: x column, y column(s), grouping columns
_LAYOUTS = {
    "frame-sweep": ("delta", ("se_frame",), ("n_r", "f_d_hz")),
    "per-slot": ("slot", ("se_slot",), ("n_r", "f_d_hz")),
    "power-surface": ("delta", ("se_frame",), ("n_r", "f_d_hz", "p_pilot_mw")),
    "doppler-optimum": ("f_d_hz", ("delta",), ("n_r", "p_pilot_mw")),
    "bound-curve": ("delta", ("se_frame", "se_upper"), ("n_r", "f_d_hz")),
    "window-compare": ("delta", ("se_frame",), ("n_r", "window", "f_d_hz")),
    "mismatch": ("delta", ("se_frame",), ("n_r", "f_d_hz", "factor")),
    "mc-validate": ("f_d_hz", ("mc_mean", "gamma_tagged"), ("n_r",)),
}

_AXIS_LABELS = {
    "delta": "frame size (data slots per pilot)",
    "slot": "data slot index",
    "f_d_hz": "maximum Doppler frequency (Hz)",
    "se_frame": "spectral efficiency (bit/s/Hz)",
    "se_slot": "per-slot spectral efficiency (bit/s/Hz)",
    "mc_mean": "SINR",
}


def load_dataset(paths, kind: str) -> pd.DataFrame:
    """Read and concatenate sweep CSVs, checking the columns kind needs."""
    x_col, y_cols, group_cols = _LAYOUTS[kind]
    frames = []
    for path in paths:
        df = pd.read_csv(path, dtype={"error": str})
        for col in (x_col, *y_cols, *group_cols):
            if col not in df.columns:
                raise MissingColumnError(col, path=path)
        frames.append(df)
    data = pd.concat(frames, ignore_index=True)
    if "error" in data.columns:
        data = data[data["error"].isna() | (data["error"] == "")]
    data = data.dropna(subset=[x_col])
    if data.empty:
        raise EmptyDatasetError(f"no usable rows for a {kind} figure")
    return data


def _label(group_cols, key, suffix=""):
    if not isinstance(key, tuple):
        key = (key,)
    parts = [f"{col}={val:g}" if isinstance(val, float) else f"{col}={val}"
             for col, val in zip(group_cols, key)]
    if suffix:
        parts.append(suffix)
    return ", ".join(parts)


def series_for(kind: str, data: pd.DataFrame):
    """(label, x, y) series for a figure kind, in deterministic order."""
    x_col, y_cols, group_cols = _LAYOUTS[kind]
    series = []
    for key, grp in data.groupby(list(group_cols), sort=True):
        grp = grp.sort_values(x_col)
        for y_col in y_cols:
            sub = grp.dropna(subset=[y_col])
            if sub.empty:
                continue
            suffix = y_col if len(y_cols) > 1 else ""
            series.append((_label(group_cols, key, suffix),
                           sub[x_col].to_numpy(dtype=float),
                           sub[y_col].to_numpy(dtype=float)))
    if not series:
        raise EmptyDatasetError(f"no plottable series for a {kind} figure")
    return series


def _checksum(series) -> str:
    digest = hashlib.sha256()
    for label, x, y in series:
        digest.update(label.encode())
        for arr in (x, y):
            digest.update(" ".join(format(v, ".12g") for v in arr).encode())
        digest.update(b"|")
    return digest.hexdigest()


def dataset_checksum(paths, kind: str) -> str:
    """Checksum of the series a figure of this kind would plot."""
    return _checksum(series_for(kind, load_dataset(paths, kind)))


def extract_plotted_series(ax):
    """(label, x, y) series recovered from a rendered axes object."""
    return [(line.get_label(), np.asarray(line.get_xdata(), dtype=float),
             np.asarray(line.get_ydata(), dtype=float))
            for line in ax.get_lines()]


def figure_checksum(ax) -> str:
    """Checksum of what an axes object actually plots."""
    return _checksum(extract_plotted_series(ax))


def render(spec: FigureSpec):
    """Render one figure; returns (output_path, axes checksum)."""
    data = load_dataset(spec.inputs, spec.kind)
    series = series_for(spec.kind, data)
    x_col, y_cols, _ = _LAYOUTS[spec.kind]

    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    try:
        for label, x, y in series:
            marker = "o" if x.size == 1 else None
            ax.plot(x, y, label=label, marker=marker)
        ax.set_xlabel(spec.x_label or _AXIS_LABELS.get(x_col, x_col))
        ax.set_ylabel(spec.y_label or _AXIS_LABELS.get(y_cols[0], y_cols[0]))
        if spec.title:
            ax.set_title(spec.title)
        ax.grid(True, alpha=0.3)
        ax.legend(fontsize=8)
        checksum = figure_checksum(ax)
        out = Path(spec.output)
        out.parent.mkdir(parents=True, exist_ok=True)
        # strip volatile metadata so identical inputs give identical bytes
        metadata = {"Date": None} if spec.image_format == "svg" else None
        fig.savefig(out, format=spec.image_format, dpi=120, metadata=metadata)
    finally:
        plt.close(fig)
    return out, checksum

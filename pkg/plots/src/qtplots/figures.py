"""Overlay figures from simulation CSV files."""

from __future__ import annotations

import csv
import os
import tempfile
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

__all__ = ["FigureSpec", "render", "read_series"]


@dataclass(frozen=True)
class FigureSpec:
    """One figure: each input CSV becomes one curve.

    x_column / y_column default to the first two CSV columns.  Existing
    output files are refused unless force is set; inputs are never touched.
    """

    inputs: tuple
    output: str
    labels: tuple = ()
    x_label: str = ""
    y_label: str = "density"
    title: str = ""
    x_column: str = None
    y_column: str = None
    force: bool = False

    def __post_init__(self):
        if not self.inputs:
            raise ValueError("need at least one input CSV")
        if self.labels and len(self.labels) != len(self.inputs):
            raise ValueError("labels must match inputs one to one")


def read_series(path: str, x_column: str = None, y_column: str = None):
    """Read (x, y) columns from a qtsim CSV; raises on malformed input."""
    if not os.path.exists(path):
        raise FileNotFoundError(path)
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty file")
        rows = list(reader)
    if len(header) < 2:
        raise ValueError(f"{path}: need at least two columns")
    x_name = x_column or header[0]
    y_name = y_column or header[1]
    if x_name not in header or y_name not in header:
        raise ValueError(f"{path}: missing column {x_name!r} or {y_name!r}")
    xi, yi = header.index(x_name), header.index(y_name)
    if not rows:
        raise ValueError(f"{path}: no data rows")
    try:
        x = np.array([float(r[xi]) for r in rows])
        y = np.array([float(r[yi]) for r in rows])
    except (ValueError, IndexError) as ex:
        raise ValueError(f"{path}: unparseable data ({ex})")
    return x_name, y_name, x, y


def render(spec: FigureSpec) -> str:
    """Render the figure; returns the output path.

    All inputs are read and validated before anything is written, and the
    image lands atomically (temp file + rename), so a failure leaves no
    partial output.
    """
    if os.path.exists(spec.output) and not spec.force:
        raise FileExistsError(
            f"{spec.output} exists; pass force=True to overwrite")
    series = [read_series(p, spec.x_column, spec.y_column) for p in spec.inputs]
    fig, ax = plt.subplots(figsize=(7.0, 4.2))
    try:
        for i, (x_name, y_name, x, y) in enumerate(series):
            label = spec.labels[i] if spec.labels else os.path.basename(
                spec.inputs[i])
            ax.plot(x, y, lw=1.4, label=label)
        ax.set_xlabel(spec.x_label or series[0][0])
        ax.set_ylabel(spec.y_label or series[0][1])
        if spec.title:
            ax.set_title(spec.title)
        if len(series) > 1 or spec.labels:
            ax.legend(frameon=False)
        ax.margins(x=0)
        fig.tight_layout()
        suffix = os.path.splitext(spec.output)[1] or ".png"
        out_dir = os.path.dirname(os.path.abspath(spec.output)) or "."
        tmp_fd, tmp_path = tempfile.mkstemp(suffix=suffix, dir=out_dir)
        os.close(tmp_fd)
        try:
            fig.savefig(tmp_path, dpi=150)
            os.replace(tmp_path, spec.output)
        except BaseException:
            os.unlink(tmp_path)
            raise
    finally:
        plt.close(fig)
    return spec.output

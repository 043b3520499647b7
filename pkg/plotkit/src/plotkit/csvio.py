"""Schema-checked CSV reading for the ddelab file contracts."""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np


class SchemaError(ValueError):
    """Input file does not match the documented CSV contract."""


def read_columns(path, expected_header: list[str]) -> dict[str, np.ndarray]:
    """Read a CSV whose header must match exactly; returns column arrays."""
    path = Path(path)
    if not path.exists():
        raise SchemaError(f"{path}: no such file")
    lines = path.read_text().strip().splitlines()
    if not lines or lines[0].split(",") != expected_header:
        got = lines[0] if lines else "<empty>"
        raise SchemaError(f"{path}: header {got!r} != {','.join(expected_header)!r}")
    if len(lines) < 2:
        raise SchemaError(f"{path}: no data rows")
    rows = []
    for line in lines[1:]:
        toks = line.split(",")
        if len(toks) != len(expected_header):
            raise SchemaError(f"{path}: ragged row {line!r}")
        rows.append([math.nan if t in ("", "nan") else float(t) for t in toks])
    data = np.asarray(rows)
    return {name: data[:, i] for i, name in enumerate(expected_header)}


def apply_house_style() -> None:
    """Deterministic output: fixed hash salt, no date metadata paths."""
    import matplotlib

    matplotlib.use("Agg", force=False)
    matplotlib.rcParams["svg.hashsalt"] = "plotkit"
    matplotlib.rcParams["figure.dpi"] = 110


def save_png_svg(fig, out_path) -> tuple[Path, Path]:
    """Write <base>.png and <base>.svg for the requested image path."""
    base = Path(out_path)
    if base.suffix:
        base = base.with_suffix("")
    png = base.with_suffix(".png")
    svg = base.with_suffix(".svg")
    fig.savefig(png, metadata={"Software": "plotkit"})
    fig.savefig(svg, metadata={"Date": None})
    return png, svg

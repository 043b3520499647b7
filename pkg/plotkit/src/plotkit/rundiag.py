"""Diagnostics panel (sup-norm, drifts, growth, orbit) for one run.csv."""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .csvio import SchemaError, apply_house_style, read_columns, save_png_svg

HEADER = ["t", "E", "M", "sup_u", "H", "orbital_dist"]


def plot_run(csv_path, out_path) -> dict:
    apply_house_style()
    import matplotlib.pyplot as plt

    cols = read_columns(csv_path, HEADER)
    t = cols["t"]
    fig, axes = plt.subplots(2, 2, figsize=(9.0, 6.4), sharex=True)

    ax = axes[0, 0]
    ax.plot(t, cols["sup_u"], "C0")
    ax.set_ylabel("sup |u|")

    ax = axes[0, 1]
    e0, m0 = cols["E"][0], cols["M"][0]
    ax.plot(t, cols["E"] - e0, "C1", label="E - E(0)")
    ax.plot(t, cols["M"] - m0, "C2", label="M - M(0)")
    ax.set_ylabel("conserved-quantity drift")
    ax.legend(fontsize=8)

    ax = axes[1, 0]
    ax.plot(t, cols["H"], "C3")
    ax.set_ylabel("H")
    ax.set_xlabel("t")

    ax = axes[1, 1]
    dist = cols["orbital_dist"]
    if np.all(np.isnan(dist)):
        ax.text(0.5, 0.5, "orbital distance not recorded",
                ha="center", va="center", transform=ax.transAxes, fontsize=9)
    else:
        ax.plot(t, dist, "C4")
    ax.set_ylabel("orbital distance")
    ax.set_xlabel("t")

    fig.tight_layout()
    png, svg = save_png_svg(fig, out_path)
    plt.close(fig)
    return {"t_final": float(t[-1]), "outputs": [str(png), str(svg)]}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description="Plot run.csv diagnostics.")
    parser.add_argument("csv", help="path to run.csv")
    parser.add_argument("-o", "--out", required=True, help="output image path")
    args = parser.parse_args(argv)
    try:
        summary = plot_run(args.csv, args.out)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print("wrote " + " and ".join(summary["outputs"]))
    return 0


if __name__ == "__main__":
    sys.exit(main())

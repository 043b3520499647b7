"""One stability-cubic curve per dispersion ratio, from gcurve.csv."""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .csvio import SchemaError, apply_house_style, read_columns

HEADER = ["z", "mu", "G"]


def plot_gcurves(csv_path, out_path) -> dict:
    """Render G(z) per mu; returns the curve ordering at the right endpoint."""
    apply_house_style()
    import matplotlib.pyplot as plt

    cols = read_columns(csv_path, HEADER)
    mus = sorted(set(cols["mu"]))
    fig, ax = plt.subplots(figsize=(6.4, 4.4))
    right_values = {}
    for mu in mus:
        mask = cols["mu"] == mu
        z = cols["z"][mask]
        g = cols["G"][mask]
        order = np.argsort(z)
        z, g = z[order], g[order]
        ax.plot(z, g, label=f"mu = {mu:g}")
        right_values[mu] = g[-1]
    ax.axhline(0.0, color="k", lw=0.8)
    ax.set_xlabel("z = c^2")
    ax.set_ylabel("G(z)")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    from .csvio import save_png_svg

    png, svg = save_png_svg(fig, out_path)
    plt.close(fig)
    top_to_bottom = sorted(mus, key=lambda m: -right_values[m])
    return {
        "mu_values": mus,
        "right_endpoint_values": right_values,
        "top_to_bottom_at_right": top_to_bottom,
        "outputs": [str(png), str(svg)],
    }


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description="Plot gcurve.csv (z, mu, G).")
    parser.add_argument("csv", help="path to gcurve.csv")
    parser.add_argument("-o", "--out", required=True, help="output image path")
    args = parser.parse_args(argv)
    try:
        summary = plot_gcurves(args.csv, args.out)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print("wrote " + " and ".join(summary["outputs"]))
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Root curves of the stability cubic in the (z, p) plane, from atlas.csv."""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .csvio import SchemaError, apply_house_style, read_columns, save_png_svg

ATLAS_HEADER = ["mu", "p", "z_root", "root_index"]
MUCRIT_HEADER = ["p", "mu_crit"]


def plot_atlas(atlas_csv, mucrit_csv, out_path) -> dict:
    """Render the zero-level curves per mu plus the critical-ratio branch."""
    apply_house_style()
    import matplotlib.pyplot as plt

    atlas = read_columns(atlas_csv, ATLAS_HEADER)
    mucrit = read_columns(mucrit_csv, MUCRIT_HEADER)
    mus = sorted(set(atlas["mu"]))
    fig, (ax_roots, ax_crit) = plt.subplots(
        1, 2, figsize=(9.6, 4.4), gridspec_kw={"width_ratios": [2, 1]}
    )
    roots_by_mu = {}
    for mu in mus:
        mask = atlas["mu"] == mu
        p = atlas["p"][mask]
        z = atlas["z_root"][mask]
        order = np.lexsort((z, p))
        pts = list(zip(p[order], z[order]))
        roots_by_mu[mu] = pts
        ax_roots.plot([zz for _, zz in pts], [pp for pp, _ in pts],
                      ".", ms=3, label=f"mu = {mu:g}")
    ax_roots.set_xlabel("z = c^2")
    ax_roots.set_ylabel("p")
    ax_roots.set_xlim(0.0, 1.0)
    ax_roots.legend(loc="best", fontsize=8)
    ax_crit.plot(mucrit["p"], mucrit["mu_crit"], "k.-", ms=3)
    ax_crit.set_xlabel("p")
    ax_crit.set_ylabel("critical mu")
    fig.tight_layout()
    png, svg = save_png_svg(fig, out_path)
    plt.close(fig)
    return {"roots_by_mu": roots_by_mu, "outputs": [str(png), str(svg)]}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description="Plot atlas.csv and mucrit.csv.")
    parser.add_argument("atlas", help="path to atlas.csv")
    parser.add_argument("mucrit", help="path to mucrit.csv")
    parser.add_argument("-o", "--out", required=True, help="output image path")
    args = parser.parse_args(argv)
    try:
        summary = plot_atlas(args.atlas, args.mucrit, args.out)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print("wrote " + " and ".join(summary["outputs"]))
    return 0


if __name__ == "__main__":
    sys.exit(main())

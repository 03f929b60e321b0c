#!/usr/bin/env python3
"""Render a QWCP binary carpet as a PNG density plot.

Usage: python scripts/plot_carpet.py carpet.qwcp [out.png]

Reads the .meta sidecar next to the binary for the grid extents.
"""

import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from movingwell.io_formats import read_carpet_binary


def plot(qwcp: Path, out: Path) -> None:
    dens, nx, nt = read_carpet_binary(qwcp)
    meta = {}
    meta_path = qwcp.with_suffix(".meta")
    if meta_path.exists():
        for line in meta_path.read_text().strip().splitlines():
            key, _, val = line.partition(" = ")
            meta[key.strip()] = val.strip()
    x_lo = float(meta.get("x_lo", 0.0))
    x_hi = float(meta.get("x_hi", 1.0))
    t_lo = float(meta.get("t_lo", 0.0))
    t_hi = float(meta.get("t_hi", 1.0))

    fig, ax = plt.subplots(figsize=(7, 5))
    im = ax.imshow(dens, origin="lower", aspect="auto",
                   extent=[x_lo, x_hi, t_lo, t_hi],
                   cmap="inferno",
                   vmax=np.percentile(dens, 99.5))
    ax.set_xlabel("x")
    ax.set_ylabel("t")
    ax.set_title(qwcp.stem)
    fig.colorbar(im, ax=ax, label=r"$|\psi|^2$")
    fig.tight_layout()
    fig.savefig(out, dpi=160)
    print(f"wrote {out}")


if __name__ == "__main__":
    if len(sys.argv) < 2:
        print(__doc__.strip(), file=sys.stderr)
        sys.exit(2)
    src = Path(sys.argv[1])
    dst = Path(sys.argv[2]) if len(sys.argv) > 2 else src.with_suffix(".png")
    plot(src, dst)

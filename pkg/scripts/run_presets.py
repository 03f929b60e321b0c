#!/usr/bin/env python3
"""Run the three bundled carpet presets (static, linear, sinusoidal wells).

Usage: python scripts/run_presets.py [output_dir]

Each run writes <name>.csv, <name>.qwcp and <name>.meta into the output
directory (default ./carpets); render them with scripts/plot_carpet.py.
"""

import os
import sys
from pathlib import Path

from movingwell.cli import main, preset_path

PRESETS = ["fig4.cfg", "fig8.cfg", "fig10.cfg"]


def run(outdir: Path) -> int:
    outdir.mkdir(parents=True, exist_ok=True)
    os.chdir(outdir)
    for name in PRESETS:
        print(f"=== {name} ===")
        code = main(["simulate", "--config", str(preset_path(name))])
        if code != 0:
            print(f"{name} failed with exit code {code}", file=sys.stderr)
            return code
    print(f"\nall carpets written to {outdir}")
    return 0


if __name__ == "__main__":
    target = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("carpets")
    sys.exit(run(target.resolve()))

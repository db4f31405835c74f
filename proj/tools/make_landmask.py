#!/usr/bin/env python3
"""Regenerate data/landmask_0p5.txt from the global-land-mask package.

A cell is marked land when at least half of a 6x6 grid of sample points
inside it is land. Rows run north to south, columns west to east starting
at longitude -180.
"""
import argparse

import numpy as np
from global_land_mask import globe


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--resolution", type=float, default=0.5)
    ap.add_argument("--out", default="data/landmask_0p5.txt")
    args = ap.parse_args()

    res = args.resolution
    rows = int(round(180 / res))
    cols = int(round(360 / res))
    sub = 6
    offs = (np.arange(sub) + 0.5) / sub * res

    with open(args.out, "w") as f:
        f.write(f"resolution_deg {res:g}\n")
        for r in range(rows):
            lat_top = 90 - r * res
            lats = np.clip(lat_top - offs, -89.999, 89.999)
            line = []
            for c in range(cols):
                lons = np.clip(-180 + c * res + offs, -179.999, 179.999)
                la, lo = np.meshgrid(lats, lons)
                frac = globe.is_land(la, lo).mean()
                line.append("1" if frac >= 0.5 else "0")
            f.write("".join(line) + "\n")


if __name__ == "__main__":
    main()

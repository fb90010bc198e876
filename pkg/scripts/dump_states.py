#!/usr/bin/env python3
"""Dump sampled reduced radial eigenfunctions u_{nm}(rho) as CSV for
external plotting.

Usage: python scripts/dump_states.py ho 0,0 2,0 3,1 > states.csv
       python scripts/dump_states.py ha 1,0 2,1 > states.csv
"""

import csv
import sys

from susy2d import numerics as nm
from susy2d.systems import SystemId


def main() -> int:
    if len(sys.argv) < 3:
        print(__doc__, file=sys.stderr)
        return 2
    sid = SystemId(sys.argv[1])
    labels = []
    for spec in sys.argv[2:]:
        n, m = (int(p) for p in spec.split(","))
        if not nm.allowed_state(sid, n, m):
            print(f"error: ({n}, {m}) is not a bound state of {sid.kind}",
                  file=sys.stderr)
            return 2
        labels.append((n, m))

    grid = nm.reference_grid(sid)
    states = [nm.analytic_state(sid, n, m, grid) for n, m in labels]

    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["rho"] + [f"u_{n}_{m}" for n, m in labels])
    for i, rho in enumerate(grid.r):
        writer.writerow([f"{rho:.8g}"] + [f"{s.u[i]:.12g}" for s in states])
    return 0


if __name__ == "__main__":
    sys.exit(main())

#!/usr/bin/env python3
"""Grid-refinement study for the radial eigensolver.

Prints the error of the lowest few levels against the closed-form energies
on a sequence of halved steps, together with the observed convergence ratio
(should approach 4 for a second-order scheme) and the Richardson-extrapolated
value.

Usage: python scripts/convergence_study.py [ho|ha] [m]
"""

import sys

from susy2d import numerics as nm
from susy2d.systems import SystemId


def main() -> int:
    kind = sys.argv[1] if len(sys.argv) > 1 else "ho"
    m = int(sys.argv[2]) if len(sys.argv) > 2 else 0
    sid = SystemId(kind)
    base = nm.reference_grid(sid)
    grids = [nm.RadialGrid(base.r_max, 1000), ]
    for _ in range(4):
        grids.append(grids[-1].refine())

    count = 4
    energies = [[e for e, _ in nm.eigensolve(sid, m, g, count)] for g in grids]

    print(f"# system={kind} m={m} r_max={base.r_max}")
    print(f"{'n_points':>9} " + " ".join(f"{'err level ' + str(i):>14}" for i in range(count)))
    for g, es in zip(grids, energies):
        errs = [abs(e - nm.analytic_energy(sid, nm._label_for(sid, m, i)))
                for i, e in enumerate(es)]
        print(f"{g.n_points:>9} " + " ".join(f"{e:>14.3e}" for e in errs))

    print("\n# observed convergence ratio (-> 4 for O(h^2)) and extrapolation")
    for i in range(count):
        e0, e1, e2 = energies[-3][i], energies[-2][i], energies[-1][i]
        extrap, ratio = nm.richardson(e0, e1, e2)
        exact = nm.analytic_energy(sid, nm._label_for(sid, m, i))
        print(f"level {i}: ratio {ratio:6.3f}  extrapolated err {abs(extrap - exact):.3e}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

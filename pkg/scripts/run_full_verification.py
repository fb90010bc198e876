#!/usr/bin/env python3
"""Run the complete verification battery and collect JSON reports.

Equivalent to calling the CLI four times; reports land in the directory
given by $SUSY2D_REPORT_DIR (default ./reports).

Usage: python scripts/run_full_verification.py
"""

import os
import sys

from susy2d.cli import main as cli


def main() -> int:
    os.environ.setdefault("SUSY2D_REPORT_DIR", "reports")
    jobs = [
        ["verify-symbolic", "--format", "json", "--out", "symbolic.json"],
        ["verify-numeric", "--format", "json", "--out", "numeric.json"],
        ["spectrum", "--system", "ho", "--format", "json", "--out", "spectrum_ho.json"],
        ["spectrum", "--system", "ha", "--format", "json", "--out", "spectrum_ha.json"],
        ["ladder-diagram", "--system", "ho", "--format", "json", "--out", "diagram_ho.json"],
        ["ladder-diagram", "--system", "ha", "--format", "json", "--out", "diagram_ha.json"],
    ]
    worst = 0
    for argv in jobs:
        code = cli(argv)
        print(f"{argv[0]:>16} ({' '.join(argv[1:])}): exit {code}")
        worst = max(worst, code)
    return worst


if __name__ == "__main__":
    sys.exit(main())

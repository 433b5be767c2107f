#!/usr/bin/env python3
"""Run the full default grid at the default budget and write ser_results.csv.

Thin wrapper over the `qslora sweep` entry point so the whole grid is one
command. Any extra arguments are forwarded, e.g.

    python scripts/run_full_grid.py --workers 8 -o results/full.csv
"""

import sys

from qslora.cli import main

if __name__ == "__main__":
    sys.exit(main(["sweep", *sys.argv[1:]]))

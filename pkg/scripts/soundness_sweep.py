#!/usr/bin/env python3
"""Run the full oracle verification sweep on the canonical supports.

Thin wrapper over ``kbounds verify --random``; exits nonzero if any bound is
violated beyond tolerance.  Pass extra CLI flags through, e.g.::

    python scripts/soundness_sweep.py --pmfs 2000 --seed 7
"""

import sys

from kbounds.cli import main

if __name__ == "__main__":
    sys.exit(main(["verify", "--random", *sys.argv[1:]]))

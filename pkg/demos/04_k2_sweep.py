"""Sweep the number of target intervals k2 with k1 fixed at 10.

Prints the equal-width and equal-frequency rule counts side by side and
marks where equal frequency finds more rules.  The sweep runs across
processes; the counts do not depend on how many.

    python demos/04_k2_sweep.py [processes]
"""

import sys

from _common import movielens

from granular_rules import Thresholds
from granular_rules.experiment import SweepConfig, run_sweep

workers = int(sys.argv[1]) if len(sys.argv) > 1 else 2
mmer = movielens()
th = Thresholds("0.08", "0.08", "0.15", "0.17")

curves = {}
for method in ("equal_width", "equal_frequency"):
    rows = run_sweep(mmer, SweepConfig((10, 10), (2, 30), method, th), workers=workers)
    curves[method] = {r.k2: r.rules for r in rows}

print(" k2    EW    EF")
for k2 in range(2, 31):
    ew, ef = curves["equal_width"][k2], curves["equal_frequency"][k2]
    bar = "#" * ef
    print(f"{k2:>3} {ew:>5} {ef:>5} {'*' if ef > ew else ' '} {bar}")
print("\n* equal frequency finds more rules")

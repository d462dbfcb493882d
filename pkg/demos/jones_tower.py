"""The Jones tower over the observables for Z2.

Each step multiplies the dimension by |G|^2 = 4.  The first three
levels are built and checked; the top two are bookkeeping only.
"""
import sys

from gspin.groups import build_group
from gspin.matrixfield import tower, tower_dimensions_ok, tower_table

spec = sys.argv[1] if len(sys.argv) > 1 else "cyclic:2"
levels = tower(build_group(spec), depth=4, battery_limit=300, iso_limit=300)
print(tower_table(levels))
print("dimensions grow by |G|^2:", tower_dimensions_ok(levels))

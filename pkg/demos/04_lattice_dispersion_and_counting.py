"""
Empty boxes among all lattice points, and counting errors
=========================================================

The largest empty box inside a growing window stays bounded for the golden
lattice but grows linearly for Z^2.  Counting errors of shifted cubes stay
small compared with the cube volume.
"""

from lattice_dispersion import golden_lattice, integer_lattice
from lattice_dispersion.experiments import boundedness_csv, boundedness_study, discrepancy_csv, discrepancy_study

# %%
print(boundedness_csv(boundedness_study(golden_lattice(), [4, 8, 16, 32])))
print(boundedness_csv(boundedness_study(integer_lattice(2), [4, 8, 16])))

# %%
rows = discrepancy_study(golden_lattice(), [10, 100, 1000, 10000], 50)
print(discrepancy_csv(rows))
worst = max(rows[-1].reports, key=lambda r: r.discrepancy)
print("worst box at volume 1e4:", worst.box, "count", worst.count, "expected", round(worst.expected, 3))

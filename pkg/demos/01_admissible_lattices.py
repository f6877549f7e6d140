"""
Admissible lattices
===================

Builds the three stock lattices, checks the coordinate-product minimum on a
finite window, and looks at the dual lattice.
"""

import numpy as np

from lattice_dispersion import Box, dual, frolov_lattice, golden_lattice, integer_lattice, nm_empirical
from lattice_dispersion.enumeration import enumerate_box

# %%
# The golden lattice: points (a + b*phi, a + b*(1 - phi)).
golden = golden_lattice()
print(golden)
print("generator:\n", golden.generator)
print("Nm on [-20, 20]^2:", nm_empirical(golden, 20.0))

# %%
# Frolov lattices come from the roots of prod (x - (2j - 1)) - 1.
for d in (2, 3, 4):
    lat = frolov_lattice(d)
    window = 20.0 if d < 4 else 6.0
    print(f"frolov({d}): det={lat.det_abs:.6g}  Nm on window={nm_empirical(lat, window):.12f}")

# %%
# Z^2 is the non-admissible control: (1, 0) has coordinate product 0.
print("Nm(Z^2) on [-5, 5]^2:", nm_empirical(integer_lattice(2), 5.0))

# %%
# Coordinate products of all nonzero golden points in a window are integers.
coeffs, pts = enumerate_box(golden, Box.cube(2, 10.0))
nonzero = pts[np.any(coeffs != 0, axis=1)]
prods = np.abs(np.prod(nonzero, axis=1))
print("smallest products:", np.round(np.sort(prods)[:8], 12))

# %%
# Duals keep admissibility (positive Nm on every window tried) but lose the
# certificate.
for lat in (golden, frolov_lattice(2), frolov_lattice(3)):
    D = dual(lat)
    print(D.provenance, [round(nm_empirical(D, M), 6) for M in (10.0, 20.0)], "det*det* =", lat.det_abs * D.det_abs)

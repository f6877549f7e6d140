"""
Exactly N points in the unit cube
=================================

Dilates a lattice by a vector t so that [0, t] holds exactly N lattice
points, then rescales into [0, 1]^d.  Also runs the partition check that
bounds N by 2 n(t).
"""

from lattice_dispersion import find_t_for_N, golden_lattice, n_of, partition_bound_check, point_set_for_N
from lattice_dispersion.dilation import format_point_set

lat = golden_lattice()

# %%
for N in (1, 2, 5, 10, 50, 200):
    t = find_t_for_N(lat, N)
    ps = point_set_for_N(lat, N)
    rep = partition_bound_check(lat, t, N) if N >= 2 else None
    extra = "" if rep is None else f"  cells={rep.n_cells} occupancy={rep.occupancy}"
    print(f"N={N:4d}  t={t.round(4).tolist()}  n(t)={n_of(t):9.3f}  #P_N={ps.N}{extra}")

# %%
# The point-set file format used by the command line tool.
print(format_point_set(point_set_for_N(lat, 6)))

"""
Dispersion of P_N decays like 1/N
=================================

Computes the exact largest empty box of P_N for growing N and fits the
log-log slope.  N * disp(P_N) stays close to a constant.
"""

from lattice_dispersion import frolov_lattice, golden_lattice
from lattice_dispersion.experiments import scaling_csv, scaling_slope, scaling_study

Ns = [16, 32, 64, 128, 256, 512, 1024]

# %%
for lat in (golden_lattice(), frolov_lattice(2)):
    rows = scaling_study(lat, Ns)
    print(lat.provenance, "slope:", round(scaling_slope(rows), 4))
    print(scaling_csv(rows))

# %%
# A 3-dimensional Frolov lattice; the exact solver limits N here.
rows = scaling_study(frolov_lattice(3), [8, 16, 32, 64])
print("frolov(3) slope:", round(scaling_slope(rows), 4))
for r in rows:
    print(r.N, round(r.n_times_disp, 4), r.witness)

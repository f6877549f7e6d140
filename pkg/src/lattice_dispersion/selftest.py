"""Fast invariant checks run by ``lattice-dispersion selftest``.

Each check returns normally or raises; ``run_selftest`` collects failures as
strings so the CLI can map them to exit code 2.
"""

from __future__ import annotations

import numpy as np

from .config import DEFAULT
from .dilation import dilate, find_t_for_N, partition_bound_check, point_set_for_N
from .dispersion import branch_nd, grid_oracle, lattice_dispersion_in_box, sweep2d, windowed_lattice_dispersion
from .enumeration import Box, enumerate_box
from .lattice import dual, frolov_lattice, golden_lattice, integer_lattice, nm_empirical


def _check_certificates():
    for lat in (golden_lattice(), frolov_lattice(2), frolov_lattice(3)):
        _, pts = enumerate_box(lat, Box.cube(lat.dim, 10.0))
        nonzero = pts[np.any(pts != 0.0, axis=1)]
        prods = np.prod(np.abs(nonzero), axis=1)
        assert prods.min() >= lat.nm_certified - DEFAULT.cert_slack, lat
        for j in range(lat.dim):
            col = np.sort(pts[:, j])
            assert np.all(np.diff(col) > DEFAULT.coord_gap), f"coordinate collision in {lat}"


def _check_duality():
    for lat in (golden_lattice(), frolov_lattice(2), frolov_lattice(3)):
        back = dual(dual(lat))
        assert np.allclose(back.generator, lat.generator, rtol=0, atol=DEFAULT.linalg_tol)
        assert abs(dual(lat).det_abs * lat.det_abs - 1.0) < DEFAULT.linalg_tol
        assert nm_empirical(dual(lat), 10.0) > 0.0


def _check_construction():
    lat = golden_lattice()
    for N in (1, 2, 3, 17, 64):
        t = find_t_for_N(lat, N)
        assert point_set_for_N(lat, N).N == N
        if N >= 2:
            partition_bound_check(lat, t, N)


def _check_solvers(seed: int):
    rng = np.random.default_rng(seed)
    unit = Box.unit(2)
    for _ in range(10):
        pts = rng.random((int(rng.integers(1, 30)), 2))
        a = sweep2d(pts, unit)
        b = branch_nd(pts, unit)
        g = grid_oracle(pts, unit, 128)
        assert abs(a.volume - b.volume) <= 1e-12
        assert g.volume <= a.volume + 1e-12 and a.volume - g.volume <= 4 / 128


def _check_homogeneity(seed: int):
    rng = np.random.default_rng(seed)
    lat = golden_lattice()
    t = rng.uniform(0.5, 2.0, size=2)
    M = 4.0
    scaled = windowed_lattice_dispersion(dilate(lat, t), M).volume * float(np.prod(t))
    direct = lattice_dispersion_in_box(lat, Box(-M * t, M * t)).volume
    assert abs(scaled - direct) <= 1e-9 * direct


def _check_negative_control():
    a = windowed_lattice_dispersion(integer_lattice(2), 4.0).volume
    b = windowed_lattice_dispersion(integer_lattice(2), 8.0).volume
    assert b / a >= 1.8


def run_selftest(seed: int = DEFAULT.seed) -> list[str]:
    checks = {
        "certificates": _check_certificates,
        "duality": _check_duality,
        "construction": _check_construction,
        "solvers": lambda: _check_solvers(seed),
        "homogeneity": lambda: _check_homogeneity(seed),
        "negative_control": _check_negative_control,
    }
    failures = []
    for name, check in checks.items():
        try:
            check()
        except AssertionError as exc:
            failures.append(f"{name}: {exc}")
    return failures

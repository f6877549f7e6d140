import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lattice_dispersion import (
    Box,
    BudgetExceededError,
    PointSet,
    branch_nd,
    dilate,
    dispersion,
    golden_lattice,
    grid_oracle,
    integer_lattice,
    largest_empty_box,
    lattice_dispersion_in_box,
    point_set_for_N,
    sweep2d,
    windowed_lattice_dispersion,
)
from oracles import brute_force_empty_box


def assert_valid_witness(result, points, domain, check_maximal=True):
    w = result.witness
    assert result.volume == w.volume
    assert np.all(w.lower >= domain.lower) and np.all(w.upper <= domain.upper)
    pts = np.asarray(points, dtype=float).reshape(-1, domain.dim)
    if len(pts):
        assert not w.interior_contains(pts).any()
    if not check_maximal or result.volume == 0.0:
        return
    eps = 1e-6
    for j in range(domain.dim):
        for side in (0, 1):
            lo, hi = w.lower.copy(), w.upper.copy()
            if side == 0:
                lo[j] -= eps
                exits = lo[j] < domain.lower[j]
            else:
                hi[j] += eps
                exits = hi[j] > domain.upper[j]
            grown = Box(lo, hi)
            captures = len(pts) > 0 and grown.interior_contains(pts).any()
            assert exits or captures, (j, side, w)


@pytest.mark.parametrize("d", [1, 2, 3])
def test_empty_point_set_gives_domain(d):
    res = largest_empty_box(np.zeros((0, d)), Box.unit(d))
    assert res.volume == 1.0
    assert res.witness == Box.unit(d)
    assert res.certified_exact


def test_single_centre_point():
    pts = [[0.5, 0.5]]
    for solver in (sweep2d, branch_nd):
        res = solver(pts, Box.unit(2))
        assert res.volume == 0.5
        # tie-break picks the lexicographically smallest witness
        assert res.witness == Box([0.0, 0.0], [0.5, 1.0])
    g = grid_oracle(pts, Box.unit(2), 512)
    assert abs(g.volume - 0.5) <= 1 / 256
    assert not g.certified_exact


def test_equispaced_line():
    ps = PointSet(1, [[0.0], [0.25], [0.5], [0.75], [1.0]])
    res = dispersion(ps)
    assert res.volume == 0.25
    assert res.algorithm == "branch_nd"


def test_origin_on_corner_does_not_block():
    res = dispersion(PointSet(2, [[0.0, 0.0]]))
    assert res.volume == 1.0
    assert res.witness == Box.unit(2)


def test_points_on_boundary_are_allowed():
    pts = [[0.0, 0.3], [1.0, 0.6], [0.4, 0.0], [0.7, 1.0]]
    assert sweep2d(pts, Box.unit(2)).volume == 1.0
    assert branch_nd(pts, Box.unit(2)).volume == 1.0


def test_points_outside_domain_rejected():
    with pytest.raises(ValueError):
        sweep2d([[1.5, 0.5]], Box.unit(2))


def test_budgets():
    with pytest.raises(BudgetExceededError):
        branch_nd(np.random.default_rng(0).random((301, 3)), Box.unit(3))
    with pytest.raises(BudgetExceededError):
        grid_oracle([[0.5] * 4], Box.unit(4), 8)
    with pytest.raises(BudgetExceededError):
        grid_oracle([[0.5, 0.5]], Box.unit(2), 2048)


def test_twenty_random_points_three_ways():
    pts = np.random.default_rng(7).random((20, 2))
    a = sweep2d(pts, Box.unit(2))
    b = branch_nd(pts, Box.unit(2))
    g = grid_oracle(pts, Box.unit(2), 512)
    assert a.volume == b.volume
    assert a.witness == b.witness
    assert g.volume <= a.volume + 1e-12
    assert a.volume - g.volume <= 4 / 512


@settings(max_examples=80, deadline=None)
@given(
    d=st.integers(1, 3),
    data=st.data(),
)
def test_exact_solvers_match_brute_force(d, data):
    n = data.draw(st.integers(0, 6 if d == 3 else 9))
    # coarse grid coordinates force ties and boundary contacts
    coords = data.draw(st.lists(st.integers(0, 6), min_size=n * d, max_size=n * d))
    pts = np.array(coords, dtype=float).reshape(n, d) / 6.0
    domain = Box.unit(d)
    expected = brute_force_empty_box(pts, [0.0] * d, [1.0] * d)
    b = branch_nd(pts, domain)
    assert b.volume == pytest.approx(expected, abs=1e-12)
    assert_valid_witness(b, pts, domain)
    if d == 2:
        s = sweep2d(pts, domain)
        assert s.volume == b.volume
        assert s.witness == b.witness
        assert_valid_witness(s, pts, domain)
    g = grid_oracle(pts, domain, 12)
    assert g.volume <= b.volume + 1e-12
    if n:
        assert not g.witness.interior_contains(pts).any()


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.floats(0, 1), st.floats(0, 1)), min_size=1, max_size=60))
def test_sweep_witness_valid_and_maximal(points):
    pts = np.array(points)
    res = sweep2d(pts, Box.unit(2))
    assert_valid_witness(res, pts, Box.unit(2))
    assert res.volume == branch_nd(pts, Box.unit(2)).volume


def test_non_unit_domain():
    pts = np.array([[1.0, -2.0], [3.0, 4.0], [-1.0, 0.5]])
    dom = Box([-2.0, -3.0], [4.0, 5.0])
    a = sweep2d(pts, dom)
    b = branch_nd(pts, dom)
    assert a.volume == b.volume == pytest.approx(brute_force_empty_box(pts, dom.lower, dom.upper))
    g = grid_oracle(pts, dom, 64)
    assert g.volume <= a.volume + 1e-12


def test_golden_P5_against_grid_oracle():
    ps = point_set_for_N(golden_lattice(), 5)
    res = dispersion(ps)
    assert 0.0 < res.volume < 1.0
    g = grid_oracle(ps.points, Box.unit(2), 512)
    assert res.volume - g.volume <= 2 / 512
    assert g.volume <= res.volume + 1e-12


def test_grid_oracle_empty_is_exact():
    dom = Box([0.0, 0.0, 0.0], [2.0, 1.0, 3.0])
    assert grid_oracle(np.zeros((0, 3)), dom, 16).volume == 6.0


def test_windowed_integer_line():
    assert windowed_lattice_dispersion(integer_lattice(1), 10.0).volume == 1.0


def test_windowed_integer_plane_grows():
    v4 = windowed_lattice_dispersion(integer_lattice(2), 4.0).volume
    v8 = windowed_lattice_dispersion(integer_lattice(2), 8.0).volume
    assert (v4, v8) == (8.0, 16.0)


def test_windowed_golden_bounded_and_monotone():
    vals = [windowed_lattice_dispersion(golden_lattice(), M).volume for M in (2.0, 4.0, 8.0, 16.0, 32.0)]
    assert vals == sorted(vals)
    for a, b in zip(vals[2:], vals[3:]):
        assert b / a <= 1.5


@pytest.mark.parametrize("seed", range(5))
def test_homogeneity(seed):
    rng = np.random.default_rng(seed)
    lat = golden_lattice()
    t = rng.uniform(0.3, 3.0, size=2)
    M = 5.0
    lhs = windowed_lattice_dispersion(dilate(lat, t), M).volume * float(np.prod(t))
    rhs = lattice_dispersion_in_box(lat, Box(-M * t, M * t)).volume
    assert lhs == pytest.approx(rhs, rel=1e-9)


def test_result_json():
    res = sweep2d([[0.5, 0.5]], Box.unit(2))
    data = json.loads(res.to_json())
    assert data == {
        "volume": 0.5,
        "witness": {"lower": [0.0, 0.0], "upper": [0.5, 1.0]},
        "algorithm": "sweep2d",
        "certified_exact": True,
    }

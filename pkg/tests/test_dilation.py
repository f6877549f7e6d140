import math
from dataclasses import replace

import numpy as np
import pytest

from lattice_dispersion import (
    Box,
    InvariantViolation,
    PointSet,
    count_in_box,
    dilate,
    find_t_for_N,
    frolov_lattice,
    golden_lattice,
    integer_lattice,
    n_of,
    partition_bound_check,
    point_set_for_N,
    points_in_box,
    restrict_unit_cube,
)
from lattice_dispersion.dilation import format_point_set, parse_point_set
from oracles import brute_force_points


def test_identity_dilation():
    lat = golden_lattice()
    same = dilate(lat, [1.0, 1.0])
    assert np.array_equal(same.generator, lat.generator)
    assert same.det_abs == lat.det_abs and same.nm_certified == lat.nm_certified


def test_golden_dilation_by_two():
    lat = dilate(golden_lattice(), [2.0, 2.0])
    assert lat.det_abs == pytest.approx(math.sqrt(5) / 4)
    assert lat.nm_certified == 0.25
    assert lat.dilation == (2.0, 2.0)


def test_integer_dilation():
    lat = dilate(integer_lattice(1), [10.0])
    assert lat.det_abs == pytest.approx(0.1)
    assert lat.point([3]) == pytest.approx([0.3], abs=1e-15)


def test_dilation_composes():
    lat = dilate(dilate(golden_lattice(), [2.0, 3.0]), [0.5, 2.0])
    assert lat.dilation == (1.0, 6.0)


def test_zero_component_rejected():
    with pytest.raises(ValueError):
        dilate(golden_lattice(), [1.0, 0.0])


@pytest.mark.parametrize("t", [[0.3, 7.0], [-2.0, 1.5], [10.0, 0.01]])
def test_scaling_law(t):
    lat = golden_lattice()
    D = dilate(lat, t)
    assert D.det_abs * n_of(t) == pytest.approx(lat.det_abs, rel=1e-10)


def test_restrict_integer_line():
    ps = restrict_unit_cube(dilate(integer_lattice(1), [4.0]))
    assert ps.points[:, 0].tolist() == [0.0, 0.25, 0.5, 0.75, 1.0]
    assert ps.N == 5 and ps.t == (4.0,)


def test_restrict_golden_matches_square_count():
    ps = restrict_unit_cube(dilate(golden_lattice(), [3.0, 3.0]))
    expected = brute_force_points(golden_lattice().generator, [0, 0], [3, 3], 10)
    assert ps.N == len(expected) == 6
    assert np.all((ps.points >= 0) & (ps.points <= 1))


def test_huge_t_keeps_origin():
    ps = restrict_unit_cube(dilate(golden_lattice(), [1e-3, 1e-3]))
    assert ps.N >= 1
    assert [0.0, 0.0] in ps.points.tolist()


def test_find_t_integer_line():
    t = find_t_for_N(integer_lattice(1), 7)
    assert t.tolist() == [6.5]
    assert count_in_box(integer_lattice(1), Box([0.0], t)) == 7


def test_find_t_golden_five():
    lat = golden_lattice()
    t = find_t_for_N(lat, 5)
    assert np.all(t > 0)
    R = 40
    assert len(brute_force_points(lat.generator, [0, 0], t, R)) == 5


def test_n_t_exceeds_nm_for_two_points():
    lat = golden_lattice()
    t = find_t_for_N(lat, 2)
    assert n_of(t) > lat.nm_certified


def test_find_t_requires_certificate():
    with pytest.raises(ValueError):
        find_t_for_N(integer_lattice(2), 4)
    with pytest.raises(ValueError):
        find_t_for_N(golden_lattice(), 0)


@pytest.mark.parametrize("make", [golden_lattice, lambda: frolov_lattice(2)])
def test_exact_cardinality_up_to_200(make):
    lat = make()
    for N in range(1, 201):
        ps = point_set_for_N(lat, N)
        assert ps.N == N
        assert ps.points[0].tolist() == [0.0] * lat.dim


def test_exact_cardinality_frolov3():
    lat = frolov_lattice(3)
    for N in (1, 2, 10, 50):
        assert point_set_for_N(lat, N).N == N


@pytest.mark.parametrize("make", [golden_lattice, lambda: frolov_lattice(2), lambda: frolov_lattice(3)])
def test_sweep_entry_events_are_separated(make):
    lat = make()
    t = find_t_for_N(lat, 120)
    lam = t[-1]
    upper = np.full(lat.dim, lam)
    upper[0] = 64 * lam
    xs = np.sort(points_in_box(lat, Box(np.zeros(lat.dim), upper))[:, 0])
    assert len(xs) >= 121
    assert np.all(np.diff(xs) > 1e-9)
    # the cut sits strictly between the 120th and 121st entry
    assert xs[119] < t[0] < xs[120]


def test_partition_integer_line():
    rep = partition_bound_check(integer_lattice(1), [2.5], 3)
    assert rep.ok and rep.n_cells == 3 and rep.max_occupancy == 1
    assert rep.cell_volume < 1.0


def test_partition_golden_ten():
    lat = golden_lattice()
    t = find_t_for_N(lat, 10)
    rep = partition_bound_check(lat, t, 10)
    assert rep.max_occupancy <= 1
    assert 10 <= 2 * rep.n_t
    assert rep.n_cells <= rep.n_t / lat.nm_certified + 1


def test_partition_frolov_64():
    lat = frolov_lattice(2)
    rep = partition_bound_check(lat, find_t_for_N(lat, 64), 64)
    assert set(rep.occupancy) <= {0, 1}


def test_partition_rejects_wrong_N():
    lat = golden_lattice()
    with pytest.raises(ValueError):
        partition_bound_check(lat, find_t_for_N(lat, 10), 11)


def test_partition_detects_bad_certificate():
    lat = golden_lattice()
    t = find_t_for_N(lat, 40)
    liar = replace(lat, nm_certified=50.0)
    with pytest.raises(InvariantViolation):
        partition_bound_check(liar, t, 40)


def test_point_set_file_round_trip(tmp_path):
    ps = point_set_for_N(golden_lattice(), 32)
    path = tmp_path / "p.txt"
    ps.write(path)
    text = path.read_text()
    assert text.startswith("# d=2 n=32 t=")
    assert len(text.strip().splitlines()) == 33
    back = PointSet.read(path)
    assert np.array_equal(back.points, ps.points)
    assert back.t == ps.t


def test_point_set_parse_errors():
    with pytest.raises(ValueError):
        parse_point_set("0.1 0.2\n")
    with pytest.raises(ValueError):
        parse_point_set("# d=2 n=2 t=1,1\n0.1 0.2\n")
    with pytest.raises(ValueError):
        parse_point_set("# d=2 n=1 t=1,1\n0.1\n")


def test_format_uses_17_digits():
    ps = PointSet(1, [[1 / 3]], "x", (3.0,))
    assert format_point_set(ps).splitlines()[1] == f"{1/3:.17g}"

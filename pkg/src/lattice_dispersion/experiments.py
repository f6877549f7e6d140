"""Study harnesses: dispersion scaling in N, windowed lattice-dispersion
growth in M, and counting discrepancy of shifted cubes.

Every study returns rows sorted by its parameter and has a CSV writer with
a fixed header and 17-significant-digit numbers.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT, Config
from .dilation import find_t_for_N, n_of, point_set_for_N
from .dispersion import dispersion, windowed_lattice_dispersion
from .enumeration import Box, CountingReport, counting_discrepancy
from .lattice import Lattice


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


@dataclass(frozen=True)
class ScalingRow:
    N: int
    n_t: float
    disp: float
    n_times_disp: float
    witness: Box

    def to_dict(self) -> dict:
        return {
            "N": self.N,
            "n_t": self.n_t,
            "disp": self.disp,
            "n_times_disp": self.n_times_disp,
            "witness": self.witness.to_dict(),
        }


def scaling_study(lattice: Lattice, N_list, config: Config = DEFAULT) -> list[ScalingRow]:
    """Exact dispersion of ``P_N`` for each ``N``; ``N * disp`` should stay bounded."""
    rows = []
    for N in sorted(set(int(v) for v in N_list)):
        t = find_t_for_N(lattice, N, config)
        ps = point_set_for_N(lattice, N, config)
        res = dispersion(ps, config)
        rows.append(ScalingRow(N, n_of(t), res.volume, N * res.volume, res.witness))
    return rows


def scaling_slope(rows) -> float:
    """Least-squares slope of ``log disp`` against ``log N``."""
    x = np.log([r.N for r in rows])
    y = np.log([r.disp for r in rows])
    return float(np.polyfit(x, y, 1)[0])


def scaling_csv(rows) -> str:
    return _csv(("N", "n_t", "disp", "n_times_disp"), [(r.N, _fmt(r.n_t), _fmt(r.disp), _fmt(r.n_times_disp)) for r in rows])


@dataclass(frozen=True)
class BoundednessRow:
    M: float
    disp_star_window: float
    growth_ratio: float
    witness: Box


def boundedness_study(lattice: Lattice, M_list, config: Config = DEFAULT) -> list[BoundednessRow]:
    """Windowed lattice-dispersion for growing windows.

    ``growth_ratio`` is the value divided by the previous row's value
    (``nan`` for the first row).
    """
    rows = []
    prev = None
    for M in sorted(set(float(v) for v in M_list)):
        res = windowed_lattice_dispersion(lattice, M, config)
        ratio = math.nan if prev is None else res.volume / prev
        rows.append(BoundednessRow(M, res.volume, ratio, res.witness))
        prev = res.volume
    return rows


def max_growth_ratio(rows) -> float:
    ratios = [r.growth_ratio for r in rows if not math.isnan(r.growth_ratio)]
    return max(ratios) if ratios else 1.0


def boundedness_csv(rows) -> str:
    return _csv(("M", "disp_star_window", "growth_ratio"), [(_fmt(r.M), _fmt(r.disp_star_window), _fmt(r.growth_ratio)) for r in rows])


@dataclass(frozen=True)
class DiscrepancyRow:
    vol: float
    max_discrepancy: float
    max_log_bound_ratio: float
    reports: tuple[CountingReport, ...] = field(default=(), repr=False)


def discrepancy_study(
    lattice: Lattice,
    volumes,
    shifts_per_volume: int,
    seed: int | None = None,
    shift_range: float = 100.0,
    config: Config = DEFAULT,
) -> list[DiscrepancyRow]:
    """Counting discrepancy of cubes ``x + [0, v^{1/d}]^d`` at random shifts.

    Shifts are drawn uniformly from ``[-shift_range, shift_range]^d`` with a
    seeded generator, one independent stream per volume so the rows do not
    depend on the order of ``volumes``.
    """
    seed = config.seed if seed is None else seed
    d = lattice.dim
    rows = []
    for v in sorted(set(float(x) for x in volumes)):
        side = v ** (1.0 / d)
        rng = np.random.default_rng([seed, int(np.float64(v).view(np.uint64))])
        shifts = rng.uniform(-shift_range, shift_range, size=(shifts_per_volume, d))
        reports = tuple(counting_discrepancy(lattice, Box(x, x + side), config) for x in shifts)
        rows.append(
            DiscrepancyRow(
                v,
                max(r.discrepancy for r in reports),
                max(r.log_bound_ratio for r in reports),
                reports,
            )
        )
    return rows


def discrepancy_csv(rows) -> str:
    return _csv(
        ("vol", "max_discrepancy", "max_log_bound_ratio"),
        [(_fmt(r.vol), _fmt(r.max_discrepancy), _fmt(r.max_log_bound_ratio)) for r in rows],
    )

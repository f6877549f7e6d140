"""Dilated lattices ``t^{-1} L`` and N-point sets in the unit cube.

``find_t_for_N`` picks a box ``[0, t]`` containing exactly ``N`` lattice
points; dividing by ``t`` then places exactly those points in ``[0, 1]^d``.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .config import DEFAULT, BudgetExceededError, Config, InvariantViolation
from .enumeration import Box, count_in_box, points_in_box
from .lattice import Lattice


def n_of(t) -> float:
    """Volume of ``[0, t]``."""
    return math.prod(abs(float(v)) for v in t)


@dataclass(frozen=True, eq=False)
class PointSet:
    """Finite point set in ``[0, 1]^d`` with the lattice and ``t`` it came from."""

    dim: int
    points: np.ndarray
    lattice_provenance: str = "unknown"
    t: tuple[float, ...] | None = None

    def __post_init__(self):
        pts = np.array(self.points, dtype=float).reshape(-1, self.dim)
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        if self.t is not None:
            object.__setattr__(self, "t", tuple(float(v) for v in self.t))

    @property
    def N(self) -> int:
        return len(self.points)

    def __len__(self) -> int:
        return len(self.points)

    def write(self, path) -> None:
        Path(path).write_text(format_point_set(self))

    @classmethod
    def read(cls, path) -> "PointSet":
        return parse_point_set(Path(path).read_text())


def format_point_set(ps: PointSet) -> str:
    t = ",".join(f"{v:.17g}" for v in ps.t) if ps.t is not None else ""
    lines = [f"# d={ps.dim} n={ps.N} t={t}"]
    lines.extend(" ".join(f"{v:.17g}" for v in p) for p in ps.points)
    return "\n".join(lines) + "\n"


def parse_point_set(text: str) -> PointSet:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("#"):
        raise ValueError("point set file must start with a '# d=.. n=.. t=..' header")
    fields = dict(tok.split("=", 1) for tok in lines[0][1:].split() if "=" in tok)
    try:
        d = int(fields["d"])
        n = int(fields["n"])
    except (KeyError, ValueError) as exc:
        raise ValueError(f"malformed header: {lines[0]!r}") from exc
    t = tuple(float(v) for v in fields["t"].split(",")) if fields.get("t") else None
    rows = [[float(v) for v in ln.split()] for ln in lines[1:]]
    if len(rows) != n:
        raise ValueError(f"header announces n={n} points but file has {len(rows)}")
    if any(len(r) != d for r in rows):
        raise ValueError(f"every point must have {d} coordinates")
    return PointSet(d, np.array(rows).reshape(-1, d), "file", t)


def dilate(lattice: Lattice, t) -> Lattice:
    """``t^{-1} L``: coordinate ``j`` of every point divided by ``t_j``."""
    t = np.asarray(t, dtype=float).reshape(-1)
    if t.shape != (lattice.dim,):
        raise ValueError(f"t must have {lattice.dim} components")
    if np.any(t == 0.0):
        raise ValueError("dilation vector has a zero component")
    n_t = n_of(t)
    total = t if lattice.dilation is None else t * np.asarray(lattice.dilation)
    return Lattice(
        lattice.dim,
        lattice.generator / t[:, None],
        lattice.det_abs / n_t,
        lattice.nm_certified / n_t,
        lattice.provenance,
        tuple(total),
    )


def restrict_unit_cube(dilated: Lattice, config: Config = DEFAULT) -> PointSet:
    """The point set ``dilated ∩ [0, 1]^d``."""
    pts = points_in_box(dilated, Box.unit(dilated.dim), config)
    return PointSet(dilated.dim, pts, dilated.provenance, dilated.dilation)


def _slab(lattice: Lattice, lam: float, config: Config) -> np.ndarray:
    d = lattice.dim
    upper = np.full(d, lam)
    upper[0] = config.slab_factor * lam
    return points_in_box(lattice, Box(np.zeros(d), upper), config)


def find_t_for_N(lattice: Lattice, N: int, config: Config = DEFAULT) -> np.ndarray:
    """A vector ``t > 0`` with exactly ``N`` lattice points in ``[0, t]``.

    Axes ``2..d`` are fixed at a common side ``lam`` found by doubling until
    the slab ``[0, 64 lam] x [0, lam]^{d-1}`` holds at least ``N + 1``
    points.  Admissibility makes the first coordinates of those points
    pairwise distinct, so cutting axis 1 halfway between the ``N``-th and
    ``(N+1)``-th smallest of them leaves exactly ``N`` points.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    if not lattice.is_certified:
        raise ValueError(
            f"find_t_for_N needs an admissible lattice (nm_certified > 0); {lattice.provenance} has none"
        )
    d = lattice.dim
    lam = 1.0
    while True:
        pts = _slab(lattice, lam, config)
        if len(pts) >= N + 1:
            break
        lam *= 2.0
        if not math.isfinite(lam) or lam > 1e150:
            raise BudgetExceededError("slab doubling did not reach N + 1 points")

    xs = np.sort(pts[:, 0])
    gaps = np.diff(xs)
    if np.any(gaps <= config.coord_gap):
        raise InvariantViolation(
            f"two slab points share the first coordinate within {config.coord_gap} (min gap {gaps.min():.3g})"
        )
    t = np.full(d, lam)
    t[0] = 0.5 * (xs[N - 1] + xs[N])
    got = count_in_box(lattice, Box(np.zeros(d), t), config)
    if got != N:
        raise InvariantViolation(f"constructed t encloses {got} points, expected {N}")
    return t


def point_set_for_N(lattice: Lattice, N: int, config: Config = DEFAULT) -> PointSet:
    """``P_N = (t_N^{-1} L) ∩ [0, 1]^d`` with ``#P_N = N``."""
    t = find_t_for_N(lattice, N, config)
    ps = restrict_unit_cube(dilate(lattice, t), config)
    if ps.N != N:
        raise InvariantViolation(f"P_N has {ps.N} points after dilation, expected {N}")
    return ps


@dataclass(frozen=True)
class PartitionReport:
    N: int
    n_t: float
    n_cells: int
    cell_volume: float
    occupancy: dict = field(default_factory=dict)

    @property
    def max_occupancy(self) -> int:
        return max(self.occupancy) if self.occupancy else 0

    @property
    def ok(self) -> bool:
        cells_ok = self.max_occupancy <= 1
        bound_ok = self.N <= 2.0 * self.n_t if self.N >= 2 else True
        return cells_ok and bound_ok


def partition_bound_check(lattice: Lattice, t, N: int, config: Config = DEFAULT) -> PartitionReport:
    """Slice ``[0, t]`` along axis 1 into cells of volume below Nm and count points.

    A cell of volume less than Nm holds at most one lattice point, so the
    ``floor(n(t)/Nm) + 1`` cells bound ``N`` by ``n(t)/Nm + 1``, which is at
    most ``2 n(t)`` once ``n(t) > Nm``.  Cells are half-open on axis 1 except
    the last, so boundary points are counted once.
    """
    if not lattice.is_certified:
        raise ValueError("partition check needs nm_certified > 0")
    t = np.asarray(t, dtype=float)
    box = Box(np.zeros(lattice.dim), t)
    pts = points_in_box(lattice, box, config)
    if len(pts) != N:
        raise ValueError(f"[0, t] holds {len(pts)} points, not N={N}")
    n_t = n_of(t)
    nm = lattice.nm_certified
    n_cells = int(math.floor(n_t / nm)) + 1
    width = t[0] / n_cells
    cell_index = np.clip(np.floor(pts[:, 0] / width).astype(np.int64), 0, n_cells - 1)
    per_cell = np.bincount(cell_index, minlength=n_cells)
    occupancy = dict(sorted(Counter(per_cell.tolist()).items()))
    report = PartitionReport(N, n_t, n_cells, n_t / n_cells, occupancy)
    if not report.ok:
        raise InvariantViolation(
            f"partition check failed: occupancy {occupancy}, N={N}, 2*n(t)={2 * n_t:.6g}"
        )
    return report

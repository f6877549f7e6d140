"""Lattice points in axis-parallel boxes and their counting discrepancy."""

from __future__ import annotations

import csv
import io
import itertools
import math
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT, BudgetExceededError, Config
from .lattice import Lattice

_CHUNK = 1 << 20


@dataclass(frozen=True, eq=False)
class Box:
    """Closed axis-parallel box ``[lower_1, upper_1] x ... x [lower_d, upper_d]``."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lo = np.atleast_1d(np.array(self.lower, dtype=float))
        hi = np.atleast_1d(np.array(self.upper, dtype=float))
        if lo.shape != hi.shape or lo.ndim != 1:
            raise ValueError("lower and upper must be 1-d vectors of equal length")
        if np.any(lo > hi):
            raise ValueError(f"box has lower > upper: {lo} vs {hi}")
        lo.setflags(write=False)
        hi.setflags(write=False)
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @classmethod
    def unit(cls, d: int) -> "Box":
        return cls(np.zeros(d), np.ones(d))

    @classmethod
    def cube(cls, d: int, half_width: float) -> "Box":
        return cls(np.full(d, -half_width), np.full(d, half_width))

    @classmethod
    def anchored(cls, x, t) -> "Box":
        """``x + [0, t]``, with ``t`` allowed to have negative entries."""
        x = np.asarray(x, dtype=float)
        end = x + np.asarray(t, dtype=float)
        return cls(np.minimum(x, end), np.maximum(x, end))

    @property
    def dim(self) -> int:
        return len(self.lower)

    @property
    def sides(self) -> np.ndarray:
        return self.upper - self.lower

    @property
    def volume(self) -> float:
        return box_volume(self.lower, self.upper)

    def contains(self, points, tol: float = 0.0) -> np.ndarray:
        """Closed membership with slack ``tol`` per coordinate."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        return np.all((pts >= self.lower - tol) & (pts <= self.upper + tol), axis=1)

    def interior_contains(self, points) -> np.ndarray:
        """Open-interior membership (strict inequalities on every axis)."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        if pts.size == 0:
            return np.zeros(0, dtype=bool)
        return np.all((pts > self.lower) & (pts < self.upper), axis=1)

    def to_dict(self) -> dict:
        return {"lower": [float(v) for v in self.lower], "upper": [float(v) for v in self.upper]}

    @classmethod
    def from_dict(cls, data: dict) -> "Box":
        return cls(data["lower"], data["upper"])

    def __eq__(self, other):
        if not isinstance(other, Box):
            return NotImplemented
        return np.array_equal(self.lower, other.lower) and np.array_equal(self.upper, other.upper)

    def __hash__(self):
        return hash((tuple(self.lower), tuple(self.upper)))

    def __repr__(self) -> str:
        return f"Box(lower={self.lower.tolist()}, upper={self.upper.tolist()})"


def box_volume(lower, upper) -> float:
    """Volume as a left-to-right product of side lengths.

    Every algorithm in the package computes volumes through this function so
    that the same box always yields the same float.
    """
    v = 1.0
    for a, b in zip(lower, upper):
        v *= float(b) - float(a)
    return v


@dataclass(frozen=True)
class CountingReport:
    box: Box
    count: int
    expected: float
    discrepancy: float
    log_bound_ratio: float

    def to_dict(self) -> dict:
        return {
            "box": self.box.to_dict(),
            "count": self.count,
            "expected": self.expected,
            "discrepancy": self.discrepancy,
            "log_bound_ratio": self.log_bound_ratio,
        }


def _coefficient_range(lattice: Lattice, box: Box, config: Config):
    """Integer bounding box of ``T^{-1}(box)`` from the images of its vertices."""
    inv = np.linalg.inv(lattice.generator)
    corners = np.array(list(itertools.product(*zip(box.lower, box.upper)))).T
    image = inv @ corners
    tol = config.membership_tol
    k_lo = np.floor(image.min(axis=1) - tol).astype(np.int64) - 1
    k_hi = np.ceil(image.max(axis=1) + tol).astype(np.int64) + 1
    return k_lo, k_hi


def _over_budget(candidates: float, d: int, config: Config) -> BudgetExceededError:
    return BudgetExceededError(
        f"enumeration needs more than {config.candidate_budget:.3g} integer candidates "
        f"(~{candidates:.3g}) in d={d}; shrink the box"
    )


def enumerate_box(lattice: Lattice, box: Box, config: Config = DEFAULT):
    """Integer coefficients and points of ``lattice`` inside the closed ``box``.

    Returns ``(coeffs, points)`` as ``(m, d)`` arrays sorted lexicographically
    by point coordinates.  The first ``d-1`` coefficient axes are enumerated
    over the preimage bounding box; the admissible range of the last one is
    solved in closed form from the ``d`` linear constraints.  The candidate
    budget counts visited prefixes plus generated last-axis candidates.
    """
    d = lattice.dim
    if box.dim != d:
        raise ValueError(f"box dimension {box.dim} does not match lattice dimension {d}")
    T = lattice.generator
    tol = config.membership_tol
    k_lo, k_hi = _coefficient_range(lattice, box, config)

    head_lo, head_hi = k_lo[:-1], k_hi[:-1]
    head_shape = tuple((head_hi - head_lo + 1).tolist())
    n_head = math.prod(head_shape)
    if n_head > config.candidate_budget:
        raise _over_budget(float(n_head), d, config)
    visited = 0
    last_col = T[:, -1]
    lo_b = box.lower - tol
    hi_b = box.upper + tol

    coeff_chunks, point_chunks = [], []
    for start in range(0, n_head, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, n_head))
        if d > 1:
            head = np.stack(np.unravel_index(idx, head_shape), axis=1) + head_lo
            partial = head @ T[:, :-1].T
        else:
            head = np.zeros((len(idx), 0), dtype=np.int64)
            partial = np.zeros((len(idx), 1))
        z_lo = np.full(len(idx), float(k_lo[-1]))
        z_hi = np.full(len(idx), float(k_hi[-1]))
        feasible = np.ones(len(idx), dtype=bool)
        for i in range(d):
            c = last_col[i]
            if c == 0.0:
                feasible &= (partial[:, i] >= lo_b[i]) & (partial[:, i] <= hi_b[i])
                continue
            a = (lo_b[i] - partial[:, i]) / c
            b = (hi_b[i] - partial[:, i]) / c
            z_lo = np.maximum(z_lo, np.minimum(a, b))
            z_hi = np.minimum(z_hi, np.maximum(a, b))
        # one unit of padding on each side; the exact filter below decides
        first = np.ceil(z_lo).astype(np.int64) - 1
        last = np.floor(z_hi).astype(np.int64) + 1
        counts = np.where(feasible, np.maximum(last - first + 1, 0), 0)
        total = int(counts.sum())
        visited += len(idx) + total
        if visited > config.candidate_budget:
            raise _over_budget(float(visited), d, config)
        if total == 0:
            continue
        rows = np.repeat(np.arange(len(idx)), counts)
        offsets = np.arange(total) - np.repeat(np.cumsum(counts) - counts, counts)
        coeffs = np.empty((total, d), dtype=np.int64)
        coeffs[:, :-1] = head[rows]
        coeffs[:, -1] = first[rows] + offsets
        pts = coeffs @ T.T
        keep = np.all((pts >= lo_b) & (pts <= hi_b), axis=1)
        coeff_chunks.append(coeffs[keep])
        point_chunks.append(pts[keep])

    if not point_chunks:
        return np.zeros((0, d), dtype=np.int64), np.zeros((0, d))
    coeffs = np.concatenate(coeff_chunks)
    pts = np.concatenate(point_chunks)
    order = np.lexsort(pts.T[::-1])
    return coeffs[order], pts[order]


def points_in_box(lattice: Lattice, box: Box, config: Config = DEFAULT) -> np.ndarray:
    """All lattice points in the closed box (slack ``config.membership_tol``), sorted."""
    return enumerate_box(lattice, box, config)[1]


def count_in_box(lattice: Lattice, box: Box, config: Config = DEFAULT) -> int:
    return len(points_in_box(lattice, box, config))


def log_bound(volume: float, d: int) -> float:
    """``(ln(2 + volume))^(d-1)``, the growth allowed for the counting error."""
    return math.log(2.0 + volume) ** (d - 1)


def counting_discrepancy(lattice: Lattice, box: Box, config: Config = DEFAULT) -> CountingReport:
    """Compare the exact count in ``box`` with ``|box| / det``."""
    count = count_in_box(lattice, box, config)
    vol = box.volume
    expected = vol / lattice.det_abs
    disc = abs(count - expected)
    return CountingReport(box, count, expected, disc, disc / log_bound(vol, lattice.dim))


REPORT_HEADER = ("vol", "count", "expected", "discrepancy", "log_bound_ratio")


def reports_to_csv(reports) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(REPORT_HEADER)
    for r in reports:
        writer.writerow(
            [f"{r.box.volume:.17g}", r.count, f"{r.expected:.17g}", f"{r.discrepancy:.17g}", f"{r.log_bound_ratio:.17g}"]
        )
    return buf.getvalue()

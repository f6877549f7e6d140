"""Largest empty axis-parallel boxes.

A box is empty when its open interior contains no input point; points on
the boundary are allowed.  Three solvers are provided:

* ``sweep2d`` -- maximal-empty-rectangle sweep in the plane, O(n^2) with
  numpy doing the inner loop;
* ``branch_nd`` -- exact best-first branching in any dimension: a region
  containing a point ``p`` is replaced by the ``2d`` sub-regions lying on
  either side of ``p`` along each axis;
* ``grid_oracle`` -- brute force over boxes whose faces lie on a uniform
  grid, used to cross-check the exact solvers.

Ties between equal-volume witnesses are broken towards the lexicographically
smallest ``(lower, upper)``.
"""

from __future__ import annotations

import heapq
import json
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT, BudgetExceededError, Config
from .enumeration import Box, box_volume, points_in_box
from .lattice import Lattice

MAX_POINTS_2D = 5000
MAX_POINTS_ND = 300
MAX_GRID_RESOLUTION = 1024


@dataclass(frozen=True)
class DispersionResult:
    witness: Box
    volume: float
    algorithm: str
    certified_exact: bool

    def to_dict(self) -> dict:
        return {
            "volume": self.volume,
            "witness": self.witness.to_dict(),
            "algorithm": self.algorithm,
            "certified_exact": self.certified_exact,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


class _Best:
    """Running maximum with the lexicographic tie-break."""

    def __init__(self):
        self.volume = -1.0
        self.key = None

    def offer(self, volume: float, lower, upper) -> None:
        key = (tuple(float(v) for v in lower), tuple(float(v) for v in upper))
        if volume > self.volume or (volume == self.volume and key < self.key):
            self.volume = volume
            self.key = key

    def box(self) -> Box:
        return Box(self.key[0], self.key[1])


def _prepare(points, domain: Box, config: Config) -> np.ndarray:
    d = domain.dim
    pts = np.asarray(points, dtype=float).reshape(-1, d)
    if len(pts) == 0:
        return pts
    tol = config.membership_tol
    outside = ~domain.contains(pts, tol)
    if np.any(outside):
        raise ValueError(f"{int(outside.sum())} point(s) lie outside the domain {domain}")
    # points within tolerance of the boundary are moved onto it; they cannot
    # lie in the interior of a box inside the domain either way
    return np.clip(pts, domain.lower, domain.upper)


# ---------------------------------------------------------------------------
# planar sweep


def _sweep_from_anchors(pts: np.ndarray, x_lo: float, x_hi: float, y_lo: float, y_hi: float, best: _Best, mirror: bool):
    """Rectangles whose left edge passes through a point, growing rightwards.

    For anchor ``i`` and every point ``j`` to its right, the tallest empty
    rectangle ``[x_i, x_j] x [bottom, top]`` around ``y_i`` is scored, and
    finally the one reaching ``x_hi``.  Points sharing ``x_j`` sit on the
    right edge and do not shrink it.
    """
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    xs = pts[order, 0]
    ys = pts[order, 1]
    n = len(xs)
    for i in range(n):
        xi, yi = xs[i], ys[i]
        start = np.searchsorted(xs, xi, side="right")
        sx = xs[start:]
        sy = ys[start:]
        m = len(sx)
        if m:
            up = np.where(sy >= yi, sy, np.inf)
            dn = np.where(sy <= yi, sy, -np.inf)
            top_incl = np.minimum.accumulate(up)
            bot_incl = np.maximum.accumulate(dn)
            top_excl = np.concatenate(([np.inf], top_incl[:-1]))
            bot_excl = np.concatenate(([-np.inf], bot_incl[:-1]))
            first = np.searchsorted(sx, sx, side="left")
            top = np.minimum(y_hi, top_excl[first])
            bot = np.maximum(y_lo, bot_excl[first])
            # rectangles ending at x_hi only see points strictly left of it
            inner = np.searchsorted(sx, x_hi, side="left")
            top_end = min(y_hi, top_incl[inner - 1]) if inner else y_hi
            bot_end = max(y_lo, bot_incl[inner - 1]) if inner else y_lo
            widths = np.append(sx - xi, x_hi - xi)
            heights = np.append(top - bot, top_end - bot_end)
            tops = np.append(top, top_end)
            bots = np.append(bot, bot_end)
            rights = np.append(sx, x_hi)
        else:
            widths = np.array([x_hi - xi])
            heights = np.array([y_hi - y_lo])
            tops = np.array([y_hi])
            bots = np.array([y_lo])
            rights = np.array([x_hi])
        vols = widths * heights
        vmax = vols.max()
        if vmax < best.volume:
            continue
        for k in np.flatnonzero(vols == vmax):
            if mirror:
                lower, upper = (-rights[k], bots[k]), (-xi, tops[k])
            else:
                lower, upper = (xi, bots[k]), (rights[k], tops[k])
            best.offer(box_volume(lower, upper), lower, upper)


def sweep2d(points, domain: Box, config: Config = DEFAULT) -> DispersionResult:
    """Exact largest empty rectangle in a 2D domain."""
    if domain.dim != 2:
        raise ValueError("sweep2d needs a 2-dimensional domain")
    pts = _prepare(points, domain, config)
    if len(pts) > MAX_POINTS_2D:
        raise BudgetExceededError(f"sweep2d accepts at most {MAX_POINTS_2D} points, got {len(pts)}")
    (x_lo, y_lo), (x_hi, y_hi) = domain.lower, domain.upper
    best = _Best()

    # left and right edges both on the domain: horizontal strips
    inner = pts[(pts[:, 0] > x_lo) & (pts[:, 0] < x_hi), 1] if len(pts) else np.zeros(0)
    levels = np.unique(np.concatenate(([y_lo, y_hi], inner)))
    levels = levels[(levels >= y_lo) & (levels <= y_hi)]
    gaps = np.diff(levels)
    if len(gaps):
        g = gaps.max()
        for k in np.flatnonzero(gaps == g):
            lower, upper = (x_lo, levels[k]), (x_hi, levels[k + 1])
            best.offer(box_volume(lower, upper), lower, upper)
    else:
        best.offer(box_volume(domain.lower, domain.upper), domain.lower, domain.upper)

    if len(pts):
        _sweep_from_anchors(pts, x_lo, x_hi, y_lo, y_hi, best, mirror=False)
        flipped = pts.copy()
        flipped[:, 0] = -flipped[:, 0]
        _sweep_from_anchors(flipped, -x_hi, -x_lo, y_lo, y_hi, best, mirror=True)

    witness = best.box()
    return DispersionResult(witness, witness.volume, "sweep2d", True)


# ---------------------------------------------------------------------------
# n-dimensional branching


def branch_nd(points, domain: Box, config: Config = DEFAULT) -> DispersionResult:
    """Exact largest empty box by best-first region splitting.

    Regions are explored in order of decreasing volume, so the first empty
    region popped has maximal volume; further regions of exactly that volume
    are still examined to apply the tie-break.  Children are pruned when
    their volume falls below the best found, and repeated regions are
    skipped.
    """
    pts = _prepare(points, domain, config)
    d = domain.dim
    limit = MAX_POINTS_2D if d <= 2 else MAX_POINTS_ND
    if len(pts) > limit:
        raise BudgetExceededError(f"branch_nd accepts at most {limit} points in d={d}, got {len(pts)}")

    best = _Best()
    lo0 = tuple(float(v) for v in domain.lower)
    hi0 = tuple(float(v) for v in domain.upper)
    heap = [(-box_volume(lo0, hi0), lo0, hi0, 0)]
    payload = {0: np.arange(len(pts))}
    seen = {(lo0, hi0)}
    counter = 1
    while heap:
        neg_vol, lo, hi, key = heapq.heappop(heap)
        vol = -neg_vol
        idx = payload.pop(key)
        if vol < best.volume:
            break
        lo_a = np.array(lo)
        hi_a = np.array(hi)
        sub = pts[idx]
        inside = np.all((sub > lo_a) & (sub < hi_a), axis=1)
        if not inside.any():
            best.offer(vol, lo, hi)
            continue
        if vol == best.volume:
            continue
        idx = idx[inside]
        sub = sub[inside]
        centre = 0.5 * (lo_a + hi_a)
        pivot = sub[int(np.argmin(np.sum((sub - centre) ** 2, axis=1)))]
        for j in range(d):
            for side in (0, 1):
                c_lo = list(lo)
                c_hi = list(hi)
                if side == 0:
                    c_hi[j] = float(pivot[j])
                else:
                    c_lo[j] = float(pivot[j])
                c_lo_t, c_hi_t = tuple(c_lo), tuple(c_hi)
                c_vol = box_volume(c_lo_t, c_hi_t)
                if c_vol < best.volume or (c_lo_t, c_hi_t) in seen:
                    continue
                seen.add((c_lo_t, c_hi_t))
                payload[counter] = idx
                heapq.heappush(heap, (-c_vol, c_lo_t, c_hi_t, counter))
                counter += 1

    witness = best.box()
    return DispersionResult(witness, witness.volume, "branch_nd", True)


# ---------------------------------------------------------------------------
# grid oracle


def _grid_faces(coords: np.ndarray, lo: float, hi: float, r: int):
    """Grid lines ``lo + k (hi - lo) / r`` and, per coordinate, the nearest
    line index at or below it and at or above it."""
    lines = lo + np.arange(r + 1) * ((hi - lo) / r)
    lines[-1] = hi
    below = np.searchsorted(lines, coords, side="right") - 1
    above = np.searchsorted(lines, coords, side="left")
    return lines, np.clip(below, 0, r), np.clip(above, 0, r)


def _best_gap(masks: np.ndarray, below: np.ndarray, above: np.ndarray, r: int):
    """Longest blocker-free run of grid cells on the last axis.

    ``masks`` is ``(P, n)``: which points block, in ascending coordinate
    order.  Returns per-row ``(length, start, end)`` in grid indices.
    """
    P, n = masks.shape
    if n == 0:
        full = np.full(P, r)
        return full, np.zeros(P, dtype=np.int64), full
    last_above = np.maximum.accumulate(np.where(masks, above[None, :], 0), axis=1)
    prev = np.concatenate((np.zeros((P, 1), dtype=np.int64), last_above[:, :-1]), axis=1)
    gaps = np.where(masks, below[None, :] - prev, -1)
    tail = r - last_above[:, -1]
    all_gaps = np.concatenate((gaps, tail[:, None]), axis=1)
    k = np.argmax(all_gaps, axis=1)
    rows = np.arange(P)
    length = all_gaps[rows, k]
    start = np.where(k < n, prev[rows, np.minimum(k, n - 1)], last_above[:, -1])
    end = np.where(k < n, below[np.minimum(k, n - 1)], r)
    return length, start, end


def grid_oracle(points, domain: Box, resolution: int, config: Config = DEFAULT) -> DispersionResult:
    """Largest empty box among those with faces on the uniform ``resolution``-grid.

    Never exceeds the exact dispersion; falls short of it by at most the
    cost of rounding each face of an optimal box inward to the grid.  Only
    grid boxes that cannot be enlarged by one grid step are scored: their
    upper faces sit on the last line at or below some point (or on the
    domain), their lower faces on the first line at or above some point.
    """
    r = int(resolution)
    d = domain.dim
    if not 1 <= r <= MAX_GRID_RESOLUTION:
        raise BudgetExceededError(f"grid resolution must be in [1, {MAX_GRID_RESOLUTION}]")
    if not 1 <= d <= 3:
        raise BudgetExceededError("grid oracle supports d <= 3")
    pts = _prepare(points, domain, config)
    lines, below, above = [], [], []
    for j in range(d):
        ln, b, a = _grid_faces(pts[:, j], domain.lower[j], domain.upper[j], r)
        lines.append(ln)
        below.append(b)
        above.append(a)
    below = np.array(below).reshape(d, -1)
    above = np.array(above).reshape(d, -1)

    def face_pairs(axis: int, subset: np.ndarray):
        lows = np.unique(np.concatenate(([0], above[axis, subset])))
        highs = np.unique(np.concatenate(([r], below[axis, subset])))
        a, b = np.meshgrid(lows, highs, indexing="ij")
        keep = a < b
        return a[keep], b[keep]

    def interior(axis: int, subset: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        c = pts[subset, axis]
        return (c[None, :] > lines[axis][a][:, None]) & (c[None, :] < lines[axis][b][:, None])

    last = d - 1
    best_score = -1
    best_faces = None

    def solve_last(prefix_faces, subset: np.ndarray, masks_prefix: np.ndarray, prefix_len: np.ndarray):
        nonlocal best_score, best_faces
        order = subset[np.argsort(pts[subset, last], kind="stable")]
        pos = np.searchsorted(subset, order)
        masks = masks_prefix[:, pos]
        length, start, end = _best_gap(masks, below[last, order], above[last, order], r)
        score = prefix_len * length
        k = int(np.argmax(score))
        if score[k] > best_score:
            best_score = int(score[k])
            best_faces = [f[k] for f in prefix_faces] + [(int(start[k]), int(end[k]))]

    everyone = np.arange(len(pts))
    if d == 1:
        solve_last([], everyone, np.ones((1, len(pts)), dtype=bool), np.ones(1, dtype=np.int64))
    elif d == 2:
        a0, b0 = face_pairs(0, everyone)
        masks = interior(0, everyone, a0, b0)
        faces = [list(zip(a0.tolist(), b0.tolist()))]
        solve_last(faces, everyone, masks, (b0 - a0).astype(np.int64))
    else:
        a0, b0 = face_pairs(0, everyone)
        for a, b in zip(a0.tolist(), b0.tolist()):
            sub = everyone[interior(0, everyone, np.array([a]), np.array([b]))[0]]
            a1, b1 = face_pairs(1, sub)
            masks = interior(1, sub, a1, b1)
            faces = [[(a, b)] * len(a1), list(zip(a1.tolist(), b1.tolist()))]
            solve_last(faces, sub, masks, (b - a) * (b1 - a1).astype(np.int64))

    lower = [lines[j][best_faces[j][0]] for j in range(d)]
    upper = [lines[j][best_faces[j][1]] for j in range(d)]
    witness = Box(lower, upper)
    return DispersionResult(witness, witness.volume, "grid_oracle", False)


# ---------------------------------------------------------------------------
# public entry points


def largest_empty_box(points, domain: Box, algorithm: str | None = None, config: Config = DEFAULT) -> DispersionResult:
    """Largest box in ``domain`` whose open interior avoids ``points``.

    Dispatches to ``sweep2d`` in the plane and ``branch_nd`` otherwise.
    """
    if algorithm is None:
        algorithm = "sweep2d" if domain.dim == 2 else "branch_nd"
    if algorithm == "sweep2d":
        return sweep2d(points, domain, config)
    if algorithm == "branch_nd":
        return branch_nd(points, domain, config)
    raise ValueError(f"unknown exact algorithm {algorithm!r}")


def dispersion(point_set, config: Config = DEFAULT) -> DispersionResult:
    """Dispersion of a point set in the unit cube."""
    pts = np.asarray(getattr(point_set, "points", point_set), dtype=float)
    d = getattr(point_set, "dim", None) or pts.shape[1]
    return largest_empty_box(pts.reshape(-1, d), Box.unit(d), config=config)


def lattice_dispersion_in_box(lattice: Lattice, window: Box, config: Config = DEFAULT) -> DispersionResult:
    """Largest empty box inside ``window`` with respect to all lattice points."""
    pts = points_in_box(lattice, window, config)
    return largest_empty_box(pts, window, config=config)


def windowed_lattice_dispersion(lattice: Lattice, M: float, config: Config = DEFAULT) -> DispersionResult:
    """Lattice dispersion restricted to the window ``[-M, M]^d``."""
    if M <= 0:
        raise ValueError("window half-width must be positive")
    return lattice_dispersion_in_box(lattice, Box.cube(lattice.dim, M), config)

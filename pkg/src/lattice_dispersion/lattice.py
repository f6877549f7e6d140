"""Admissible lattices: construction, duality and the norm-minimum Nm.

A lattice is stored by a generator matrix ``T`` whose columns are basis
vectors, so lattice points are ``T @ k`` for integer vectors ``k``.  Row ``i``
of ``T`` therefore gives coordinate ``i`` of a point as a linear form in
``k``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .config import DEFAULT, Config, LatticeError

GOLDEN_RATIO = (1.0 + math.sqrt(5.0)) / 2.0


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Lattice:
    """Full-rank lattice ``T(Z^d)`` with certified metadata.

    ``nm_certified`` is a guaranteed lower bound on the infimum of
    ``prod |z_j|`` over nonzero lattice points; 0 means "no certificate".
    ``dilation`` is the accumulated per-axis factor ``t`` when the lattice
    was obtained as ``t^{-1}`` applied to a base lattice.
    """

    dim: int
    generator: np.ndarray
    det_abs: float
    nm_certified: float = 0.0
    provenance: str = "custom"
    dilation: tuple[float, ...] | None = field(default=None)

    def __post_init__(self):
        gen = _frozen(self.generator)
        if gen.shape != (self.dim, self.dim):
            raise ValueError(f"generator must be {self.dim}x{self.dim}, got {gen.shape}")
        if not np.all(np.isfinite(gen)):
            raise ValueError("generator has non-finite entries")
        if not (self.det_abs > 0.0 and math.isfinite(self.det_abs)):
            raise ValueError("lattice generator must be invertible (det_abs > 0)")
        if self.nm_certified < 0.0:
            raise ValueError("nm_certified must be nonnegative")
        object.__setattr__(self, "generator", gen)
        if self.dilation is not None:
            object.__setattr__(self, "dilation", tuple(float(v) for v in self.dilation))

    @property
    def is_certified(self) -> bool:
        return self.nm_certified > 0.0

    @property
    def inverse(self) -> np.ndarray:
        return np.linalg.inv(self.generator)

    def point(self, k) -> np.ndarray:
        """Lattice point for the integer coefficient vector ``k``."""
        return self.generator @ np.asarray(k, dtype=float)

    def to_dict(self) -> dict:
        out = {
            "dim": self.dim,
            "generator": [[float(v) for v in row] for row in self.generator],
            "det_abs": float(self.det_abs),
            "nm_certified": float(self.nm_certified),
            "provenance": self.provenance,
        }
        if self.dilation is not None:
            out["dilation"] = list(self.dilation)
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, data: dict) -> "Lattice":
        dilation = data.get("dilation")
        return cls(
            dim=int(data["dim"]),
            generator=np.array(data["generator"], dtype=float),
            det_abs=float(data["det_abs"]),
            nm_certified=float(data.get("nm_certified", 0.0)),
            provenance=str(data.get("provenance", "custom")),
            dilation=None if dilation is None else tuple(dilation),
        )

    @classmethod
    def from_json(cls, text: str) -> "Lattice":
        return cls.from_dict(json.loads(text))

    def __repr__(self) -> str:
        return (
            f"Lattice(dim={self.dim}, provenance={self.provenance!r}, "
            f"det_abs={self.det_abs:.10g}, nm_certified={self.nm_certified:.10g})"
        )


def custom_lattice(generator) -> Lattice:
    """Wrap an arbitrary invertible matrix; no Nm certificate is attached."""
    gen = np.array(generator, dtype=float)
    if gen.ndim != 2 or gen.shape[0] != gen.shape[1]:
        raise ValueError("generator must be a square matrix")
    det = abs(float(np.linalg.det(gen)))
    if det == 0.0:
        raise ValueError("generator is singular")
    return Lattice(gen.shape[0], gen, det, 0.0, "custom")


def load_lattice(path) -> Lattice:
    return Lattice.from_json(Path(path).read_text())


def integer_lattice(d: int) -> Lattice:
    """``Z^d``; admissible only for ``d == 1``."""
    if d < 1:
        raise ValueError("dimension must be >= 1")
    return Lattice(d, np.eye(d), 1.0, 1.0 if d == 1 else 0.0, "integer")


def golden_lattice() -> Lattice:
    """The 2D lattice ``{(a + b*phi, a + b*(1 - phi))}`` from Z[phi].

    The coordinate product of the point for ``(a, b)`` is ``a^2 + ab - b^2``
    up to sign, a nonzero integer for ``(a, b) != 0``, so ``Nm = 1``.
    """
    phi = GOLDEN_RATIO
    gen = np.array([[1.0, phi], [1.0, 1.0 - phi]])
    return Lattice(2, gen, math.sqrt(5.0), 1.0, "golden")


def frolov_polynomial(d: int):
    """``p_d(x) = prod_{j=1..d} (x - (2j - 1)) - 1`` as a callable plus derivative."""
    centers = np.arange(1, 2 * d, 2, dtype=float)

    def p(x: float) -> float:
        return float(np.prod(x - centers)) - 1.0

    def dp(x: float) -> float:
        diffs = x - centers
        total = 0.0
        for i in range(d):
            total += float(np.prod(np.delete(diffs, i)))
        return total

    return p, dp


def _bisect(p, a: float, b: float, width: float) -> float:
    fa, fb = p(a), p(b)
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if fa * fb > 0.0:
        raise LatticeError(f"no sign change on [{a}, {b}]")
    while b - a > width:
        m = 0.5 * (a + b)
        if m <= a or m >= b:
            break
        fm = p(m)
        if fm == 0.0:
            return m
        if (fm < 0.0) == (fa < 0.0):
            a, fa = m, fm
        else:
            b = m
    return 0.5 * (a + b)


def frolov_roots(d: int, config: Config = DEFAULT) -> np.ndarray:
    """The ``d`` real roots of ``p_d``, one in each interval ``(2k, 2k+2)``.

    ``p_d`` alternates sign at the even integers ``0, 2, ..., 2d`` for
    ``d >= 2``; ``p_1 = x - 2`` is solved directly.
    """
    if not 1 <= d <= config.frolov_max_dim:
        raise ValueError(f"frolov lattice supports 1 <= d <= {config.frolov_max_dim}, got {d}")
    if d == 1:
        return np.array([2.0])
    p, dp = frolov_polynomial(d)
    roots = []
    for k in range(d):
        x = _bisect(p, 2.0 * k, 2.0 * k + 2.0, 1e-14)
        for _ in range(5):
            slope = dp(x)
            if slope == 0.0:
                break
            step = p(x) / slope
            if not math.isfinite(step):
                break
            x_new = x - step
            # Newton must stay inside the bracket, otherwise keep the bisection value
            if not (2.0 * k < x_new < 2.0 * k + 2.0):
                break
            x = x_new
        roots.append(x)
    roots = np.array(roots)
    gaps = np.diff(roots)
    if np.any(gaps <= 0.1) or np.any(np.abs([p(r) for r in roots]) >= config.cert_slack):
        raise LatticeError(f"root finding lost precision for d={d}")
    return roots


def frolov_lattice(d: int, config: Config = DEFAULT) -> Lattice:
    """Vandermonde lattice of the roots of ``p_d``: ``T[i, j] = xi_i ** j``.

    Each coordinate of ``T @ k`` is ``q(xi_i)`` for the integer polynomial
    ``q(x) = sum_j k_j x^j``, so the coordinate product is the field norm of
    a nonzero algebraic integer and ``Nm >= 1``.
    """
    roots = frolov_roots(d, config)
    gen = np.vander(roots, N=d, increasing=True)
    det = 1.0
    for i in range(d):
        for j in range(i + 1, d):
            det *= roots[j] - roots[i]
    return Lattice(d, gen, abs(det), 1.0, f"frolov({d})")


def dual(lattice: Lattice) -> Lattice:
    """Dual lattice with generator ``(T^{-1})^T`` and determinant ``1/det``.

    Duality preserves admissibility but no quantitative bound on the dual's
    Nm is available, so the certificate is dropped (except for ``Z^d``,
    which is self-dual).
    """
    if lattice.provenance == "integer":
        return integer_lattice(lattice.dim)
    gen = np.linalg.inv(lattice.generator).T
    if lattice.provenance.startswith("dual(") and lattice.provenance.endswith(")"):
        provenance = lattice.provenance[5:-1]
    else:
        provenance = f"dual({lattice.provenance})"
    return Lattice(lattice.dim, gen, 1.0 / lattice.det_abs, 0.0, provenance)


def nm_empirical(lattice: Lattice, window: float, config: Config = DEFAULT) -> float:
    """Minimum of ``prod |z_j|`` over nonzero lattice points in ``[-M, M]^d``.

    This is an upper bound for Nm: the infimum is taken over a finite subset.
    """
    from .enumeration import Box, enumerate_box

    if window <= 0:
        raise ValueError("window must be positive")
    d = lattice.dim
    coeffs, pts = enumerate_box(lattice, Box.cube(d, window), config)
    nonzero = pts[np.any(coeffs != 0, axis=1)]
    if len(nonzero) == 0:
        raise ValueError(f"window [-{window}, {window}]^{d} contains no nonzero lattice point")
    return float(np.min(np.prod(np.abs(nonzero), axis=1)))

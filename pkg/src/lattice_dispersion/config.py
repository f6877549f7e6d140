"""Global numeric tolerances and budgets.

Every tolerance used by the package lives here; functions take an optional
``config`` argument instead of hard-coding their own slack.
"""

from dataclasses import dataclass


@dataclass(frozen=True)
class Config:
    # slack when comparing coordinate products against a certified Nm bound
    cert_slack: float = 1e-9
    # elementwise / relative tolerance for linear-algebra identities
    linalg_tol: float = 1e-10
    # relative tolerance for |det T| versus the stored determinant
    det_rel_tol: float = 1e-12
    # closed-box membership slack on each coordinate
    membership_tol: float = 1e-12
    # two lattice coordinates closer than this count as a collision
    coord_gap: float = 1e-9
    # maximum number of integer candidates an enumeration may visit
    candidate_budget: int = 10**8
    # slab length on axis 1, in multiples of the cross-section side
    slab_factor: float = 64.0
    # largest dimension for which the Frolov construction is supported
    frolov_max_dim: int = 8
    # default seed for sampled shifts and random test instances
    seed: int = 42


DEFAULT = Config()


class LatticeError(Exception):
    """Base class for errors raised by this package."""


class BudgetExceededError(LatticeError):
    """An enumeration or search would exceed its configured budget."""


class InvariantViolation(LatticeError):
    """A mathematical guarantee failed to hold (bug or bad certificate)."""

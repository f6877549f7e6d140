"""Admissible lattices, their dilated N-point sets, and exact dispersion."""

from .config import DEFAULT, BudgetExceededError, Config, InvariantViolation, LatticeError
from .dilation import (
    PartitionReport,
    PointSet,
    dilate,
    find_t_for_N,
    n_of,
    partition_bound_check,
    point_set_for_N,
    restrict_unit_cube,
)
from .dispersion import (
    DispersionResult,
    branch_nd,
    dispersion,
    grid_oracle,
    largest_empty_box,
    lattice_dispersion_in_box,
    sweep2d,
    windowed_lattice_dispersion,
)
from .enumeration import Box, CountingReport, count_in_box, counting_discrepancy, points_in_box
from .experiments import boundedness_study, discrepancy_study, scaling_study
from .lattice import (
    Lattice,
    custom_lattice,
    dual,
    frolov_lattice,
    golden_lattice,
    integer_lattice,
    nm_empirical,
)

__version__ = "0.1.0"

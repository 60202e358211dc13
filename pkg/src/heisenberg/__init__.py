"""Bounded partition functions and harmonic functions on the discrete Heisenberg group."""

__version__ = "0.1.0"

from .errors import BudgetExceeded, DomainError
from .group import (
    A,
    B,
    C,
    IDENTITY,
    GroupElement,
    degree,
    evaluate,
    in_positive_semigroup,
    inverse,
    multiply,
    sigma,
)
from .partitions import (
    classical_count,
    count,
    count_at_most_rows,
    count_bounded_corners,
    count_row,
    enumerate_partitions,
    gaussian_oracle,
)

__all__ = [
    "A",
    "B",
    "C",
    "IDENTITY",
    "BudgetExceeded",
    "DomainError",
    "GroupElement",
    "classical_count",
    "count",
    "count_at_most_rows",
    "count_bounded_corners",
    "count_row",
    "degree",
    "enumerate_partitions",
    "evaluate",
    "gaussian_oracle",
    "in_positive_semigroup",
    "inverse",
    "multiply",
    "sigma",
]

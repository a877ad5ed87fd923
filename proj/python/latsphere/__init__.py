"""Sphere sizes, code bounds and channel simulation on lattices of submodules."""

from ._core import (
    CapExceeded,
    CountTable,
    Lattice,
    ValidationError,
    conjugate,
    covering_bound,
    gaussian_binomial,
    packing_bound,
    partitions_of,
    run_cli,
    simulate,
    singleton_bound,
)

__all__ = [
    "CapExceeded",
    "CountTable",
    "Lattice",
    "ValidationError",
    "conjugate",
    "covering_bound",
    "gaussian_binomial",
    "packing_bound",
    "partitions_of",
    "run_cli",
    "simulate",
    "singleton_bound",
]

"""Degenerate Poisson structures and superintegrability checks for 4D flows."""

from quadham.core import (
    ChartMismatchError,
    CoordChart,
    DomainError,
    ScalarField,
    State,
    VectorField,
    cofactor_residual,
    grad_fd,
    lie_derivative,
    sample_states,
)

__version__ = "0.1.0"

__all__ = [
    "ChartMismatchError",
    "CoordChart",
    "DomainError",
    "ScalarField",
    "State",
    "VectorField",
    "cofactor_residual",
    "grad_fd",
    "lie_derivative",
    "sample_states",
    "__version__",
]

"""Exception types shared across the package.

The CLI maps these onto exit codes: validation errors exit 2, solver
failures exit 3, degenerate ground states exit 4.
"""

from __future__ import annotations


class ValidationError(ValueError):
    """Input violates a documented precondition or schema."""


class SolverError(RuntimeError):
    """The eigensolver failed (non-convergence, NaN, ...)."""


class ConvergenceError(SolverError):
    """Lanczos did not reach the residual tolerance within max_iter.

    Carries the best Ritz pair found so far so callers can inspect how
    close the run got.
    """

    def __init__(self, message: str, best_energy: float, best_vector, residual_norm: float):
        super().__init__(message)
        self.best_energy = best_energy
        self.best_vector = best_vector
        self.residual_norm = residual_norm


class DegenerateGroundStateError(SolverError):
    """Ground state is (numerically) degenerate; block entropies of a single
    eigenvector are then ill-defined."""

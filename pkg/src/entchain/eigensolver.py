"""Ground states of the sector Hamiltonian.

Small sectors (dim <= DENSE_CUTOFF) are diagonalized densely and reported as
exact; larger ones use Lanczos with full reorthogonalization and a fixed,
documented start vector so reruns iterate identically.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as la

from .errors import ConvergenceError, DegenerateGroundStateError, SolverError
from .hamiltonian import SparseHamiltonian, apply

DENSE_CUTOFF = 2000
DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 500
DEGENERACY_RTOL = 1e-8


@dataclass
class GroundState:
    """Converged lowest eigenpair plus convergence metadata."""

    energy: float
    vector: np.ndarray
    residual_norm: float
    gap: float
    iterations: int
    degenerate_flag: bool
    method: str
    ritz_history: list[float] = field(default_factory=list, repr=False)

    def summary(self) -> dict:
        return {
            "energy": self.energy,
            "residual": self.residual_norm,
            "gap": self.gap,
            "iterations": self.iterations,
            "degenerate": self.degenerate_flag,
            "method": self.method,
        }


def fixed_start_vector(dim: int) -> np.ndarray:
    """Deterministic Lanczos start vector: v_i = 1 + (i mod 7), normalized."""
    if dim < 1:
        raise SolverError(f"start vector needs dim >= 1, got {dim}")
    v = 1.0 + (np.arange(dim, dtype=np.float64) % 7.0)
    return v / np.linalg.norm(v)


def _canonical_phase(vec: np.ndarray) -> np.ndarray:
    """Fix the overall sign so the largest-magnitude component is positive."""
    pivot = int(np.argmax(np.abs(vec)))
    return -vec if vec[pivot] < 0 else vec


def _is_degenerate(energy: float, gap: float) -> bool:
    return gap < DEGENERACY_RTOL * max(1.0, abs(energy))


def _check_degeneracy(state: GroundState, allow_degenerate: bool) -> GroundState:
    if state.degenerate_flag and not allow_degenerate:
        raise DegenerateGroundStateError(
            f"ground state is degenerate within tolerance (gap={state.gap:.3e} at "
            f"E0={state.energy:.6f}); block entropies of a single eigenvector are "
            "ill-defined. Pass allow_degenerate=True to proceed anyway."
        )
    return state


def _dense_ground_state(h: SparseHamiltonian, allow_degenerate: bool) -> GroundState:
    w, q = la.eigh(h.to_dense())
    if not np.all(np.isfinite(w)):
        raise SolverError("dense eigensolve produced non-finite eigenvalues")
    energy = float(w[0])
    vec = _canonical_phase(q[:, 0].copy())
    vec /= np.linalg.norm(vec)
    residual = float(np.linalg.norm(apply(h, vec) - energy * vec))
    gap = float(w[1] - w[0]) if h.dim > 1 else np.inf
    state = GroundState(
        energy=energy,
        vector=vec,
        residual_norm=residual,
        gap=gap,
        iterations=0,
        degenerate_flag=_is_degenerate(energy, gap),
        method="dense",
    )
    return _check_degeneracy(state, allow_degenerate)


def _lanczos_ground_state(
    h: SparseHamiltonian, tol: float, max_iter: int, allow_degenerate: bool
) -> GroundState:
    dim = h.dim
    max_iter = min(max_iter, dim)
    krylov = np.empty((min(max_iter, 64), dim))
    krylov[0] = fixed_start_vector(dim)
    alphas: list[float] = []
    betas: list[float] = []
    ritz_history: list[float] = []

    def tridiag_ground():
        a = np.asarray(alphas)
        b = np.asarray(betas)
        hi = min(1, len(a) - 1)
        return la.eigh_tridiagonal(a, b, select="i", select_range=(0, hi))

    def current_eigenpair(m: int):
        w, y = tridiag_ground()
        energy = float(w[0])
        vec = krylov[:m].T @ y[:, 0]
        norm = np.linalg.norm(vec)
        if norm == 0.0:
            raise SolverError("Ritz vector collapsed to zero during assembly")
        vec = _canonical_phase(vec / norm)
        residual = float(np.linalg.norm(apply(h, vec) - energy * vec))
        gap = float(w[1] - w[0]) if len(w) > 1 else np.inf
        return energy, vec, residual, gap

    def as_state(m: int) -> GroundState:
        energy, vec, residual, gap = current_eigenpair(m)
        if residual > tol:
            raise ConvergenceError(
                f"Lanczos did not reach residual {tol:.1e} within {m} iterations "
                f"(best residual {residual:.3e} at energy {energy:.9f})",
                best_energy=energy,
                best_vector=vec,
                residual_norm=residual,
            )
        state = GroundState(
            energy=energy,
            vector=vec,
            residual_norm=residual,
            gap=gap,
            iterations=m,
            degenerate_flag=_is_degenerate(energy, gap),
            method="lanczos",
            ritz_history=ritz_history,
        )
        return _check_degeneracy(state, allow_degenerate)

    for k in range(max_iter):
        q = krylov[k]
        w = apply(h, q)
        if not np.all(np.isfinite(w)):
            raise SolverError(f"non-finite values in matvec at Lanczos iteration {k}")
        alpha = float(q @ w)
        alphas.append(alpha)
        w -= alpha * q
        if k > 0:
            w -= betas[-1] * krylov[k - 1]
        # Full reorthogonalization (two passes) against all stored vectors.
        active = krylov[: k + 1]
        for _ in range(2):
            w -= active.T @ (active @ w)
        beta = float(np.linalg.norm(w))

        w_ritz, _ = tridiag_ground()
        theta = float(w_ritz[0])
        ritz_history.append(theta)

        if beta < 1e-13 * max(1.0, abs(theta)):
            return as_state(k + 1)  # Krylov space exhausted: exact on the subspace
        if k + 1 >= 2:
            _, y = tridiag_ground()
            if beta * abs(float(y[-1, 0])) <= 0.5 * tol:
                energy, vec, residual, gap = current_eigenpair(k + 1)
                if residual <= tol:
                    state = GroundState(
                        energy=energy,
                        vector=vec,
                        residual_norm=residual,
                        gap=gap,
                        iterations=k + 1,
                        degenerate_flag=_is_degenerate(energy, gap),
                        method="lanczos",
                        ritz_history=ritz_history,
                    )
                    return _check_degeneracy(state, allow_degenerate)

        if k + 1 == max_iter:
            break
        if k + 1 == krylov.shape[0]:
            grown = np.empty((min(max_iter, 2 * krylov.shape[0]), dim))
            grown[: k + 1] = krylov[: k + 1]
            krylov = grown
        betas.append(beta)
        krylov[k + 1] = w / beta

    return as_state(max_iter)


def ground_state(
    h: SparseHamiltonian,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    *,
    force_lanczos: bool = False,
    allow_degenerate: bool = False,
) -> GroundState:
    """Lowest eigenpair of `h`.

    Sectors with dim <= 2000 go through a dense symmetric eigensolve (exact,
    iterations=0) unless force_lanczos is set.  Lanczos runs with full
    reorthogonalization from the fixed start vector and converges when the
    true residual ||H psi - E psi|| drops below tol.

    A gap below 1e-8 * max(1, |E0|) marks the state degenerate; by default
    that raises DegenerateGroundStateError because the block entropy of an
    arbitrary vector in a degenerate eigenspace is not well defined.  Note the
    Lanczos gap is a Krylov estimate: an exactly degenerate pair shows up as a
    single copy, so degeneracy detection is only sharp on the dense path.
    """
    if h.dim < 1:
        raise SolverError("Hamiltonian has dimension 0")
    if not np.all(np.isfinite(h.diagonal)) or not np.all(np.isfinite(h.upper.data)):
        raise SolverError("Hamiltonian contains non-finite entries")
    if h.dim == 1:
        energy = float(h.diagonal[0])
        return GroundState(
            energy=energy,
            vector=np.ones(1),
            residual_norm=0.0,
            gap=np.inf,
            iterations=0,
            degenerate_flag=False,
            method="dense",
        )
    if h.dim <= DENSE_CUTOFF and not force_lanczos:
        return _dense_ground_state(h, allow_degenerate)
    return _lanczos_ground_state(h, tol, max_iter, allow_degenerate)

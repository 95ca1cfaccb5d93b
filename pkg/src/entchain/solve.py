"""Convenience entry point: chain spec -> sector basis + ground state."""

from __future__ import annotations

from .eigensolver import DEFAULT_MAX_ITER, DEFAULT_TOL, GroundState, ground_state
from .fock import SectorBasis, enumerate_sector
from .hamiltonian import build_hamiltonian
from .lattice import ChainSpec


def solve_chain(
    spec: ChainSpec,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    *,
    force_lanczos: bool = False,
    allow_degenerate: bool = False,
) -> tuple[SectorBasis, GroundState]:
    basis = enumerate_sector(spec.L, spec.N_up, spec.N_down)
    h = build_hamiltonian(spec, basis)
    gs = ground_state(h, tol, max_iter, force_lanczos=force_lanczos,
                      allow_degenerate=allow_degenerate)
    return basis, gs

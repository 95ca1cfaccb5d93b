"""Shared fixtures: a session-wide solve cache so the expensive sectors
(L=10 and L=12 chains) are diagonalized once and reused across modules."""

from __future__ import annotations

import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from entchain.lattice import ChainSpec, make_impurity_chain, make_uniform_chain
from entchain.solve import solve_chain

_SOLVE_CACHE: dict = {}


def solve_cached(spec: ChainSpec, **kwargs):
    """Memoized solve_chain; keyed on the full spec and solver options."""
    key = (spec, tuple(sorted(kwargs.items())))
    if key not in _SOLVE_CACHE:
        _SOLVE_CACHE[key] = solve_chain(spec, **kwargs)
    return _SOLVE_CACHE[key]


@pytest.fixture(scope="session")
def cached_solver():
    return solve_cached


@pytest.fixture(scope="session")
def two_impurity_v8():
    """The workhorse system: L=10, N=6, U=4t, barriers {3,4} at V=8t."""
    spec = make_impurity_chain(10, 1.0, 4.0, 3, 3, (3, 4), 8.0, "periodic")
    basis, gs = solve_cached(spec)
    return spec, basis, gs


@pytest.fixture(scope="session")
def homogeneous_l10():
    spec = make_uniform_chain(10, 1.0, 4.0, 3, 3, "periodic")
    basis, gs = solve_cached(spec)
    return spec, basis, gs


def random_sector_state(basis, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    v = rng.normal(size=basis.dim)
    return v / np.linalg.norm(v)


@pytest.fixture
def make_random_state():
    from entchain.eigensolver import GroundState

    def _make(basis, seed=0):
        v = random_sector_state(basis, seed)
        return GroundState(energy=0.0, vector=v, residual_norm=0.0, gap=1.0,
                           iterations=0, degenerate_flag=False, method="test")

    return _make

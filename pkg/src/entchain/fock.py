"""Fermionic Fock-sector bookkeeping for two-species chains.

A configuration is a pair of bitmasks (up_mask, down_mask) with bit i
standing for site i, sites numbered 0..L-1.  The canonical mode ordering
used everywhere in this package is: all spin-up modes by ascending site,
then all spin-down modes by ascending site.  Every sign convention below
is derived from that single ordering.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import ValidationError

# C(20,10)^2 already exceeds practical memory; refuse anything larger.
MAX_SITES = 20


@dataclass(frozen=True)
class FockState:
    """One occupation pattern, one bitmask per spin species."""

    up_mask: int
    down_mask: int

    def occ_up(self, site: int) -> int:
        return (self.up_mask >> site) & 1

    def occ_down(self, site: int) -> int:
        return (self.down_mask >> site) & 1


def _masks_with_popcount(L: int, n: int) -> np.ndarray:
    """All L-bit masks with exactly n set bits, ascending."""
    masks = []
    for sites in combinations(range(L), n):
        m = 0
        for s in sites:
            m |= 1 << s
        masks.append(m)
    masks.sort()
    return np.asarray(masks, dtype=np.int64)


class _StateSequence(Sequence):
    """Lazy view of a sector's states in lexicographic (up, down) order."""

    def __init__(self, basis: "SectorBasis"):
        self._basis = basis

    def __len__(self) -> int:
        return self._basis.dim

    def __getitem__(self, ordinal):
        if isinstance(ordinal, slice):
            return [self[i] for i in range(*ordinal.indices(len(self)))]
        return self._basis.state(ordinal)

    def __iter__(self) -> Iterator[FockState]:
        for up in self._basis.up_masks:
            for down in self._basis.down_masks:
                yield FockState(int(up), int(down))


@dataclass(frozen=True)
class SectorBasis:
    """All FockStates with fixed (N_up, N_down) on L sites.

    States are ordered lexicographically on (up_mask, down_mask), so the
    ordinal of (up, down) is index_up(up) * len(down_masks) + index_down(down).
    """

    L: int
    N_up: int
    N_down: int
    up_masks: np.ndarray
    down_masks: np.ndarray
    _up_index: dict = field(repr=False)
    _down_index: dict = field(repr=False)

    @property
    def dim(self) -> int:
        return len(self.up_masks) * len(self.down_masks)

    @property
    def states(self) -> Sequence[FockState]:
        return _StateSequence(self)

    def state(self, ordinal: int) -> FockState:
        nd = len(self.down_masks)
        if not 0 <= ordinal < self.dim:
            raise ValidationError(f"ordinal {ordinal} outside sector of dimension {self.dim}")
        return FockState(int(self.up_masks[ordinal // nd]), int(self.down_masks[ordinal % nd]))

    def index(self, state: FockState) -> int:
        try:
            iu = self._up_index[state.up_mask]
            idn = self._down_index[state.down_mask]
        except KeyError:
            raise ValidationError(
                f"state {state!r} is not in the (L={self.L}, N_up={self.N_up}, "
                f"N_down={self.N_down}) sector"
            ) from None
        return iu * len(self.down_masks) + idn


def enumerate_sector(L: int, N_up: int, N_down: int) -> SectorBasis:
    """Enumerate the fixed-(N_up, N_down) sector on L sites.

    The dimension is C(L, N_up) * C(L, N_down); the state order is the fixed
    lexicographic order on (up_mask, down_mask) so ordinals are reproducible
    across runs.
    """
    if not isinstance(L, int) or L < 1:
        raise ValidationError(f"site count must be a positive integer, got {L!r}")
    if L > MAX_SITES:
        raise ValidationError(f"L={L} exceeds the supported maximum of {MAX_SITES} sites")
    for name, n in (("N_up", N_up), ("N_down", N_down)):
        if not isinstance(n, int) or not 0 <= n <= L:
            raise ValidationError(f"{name}={n!r} must be an integer in [0, {L}]")
    up = _masks_with_popcount(L, N_up)
    down = _masks_with_popcount(L, N_down)
    assert len(up) == comb(L, N_up) and len(down) == comb(L, N_down)
    return SectorBasis(
        L=L,
        N_up=N_up,
        N_down=N_down,
        up_masks=up,
        down_masks=down,
        _up_index={int(m): i for i, m in enumerate(up)},
        _down_index={int(m): i for i, m in enumerate(down)},
    )


def hop_sign(mask: int, i: int, j: int) -> int:
    """Jordan-Wigner string sign for moving one fermion from mode j to mode i.

    Equals (-1)**(number of occupied modes strictly between i and j in mask).
    Both modes live in the same spin species; cross-species hops never occur
    in the Hamiltonian.
    """
    if i == j:
        raise ValidationError(f"hop requires two distinct modes, got i=j={i}")
    if i < 0 or j < 0 or mask < 0:
        raise ValidationError(f"negative mode index or mask: mask={mask}, i={i}, j={j}")
    if not (mask >> j) & 1:
        raise ValidationError(f"source mode {j} is empty in mask {mask:#b}")
    if (mask >> i) & 1:
        raise ValidationError(f"target mode {i} is occupied in mask {mask:#b}")
    lo, hi = (i, j) if i < j else (j, i)
    between = mask & (((1 << hi) - 1) & ~((1 << (lo + 1)) - 1))
    return -1 if between.bit_count() & 1 else 1


def block_mask_of(sites: Iterable[int], L: int) -> int:
    """Bitmask for a set of sites, validated against 0..L-1."""
    mask = 0
    for s in sites:
        if not 0 <= s < L:
            raise ValidationError(f"site {s} outside chain of length {L}")
        mask |= 1 << s
    return mask


def block_permutation_sign(state: FockState, block: Iterable[int], L: int) -> int:
    """Parity picked up when reordering the occupied modes of `state` from the
    canonical ordering to the block-first ordering (block-up, block-down,
    environment-up, environment-down), each segment by ascending site.

    This is the sign that makes the reduced density matrix of `block` live in
    a consistently signed product basis.
    """
    block_mask = block_mask_of(block, L)
    full = (1 << L) - 1
    if block_mask == 0:
        raise ValidationError("block must be nonempty")
    if block_mask == full:
        raise ValidationError("block must be a proper subset of the chain")
    env_mask = full ^ block_mask

    inv = 0
    for spin_mask in (state.up_mask, state.down_mask):
        occupied_block = spin_mask & block_mask
        occupied_env = spin_mask & env_mask
        m = occupied_block
        while m:
            low = m & -m
            inv += (occupied_env & (low - 1)).bit_count()
            m ^= low
    # Environment-up modes cross every block-down mode.
    inv += (state.up_mask & env_mask).bit_count() * (state.down_mask & block_mask).bit_count()
    return -1 if inv & 1 else 1


# --- vectorized helpers used by the hamiltonian and entanglement modules ---


def occupancy_matrix(masks: np.ndarray, L: int) -> np.ndarray:
    """(n_masks, L) 0/1 matrix of per-site occupations."""
    return ((masks[:, None] >> np.arange(L)[None, :]) & 1).astype(np.float64)


def species_block_split(masks: np.ndarray, block_mask: int, L: int):
    """Split each mask of one species into (block part, environment part) and
    compute the within-species crossing parity of moving the block part in
    front of the environment part.

    Returns (block_parts, env_parts, signs) as int64/int64/float64 arrays.
    """
    env_mask = ((1 << L) - 1) ^ block_mask
    block_parts = masks & block_mask
    env_parts = masks & env_mask
    inv = np.zeros(len(masks), dtype=np.int64)
    m = block_mask
    while m:
        low = m & -m
        x = low.bit_length() - 1
        occupied_here = (masks >> x) & 1
        inv += occupied_here * np.bitwise_count(env_parts & (low - 1)).astype(np.int64)
        m ^= low
    signs = np.where(inv & 1, -1.0, 1.0)
    return block_parts, env_parts, signs

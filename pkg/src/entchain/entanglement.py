"""Block reduced density matrices, von Neumann entropies, densities, and the
conformal reference curve.

Entropies are reported in bits (log base 2) throughout.  Particle-number
conservation makes the block/environment amplitude matrix block-diagonal over
block occupation sectors (n_up_block, n_down_block), so the Schmidt spectrum
is computed sector by sector from small dense SVDs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import ValidationError
from .fock import SectorBasis, block_mask_of, occupancy_matrix, species_block_split
from .lattice import BlockSpec, ChainSpec, distance_to_impurities, enumerate_blocks, interface_sites

# Squared Schmidt coefficients below this are floating-point noise, not weight.
LAMBDA_CLAMP = 1e-14
NEGATIVE_LAMBDA_TOL = -1e-14
NORMALIZATION_TOL = 1e-8


@dataclass(frozen=True)
class SchmidtSpectrum:
    """Squared Schmidt coefficients keyed by block occupation (n_up, n_down)."""

    sectors: dict[tuple[int, int], np.ndarray]

    def all_values(self) -> np.ndarray:
        if not self.sectors:
            return np.zeros(0)
        return np.concatenate([np.asarray(v, dtype=np.float64) for v in self.sectors.values()])

    def total_weight(self) -> float:
        return float(self.all_values().sum())

    def to_json_dict(self) -> dict:
        return {f"{k[0]},{k[1]}": [float(x) for x in v] for k, v in sorted(self.sectors.items())}


@dataclass(frozen=True)
class BlockReport:
    """Entropy and density bookkeeping for one block of sites."""

    block: BlockSpec
    x: int
    S_bits: float
    spectrum: SchmidtSpectrum
    block_density: float
    interface_density: float
    d: int | None

    def to_json_dict(self, include_spectrum: bool = False) -> dict:
        doc = {
            "block": list(self.block.sites),
            "x": self.x,
            "d": self.d,
            "S_bits": self.S_bits,
            "block_density": self.block_density,
            "interface_density": self.interface_density,
        }
        if include_spectrum:
            doc["spectrum"] = self.spectrum.to_json_dict()
        return doc

    def to_csv_row(self) -> list:
        return [
            ";".join(str(s) for s in self.block.sites),
            self.x,
            "" if self.d is None else self.d,
            self.S_bits,
            self.block_density,
            self.interface_density,
        ]


CSV_HEADER = ["block_sites", "x", "d", "S_bits", "block_density", "interface_density"]


def entropy_of_spectrum(spectrum: SchmidtSpectrum | Iterable[float]) -> float:
    """Von Neumann entropy -sum(lam * log2 lam) in bits, with 0 log 0 = 0."""
    if isinstance(spectrum, SchmidtSpectrum):
        lams = spectrum.all_values()
    else:
        lams = np.asarray(list(spectrum), dtype=np.float64)
    if lams.size and float(lams.min()) < NEGATIVE_LAMBDA_TOL:
        raise ValidationError(
            f"Schmidt weight {float(lams.min()):.3e} is negative beyond the clamp "
            "threshold; this signals a sign-bookkeeping bug upstream"
        )
    total = float(lams.sum())
    if abs(total - 1.0) > NORMALIZATION_TOL:
        raise ValidationError(f"Schmidt spectrum sums to {total!r}, expected 1 within 1e-8")
    positive = lams[lams > LAMBDA_CLAMP]
    if positive.size == 0:
        return 0.0
    return float(-(positive * np.log2(positive)).sum())


def density_profile(gs, basis: SectorBasis) -> np.ndarray:
    """Per-site total densities n_i = <n_i_up + n_i_down>."""
    vec = np.asarray(gs.vector, dtype=np.float64)
    _check_normalized(vec)
    prob = (vec * vec).reshape(len(basis.up_masks), len(basis.down_masks))
    up_weight = prob.sum(axis=1)
    down_weight = prob.sum(axis=0)
    occ_up = occupancy_matrix(basis.up_masks, basis.L)
    occ_down = occupancy_matrix(basis.down_masks, basis.L)
    return occ_up.T @ up_weight + occ_down.T @ down_weight


def _check_normalized(vec: np.ndarray) -> None:
    norm = float(np.linalg.norm(vec))
    if abs(norm - 1.0) > NORMALIZATION_TOL:
        raise ValidationError(f"state vector has norm {norm!r}, expected 1 within 1e-8")


def _species_sector_layout(masks: np.ndarray, block_mask: int, L: int):
    """Group one species' masks by block occupation count.

    For each count k returns (member indices sorted by (block part, env part),
    number of distinct block parts, number of distinct env parts).  Within a
    count group the (block part, env part) pairs tile the full product grid.
    """
    block_parts, env_parts, signs = species_block_split(masks, block_mask, L)
    counts = np.bitwise_count(block_parts.astype(np.uint64)).astype(np.int64)
    layout = {}
    for k in np.unique(counts):
        members = np.nonzero(counts == k)[0]
        sub_block = block_parts[members]
        sub_env = env_parts[members]
        n_block = len(np.unique(sub_block))
        n_env = len(np.unique(sub_env))
        # fixed particle number makes (block part, env part) tile the grid
        assert len(members) == n_block * n_env
        order = np.lexsort((sub_env, sub_block))
        layout[int(k)] = (members[order], n_block, n_env)
    return layout, signs


def block_entropy(
    gs,
    basis: SectorBasis,
    block: BlockSpec,
    *,
    spec: ChainSpec | None = None,
    profile: np.ndarray | None = None,
    _signed: bool = True,
) -> BlockReport:
    """Entropy (in bits) of the reduced state of `block`, with its sector-resolved
    Schmidt spectrum and the block/interface densities.

    Each basis state splits into a (block configuration, environment
    configuration) pair; the signed amplitudes (signs from the block-first mode
    reordering) fill per-sector matrices whose singular values squared are the
    Schmidt weights.  `spec` supplies boundary conditions and impurity
    locations for the density/d bookkeeping; without it the chain is treated
    as periodic.  `_signed` exists only so tests can demonstrate the fermionic
    reordering signs are load-bearing.
    """
    block.validate_for(basis.L)
    vec = np.asarray(gs.vector, dtype=np.float64)
    _check_normalized(vec)
    L = basis.L
    block_mask = block_mask_of(block.sites, L)

    layout_up, signs_up = _species_sector_layout(basis.up_masks, block_mask, L)
    layout_down, signs_down = _species_sector_layout(basis.down_masks, block_mask, L)
    if not _signed:
        signs_up = np.ones_like(signs_up)
        signs_down = np.ones_like(signs_down)

    amplitudes = vec.reshape(len(basis.up_masks), len(basis.down_masks))
    sectors: dict[tuple[int, int], np.ndarray] = {}
    for k_up, (rows, nb_up, ne_up) in layout_up.items():
        n_env_up = basis.N_up - k_up
        for k_down, (cols, nb_down, ne_down) in layout_down.items():
            sub = amplitudes[np.ix_(rows, cols)]
            if _signed:
                sub = sub * signs_up[rows][:, None] * signs_down[cols][None, :]
                # Environment-up modes cross block-down modes; the count is
                # constant inside a sector.
                if (n_env_up * k_down) & 1:
                    sub = -sub
            m = (
                sub.reshape(nb_up, ne_up, nb_down, ne_down)
                .transpose(0, 2, 1, 3)
                .reshape(nb_up * nb_down, ne_up * ne_down)
            )
            svals = np.linalg.svd(m, compute_uv=False)
            sectors[(k_up, k_down)] = svals * svals

    spectrum = SchmidtSpectrum(sectors)
    entropy = entropy_of_spectrum(spectrum)

    if profile is None:
        profile = density_profile(gs, basis)
    boundary = spec.boundary if spec is not None else "periodic"
    ifc = interface_sites(block, L, boundary)
    report = BlockReport(
        block=block,
        x=block.x,
        S_bits=entropy,
        spectrum=spectrum,
        block_density=float(np.mean(profile[list(block.sites)])),
        interface_density=float(np.mean(profile[list(ifc)])) if ifc else 0.0,
        d=distance_to_impurities(block, spec) if spec is not None else None,
    )
    return report


def average_block_entropy(
    gs,
    basis: SectorBasis,
    x: int,
    mode: str = "contiguous",
    *,
    spec: ChainSpec | None = None,
) -> tuple[float, list[BlockReport]]:
    """Arithmetic mean of S_x over the enumerated blocks, plus the per-block
    reports."""
    boundary = spec.boundary if spec is not None else "periodic"
    blocks = enumerate_blocks(basis.L, x, mode, boundary)
    profile = density_profile(gs, basis)
    reports = [block_entropy(gs, basis, b, spec=spec, profile=profile) for b in blocks]
    return float(np.mean([r.S_bits for r in reports])), reports


def conformal_max(x: int) -> float:
    """Large-L ceiling for the homogeneous block entropy at half filling and
    U=0: 2 + (2/3) log2 x bits."""
    if x < 1:
        raise ValidationError(f"block size must be >= 1, got {x}")
    return 2.0 + (2.0 / 3.0) * float(np.log2(x))


def enhancement(S_inhom: float, S_hom: float) -> float:
    """Relative entropy change against the homogeneous chain; negative values
    mean suppression."""
    if S_hom <= 0.0:
        raise ValidationError(f"homogeneous reference entropy must be > 0, got {S_hom}")
    return (S_inhom - S_hom) / S_hom

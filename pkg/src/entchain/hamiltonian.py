"""Sparse real-symmetric Hamiltonian of an inhomogeneous Hubbard chain,
assembled in a fixed-particle-number sector basis.

H = -t sum_<ij>,s c+_{is} c_{js}  +  U sum_i n_{iu} n_{id}  +  sum_{i,s} V_i n_{is}

Hopping never mixes spin species, so the off-diagonal part factorizes into
(per-species hopping) x (identity) Kronecker blocks; Jordan-Wigner strings
stay within one species for every bond, including the periodic wrap bond,
whose string spans the interior sites of that species.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import IO

import numpy as np
import scipy.sparse as sparse

from .errors import ValidationError
from .fock import SectorBasis, occupancy_matrix
from .lattice import ChainSpec


def _bonds(L: int, boundary: str) -> list[tuple[int, int]]:
    """Distinct nearest-neighbor bonds as sorted site pairs."""
    bonds = {(i, i + 1) for i in range(L - 1)}
    if boundary == "periodic" and L > 2:
        bonds.add((0, L - 1))
    return sorted(bonds)


def _species_hopping(masks: np.ndarray, L: int, bonds: list[tuple[int, int]], t: float):
    """Single-species hopping matrix on the sorted mask list.

    Entry (src, dst) = -t * string_sign for each allowed directed hop; the
    result is symmetric because the string sign is unchanged by reversal.
    """
    n = len(masks)
    rows, cols, vals = [], [], []
    for a, b in bonds:
        occ_a = (masks >> a) & 1
        occ_b = (masks >> b) & 1
        movable = (occ_a ^ occ_b).astype(bool)
        if not movable.any():
            continue
        src = np.nonzero(movable)[0]
        flipped = masks[src] ^ ((1 << a) | (1 << b))
        dst = np.searchsorted(masks, flipped)
        between = ((1 << b) - 1) & ~((1 << (a + 1)) - 1)
        strings = np.bitwise_count(masks[src] & between).astype(np.int64)
        sign = 1.0 - 2.0 * (strings & 1)
        rows.append(src)
        cols.append(dst)
        vals.append(-t * sign)
    if not rows:
        return sparse.csr_matrix((n, n))
    return sparse.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(n, n)
    ).tocsr()


@dataclass
class SparseHamiltonian:
    """Real symmetric sector Hamiltonian in symmetric (upper-triangle) storage.

    diagonal[s] = U * doubleocc(s) + sum_i V_i * (occ_up(i,s) + occ_down(i,s));
    stored off-diagonal entries have col > row and value +-t.
    """

    dim: int
    diagonal: np.ndarray
    upper: sparse.csr_matrix
    _full: sparse.csr_matrix | None = field(default=None, repr=False)

    @property
    def indptr(self) -> np.ndarray:
        return self.upper.indptr

    @property
    def indices(self) -> np.ndarray:
        return self.upper.indices

    @property
    def values(self) -> np.ndarray:
        return self.upper.data

    @property
    def nnz_off_diagonal(self) -> int:
        return self.upper.nnz

    def _full_offdiagonal(self) -> sparse.csr_matrix:
        if self._full is None:
            self._full = (self.upper + self.upper.T).tocsr()
        return self._full

    def to_dense(self) -> np.ndarray:
        dense = self._full_offdiagonal().toarray()
        dense[np.diag_indices(self.dim)] += self.diagonal
        return dense

    def dump_coordinate_text(self, stream: IO[str]) -> None:
        """Debug dump: 'row col value' per stored element, 0-based, diagonal
        first then upper off-diagonals in row-major order."""
        for i, d in enumerate(self.diagonal):
            stream.write(f"{i} {i} {float(d)!r}\n")
        coo = self.upper.tocoo()
        order = np.lexsort((coo.col, coo.row))
        for r, c, v in zip(coo.row[order], coo.col[order], coo.data[order]):
            stream.write(f"{r} {c} {float(v)!r}\n")


def build_hamiltonian(spec: ChainSpec, basis: SectorBasis) -> SparseHamiltonian:
    """Assemble the sector Hamiltonian for `spec` on `basis`."""
    if (basis.L, basis.N_up, basis.N_down) != (spec.L, spec.N_up, spec.N_down):
        raise ValidationError(
            f"basis (L={basis.L}, N_up={basis.N_up}, N_down={basis.N_down}) does not match "
            f"spec (L={spec.L}, N_up={spec.N_up}, N_down={spec.N_down})"
        )
    L = spec.L
    up, down = basis.up_masks, basis.down_masks
    nu, nd = len(up), len(down)

    potential = np.asarray(spec.V, dtype=np.float64)
    pot_up = occupancy_matrix(up, L) @ potential
    pot_down = occupancy_matrix(down, L) @ potential
    double_occ = np.bitwise_count(up[:, None] & down[None, :]).astype(np.float64)
    diagonal = (spec.U * double_occ + pot_up[:, None] + pot_down[None, :]).ravel()

    bonds = _bonds(L, spec.boundary)
    hop_up = _species_hopping(up, L, bonds, spec.t)
    hop_down = _species_hopping(down, L, bonds, spec.t)
    off = sparse.kron(hop_up, sparse.identity(nd, format="csr"), format="csr")
    off = off + sparse.kron(sparse.identity(nu, format="csr"), hop_down, format="csr")
    upper = sparse.triu(off, k=1, format="csr")
    upper.sort_indices()

    return SparseHamiltonian(dim=nu * nd, diagonal=diagonal, upper=upper)


def apply(h: SparseHamiltonian, v: np.ndarray) -> np.ndarray:
    """H @ v using the symmetric storage; summation order is fixed, so results
    are reproducible run to run."""
    v = np.asarray(v, dtype=np.float64)
    if v.shape != (h.dim,):
        raise ValidationError(f"vector has shape {v.shape}, expected ({h.dim},)")
    return h.diagonal * v + h._full_offdiagonal() @ v

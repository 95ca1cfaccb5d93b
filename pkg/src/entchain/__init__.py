"""entchain: exact diagonalization of small inhomogeneous Fermi-Hubbard
chains and mode-entanglement entropy of site blocks.

Energies are measured in units of the hopping t; entropies in bits.
"""

from .entanglement import (
    BlockReport,
    SchmidtSpectrum,
    average_block_entropy,
    block_entropy,
    conformal_max,
    density_profile,
    enhancement,
    entropy_of_spectrum,
)
from .eigensolver import GroundState, fixed_start_vector, ground_state
from .errors import (
    ConvergenceError,
    DegenerateGroundStateError,
    SolverError,
    ValidationError,
)
from .fock import FockState, SectorBasis, block_permutation_sign, enumerate_sector, hop_sign
from .hamiltonian import SparseHamiltonian, apply, build_hamiltonian
from .lattice import (
    BlockSpec,
    ChainSpec,
    SuperlatticePattern,
    chain_from_json,
    chain_from_json_dict,
    chain_to_json,
    enumerate_blocks,
    homogeneous_counterpart,
    interface_sites,
    make_impurity_chain,
    make_superlattice_chain,
    make_uniform_chain,
)
from .predictor import (
    BlockScore,
    HomogeneousReference,
    RegimeVerdict,
    build_homogeneous_reference,
    effective_density,
    predict_enhancement_regime,
    rank_blocks,
)
from .runner import ResultRow, SweepPlan, run_sweep
from .scenarios import reproduce
from .solve import solve_chain

__version__ = "0.1.0"

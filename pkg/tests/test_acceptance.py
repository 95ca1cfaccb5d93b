"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines live.  Every chain solved by criteria 2-8 is recorded in a registry;
criterion 9 replays the shared invariants (complement symmetry, entropy
bounds, particle-number sums, Schmidt purity, translation covariance) over
all of them.

Numeric regression values in FROZEN_* were derived by this suite itself
(dense/partial-trace oracles or first solver runs) and are pinned at
tolerances far above solver noise but far below physical differences.
"""

from __future__ import annotations

import math
from contextlib import contextmanager

import numpy as np
import pytest

from entchain.entanglement import (
    average_block_entropy,
    block_entropy,
    conformal_max,
    density_profile,
    enhancement,
)
from entchain.eigensolver import ground_state
from entchain.fock import enumerate_sector
from entchain.hamiltonian import build_hamiltonian
from entchain.lattice import (
    BlockSpec,
    ChainSpec,
    enumerate_blocks,
    make_impurity_chain,
    make_superlattice_chain,
    make_uniform_chain,
)
from entchain.predictor import predict_enhancement_regime, rank_blocks
from entchain.scenarios import CANDIDATE_BLOCKS, FIG5_PATTERNS, FIG6_BLOCKS, RANKING_BLOCKS
from entchain.solve import solve_chain
from oracles import entropy_oracle

# ---------------------------------------------------------------------------
# frozen regression values (derived by this suite's own oracles/solves)

HOM_L10_S1 = 1.698236782927          # dense partial-trace oracle
HOM_L12_S = {3: 2.648914831014, 4: 2.869147693588}
FIG2_V8_S1 = {"imp": 0.104691853, "d0": 1.728311520, "d1": 1.831536672,
              "d2": 1.763767199, "d3": 1.803970169}
FROZEN_SL_ENHANCEMENTS = {
    ((1, 1, 2, 2), 3): 0.022179269, ((1, 1, 2, 2), 4): -0.054314334,
    ((1, 2), 3): 0.241843811, ((1, 2), 4): 0.026057541,
    ((1, 4, 3, 4), 3): 0.186508530, ((1, 4, 3, 4), 4): 0.183088939,
    ((1, 3), 3): 0.262641400, ((1, 3), 4): 0.168683274,
    ((1, 5), 3): 0.152525846, ((1, 5), 4): 0.144320051,
}

V_GRID = tuple(np.arange(0.0, 20.5, 0.5))

# every chain solved by criteria 2-8, replayed by criterion 9
_AUDITED: dict[ChainSpec, tuple] = {}


def solve_audited(spec: ChainSpec, **kwargs):
    if spec not in _AUDITED:
        _AUDITED[spec] = solve_chain(spec, **kwargs)
    return _AUDITED[spec]


@contextmanager
def report(tag: str):
    try:
        yield
    except BaseException:
        print(f"[acceptance] {tag}: FAIL")
        raise
    print(f"[acceptance] {tag}: PASS")


# ---------------------------------------------------------------------------
# shared heavyweight computations

@pytest.fixture(scope="module")
def fig2_curves():
    """V -> per-label single-site entropies, plus averages, on the 0..20 grid."""
    labels = CANDIDATE_BLOCKS[1]
    curves = {lbl: [] for lbl in labels}
    averages = []
    for V in V_GRID:
        spec = make_impurity_chain(10, 1.0, 4.0, 3, 3, (3, 4), float(V), "periodic")
        basis, gs = solve_audited(spec)
        profile = density_profile(gs, basis)
        for lbl, sites in labels.items():
            curves[lbl].append(
                block_entropy(gs, basis, BlockSpec(sites), spec=spec, profile=profile).S_bits
            )
        avg, _ = average_block_entropy(gs, basis, 1, "contiguous", spec=spec)
        averages.append(avg)
    return curves, averages


@pytest.fixture(scope="module")
def two_impurity_v8_solution():
    spec = make_impurity_chain(10, 1.0, 4.0, 3, 3, (3, 4), 8.0, "periodic")
    basis, gs = solve_audited(spec)
    return spec, basis, gs


@pytest.fixture(scope="module")
def hom_l10_s1():
    spec = make_uniform_chain(10, 1.0, 4.0, 3, 3, "periodic")
    basis, gs = solve_audited(spec)
    return block_entropy(gs, basis, BlockSpec((0,)), spec=spec).S_bits


@pytest.fixture(scope="module")
def fig5_table():
    """(pattern, x) -> (best window report, enhancement, regime verdict)."""
    hom = make_uniform_chain(12, 1.0, 4.0, 3, 3, "periodic")
    hbasis, hgs = solve_audited(hom)
    s_hom = {x: block_entropy(hgs, hbasis, BlockSpec(tuple(range(x))), spec=hom).S_bits
             for x in (3, 4)}
    table = {}
    for counts in FIG5_PATTERNS:
        spec = make_superlattice_chain(12, 1.0, 4.0, 3, 3, counts, 8.0, "periodic")
        basis, gs = solve_audited(spec)
        profile = density_profile(gs, basis)
        verdict = predict_enhancement_regime(spec)
        for x in (3, 4):
            best = max(
                (block_entropy(gs, basis, w, spec=spec, profile=profile)
                 for w in enumerate_blocks(12, x, "contiguous", "periodic")),
                key=lambda r: r.S_bits,
            )
            table[(counts, x)] = (best, enhancement(best.S_bits, s_hom[x]), verdict)
    return table, s_hom


# ---------------------------------------------------------------------------
# criteria

def test_criterion_1_conformal_reference():
    with report("criterion 1 (conformal reference)"):
        assert round(conformal_max(3), 2) == 3.06
        assert round(conformal_max(4), 2) == 3.33


def test_criterion_2_dimer_oracle():
    with report("criterion 2 (dimer oracle)"):
        basis = enumerate_sector(2, 1, 1)
        for U in (0.0, 1.0, 4.0, 8.0):
            spec = make_uniform_chain(2, 1.0, U, 1, 1, "open")
            _, gs = solve_audited(spec)
            exact = (U - math.sqrt(U * U + 16.0)) / 2.0
            assert abs(gs.energy - exact) < 1e-12
        spec0 = make_uniform_chain(2, 1.0, 0.0, 1, 1, "open")
        _, gs0 = solve_audited(spec0)
        s1 = block_entropy(gs0, basis, BlockSpec((0,)), spec=spec0).S_bits
        assert abs(s1 - 2.0) < 1e-10


def _random_specs(count: int = 20):
    """Deterministic stream of small random chains, skipping (near-)degenerate
    draws for which a single-eigenvector entropy is ill-defined."""
    rng = np.random.default_rng(20260811)
    specs = []
    while len(specs) < count:
        L = int(rng.integers(2, 7))
        n_up = int(rng.integers(0, L + 1))
        n_down = int(rng.integers(0, L + 1))
        if not 0 < n_up + n_down < 2 * L:
            continue
        spec = ChainSpec(
            L=L,
            t=1.0,
            U=float(rng.uniform(0.0, 8.0)),
            V=tuple(float(v) for v in rng.uniform(0.0, 8.0, size=L)),
            boundary="periodic" if len(specs) % 2 else "open",
            N_up=n_up,
            N_down=n_down,
        )
        basis = enumerate_sector(L, n_up, n_down)
        h = build_hamiltonian(spec, basis)
        w = np.linalg.eigvalsh(h.to_dense())
        if len(w) > 1 and w[1] - w[0] < 1e-6:
            continue
        specs.append((spec, basis, h, w))
    return specs


def test_criterion_3_oracle_equivalence():
    with report("criterion 3 (Lanczos vs dense + partial-trace oracle, 20 random chains)"):
        for spec, basis, h, w in _random_specs(20):
            gs = ground_state(h) if h.dim == 1 else ground_state(h, force_lanczos=True)
            assert abs(gs.energy - w[0]) < 1e-10
            _AUDITED[spec] = (basis, gs)
            if spec.L < 2:
                continue
            for x in range(1, spec.L):
                for block in enumerate_blocks(spec.L, x, "contiguous", spec.boundary):
                    impl = block_entropy(gs, basis, block, spec=spec).S_bits
                    oracle = entropy_oracle(basis, gs.vector, block.sites)
                    assert abs(impl - oracle) < 1e-8


def test_criterion_4_fig2_qualitative_suite(fig2_curves, hom_l10_s1):
    curves, averages = fig2_curves
    with report("criterion 4 (two-impurity single-site suite)"):
        imp = curves["imp"]
        # (a) impurity entanglement decays monotonically and nearly vanishes
        assert all(b < a for a, b in zip(imp, imp[1:]))
        assert imp[-1] < 0.05
        # (b) every non-impurity site beats the homogeneous chain at V=8t
        i8 = V_GRID.index(8.0)
        assert abs(hom_l10_s1 - HOM_L10_S1) < 1e-8
        for lbl in ("d0", "d1", "d2", "d3"):
            assert curves[lbl][i8] > hom_l10_s1
            assert abs(curves[lbl][i8] - FIG2_V8_S1[lbl]) < 1e-6
        # (c) the dead-border window saturates below every detached window,
        #     about 6% below its nearest neighbor
        assert curves["d0"][i8] < min(curves[lbl][i8] for lbl in ("d1", "d2", "d3"))
        gap = (curves["d1"][i8] - curves["d0"][i8]) / curves["d1"][i8]
        assert 0.03 <= gap <= 0.09
        # (d) the bipartition average decreases and saturates
        assert all(b < a for a, b in zip(averages, averages[1:]))
        i16 = V_GRID.index(16.0)
        assert (averages[i16] - averages[-1]) / averages[-1] < 0.01


def test_criterion_5_effective_chain_density(two_impurity_v8_solution):
    with report("criterion 5 (barrier sites empty; effective open-chain profile)"):
        spec, basis, gs = two_impurity_v8_solution
        profile = density_profile(gs, basis)
        assert profile[3] < 0.05 and profile[4] < 0.05
        eff = make_uniform_chain(8, 1.0, 4.0, 3, 3, "open")
        ebasis, egs = solve_audited(eff)
        eprofile = density_profile(egs, ebasis)
        eff_sites = [(5 + k) % 10 for k in range(8)]
        assert np.max(np.abs(profile[eff_sites] - eprofile)) < 0.05


def test_criterion_6_ranking_suite(two_impurity_v8_solution):
    with report("criterion 6 (measured-best windows are top-ranked by interface density)"):
        spec, basis, gs = two_impurity_v8_solution
        profile = density_profile(gs, basis)
        for x, labels in RANKING_BLOCKS.items():
            family = {lbl: BlockSpec(CANDIDATE_BLOCKS[x][lbl]) for lbl in labels}
            measured = {
                lbl: block_entropy(gs, basis, blk, spec=spec, profile=profile).S_bits
                for lbl, blk in family.items()
            }
            best_measured = max(measured.values())
            top = rank_blocks(profile, list(family.values()))[0].block
            top_label = next(lbl for lbl, blk in family.items() if blk == top)
            # mirror-image windows tie in exact arithmetic; compare entropies
            assert measured[top_label] > best_measured - 1e-8, (
                f"x={x}: rank_blocks picked {top_label} "
                f"(S={measured[top_label]:.6f}) but max is {best_measured:.6f}"
            )
        # the window bordering a barrier ranks last among detached singles
        singles = {lbl: BlockSpec(CANDIDATE_BLOCKS[1][lbl])
                   for lbl in ("d0", "d1", "d2", "d3")}
        ranked = rank_blocks(profile, list(singles.values()))
        assert ranked[-1].block == singles["d0"]


def test_criterion_7_superlattice_headline(fig5_table):
    table, s_hom = fig5_table
    with report("criterion 7 (superlattice enhancement headline)"):
        enhancements = {}
        exceeded = 0
        for (counts, x), (best, enh, verdict) in table.items():
            enhancements[(counts, x)] = enh
            n, n_eff = verdict.n, verdict.n_eff
            if n < n_eff <= 0.8:
                assert enh > 0, f"SL{list(counts)} x={x}: expected enhancement, got {enh:+.4f}"
            if best.S_bits > conformal_max(x):
                exceeded += 1
            assert abs(enh - FROZEN_SL_ENHANCEMENTS[(counts, x)]) < 1e-4
        best_overall = max(enhancements.values())
        assert 0.20 <= best_overall <= 0.35
        assert exceeded >= 1


def test_criterion_8_superlattice_trends():
    with report("criterion 8 (enhancement positive for V >= 2U and across U in [1,8])"):
        hom_cache = {}

        def hom_s(U, x):
            if U not in hom_cache:
                spec = make_uniform_chain(12, 1.0, U, 3, 3, "periodic")
                basis, gs = solve_audited(spec)
                hom_cache[U] = (spec, basis, gs)
            spec, basis, gs = hom_cache[U]
            return block_entropy(gs, basis, BlockSpec(tuple(range(x))), spec=spec).S_bits

        for V in (8.0, 10.0, 12.0, 14.0, 16.0, 18.0, 20.0):
            spec = make_superlattice_chain(12, 1.0, 4.0, 3, 3, (1, 4, 3, 4), V, "periodic")
            basis, gs = solve_audited(spec)
            for x, block in FIG6_BLOCKS.items():
                enh = enhancement(
                    block_entropy(gs, basis, block, spec=spec).S_bits, hom_s(4.0, x)
                )
                assert enh > 0, f"V={V}, x={x}: {enh:+.4f}"
        for U in (1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0):
            spec = make_superlattice_chain(12, 1.0, U, 3, 3, (1, 4, 3, 4), 8.0, "periodic")
            basis, gs = solve_audited(spec)
            for x, block in FIG6_BLOCKS.items():
                enh = enhancement(
                    block_entropy(gs, basis, block, spec=spec).S_bits, hom_s(U, x)
                )
                assert enh > 0, f"U={U}, x={x}: {enh:+.4f}"


def test_criterion_9_invariant_suite():
    with report(f"criterion 9 (shared invariants over {len(_AUDITED)} solved instances)"):
        assert len(_AUDITED) >= 60  # criteria 2-8 really ran first
        for spec, (basis, gs) in _AUDITED.items():
            profile = density_profile(gs, basis)
            assert abs(profile.sum() - spec.N) < 1e-10
            homogeneous = not spec.impurity_sites
            blocks = [BlockSpec((0,))]
            if spec.L > 2:
                blocks.append(BlockSpec(tuple(range(spec.L // 2))))
            for block in blocks:
                r = block_entropy(gs, basis, block, spec=spec, profile=profile)
                comp = block_entropy(gs, basis, block.complement(spec.L), spec=spec,
                                     profile=profile)
                x = block.x
                assert abs(r.S_bits - comp.S_bits) < 1e-8
                assert -1e-12 <= r.S_bits <= 2 * min(x, spec.L - x) + 1e-12
                assert abs(r.spectrum.total_weight() - 1.0) < 1e-10
            if homogeneous and spec.boundary == "periodic":
                assert profile.max() - profile.min() < 1e-8
                singles = [block_entropy(gs, basis, b, spec=spec, profile=profile).S_bits
                           for b in enumerate_blocks(spec.L, 1, "contiguous")]
                assert max(singles) - min(singles) < 1e-8


def test_note_l_robustness_of_enhancement():
    # SL[1,2] at matched filling n=1/3 on L=6 versus L=12 (balanced sectors;
    # the n=1/2 choice would force an unbalanced, exactly degenerate L=6
    # baseline).  Enhancements must agree within 10 percentage points.
    with report("note (L-robustness: SL[1,2] enhancement L=6 vs L=12 at n=1/3)"):
        results = {}
        for L, half in ((6, 1), (12, 2)):
            hom = make_uniform_chain(L, 1.0, 4.0, half, half, "periodic")
            hbasis, hgs = solve_audited(hom)
            s_hom = block_entropy(hgs, hbasis, BlockSpec((0, 1, 2)), spec=hom).S_bits
            sl = make_superlattice_chain(L, 1.0, 4.0, half, half, (1, 2), 8.0, "periodic")
            basis, gs = solve_audited(sl)
            profile = density_profile(gs, basis)
            best = max(
                (block_entropy(gs, basis, w, spec=sl, profile=profile)
                 for w in enumerate_blocks(L, 3, "contiguous", "periodic")),
                key=lambda r: r.S_bits,
            )
            results[L] = enhancement(best.S_bits, s_hom)
        assert abs(results[6] - results[12]) < 0.10

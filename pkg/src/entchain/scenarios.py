"""Canned experiment scenarios behind the `reproduce fig2..fig6b` commands.

All scenarios share the workhorse system sizes: the two-impurity chain is
L=10, N=6 (balanced), U=4t with barriers on sites {3,4} (with periodic
boundaries the barrier location is arbitrary; this placement keeps every
block-offset d well defined), and the superlattice chains are L=12, N=6,
U=4t.  Each scenario writes one CSV of curve/table rows plus a JSON summary
of its headline numbers.

Candidate block placements for the two-impurity system are spelled out in
CANDIDATE_BLOCKS, one entry per placement family (distance-d windows plus
the barrier-containing symmetric/asymmetric windows); alternative readings
can always be run through the generic `sweep` entry point with explicit
site lists.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .entanglement import (
    block_entropy,
    conformal_max,
    density_profile,
    enhancement,
)
from .errors import ValidationError
from .lattice import (
    BlockSpec,
    enumerate_blocks,
    make_impurity_chain,
    make_superlattice_chain,
    make_uniform_chain,
)
from .predictor import predict_enhancement_regime, rank_blocks
from .runner import ResultRow, SweepPlan, run_sweep, write_json, write_rows_csv
from .solve import solve_chain

FIGURES = ("fig2", "fig3a", "fig3b", "fig4", "fig5", "fig6a", "fig6b")

IMPURITY_SITES = (3, 4)
TWO_IMPURITY_BASE = dict(L=10, t=1.0, N_up=3, N_down=3, boundary="periodic")
SUPERLATTICE_L = 12
DEFAULT_V_GRID = tuple(np.arange(0.0, 20.5, 0.5))
DEFAULT_U_GRID = tuple(np.arange(1.0, 8.5, 0.5))

# Placement families for the L=10 two-impurity system (barriers on {3,4}).
# d counts the sites strictly between the window and the nearest barrier;
# "sym"/"asym" windows contain two/one barrier sites.  Mirror images about
# the barrier bond carry identical physics and are omitted.
CANDIDATE_BLOCKS: dict[int, dict[str, tuple[int, ...]]] = {
    1: {"imp": (3,), "d0": (5,), "d1": (6,), "d2": (7,), "d3": (8,)},
    2: {"2imp-sym": (3, 4), "1imp-asym": (4, 5), "d0": (5, 6), "d1": (6, 7),
        "d2": (7, 8), "d3": (8, 9)},
    3: {"2imp-asym": (3, 4, 5), "1imp-asym": (4, 5, 6), "d0": (5, 6, 7),
        "d1": (6, 7, 8), "d2": (7, 8, 9)},
    4: {"2imp-sym": (2, 3, 4, 5), "2imp-asym": (3, 4, 5, 6), "1imp-asym": (4, 5, 6, 7),
        "d0": (5, 6, 7, 8), "d1": (6, 7, 8, 9), "d2": (0, 7, 8, 9)},
}

# Ranking candidates: the subsets of CANDIDATE_BLOCKS over which the
# interface-density argument is actually asserted.  x=1 keeps the explicitly
# argued cases (the dead-border d0 window against d1); the finer d1/d2/d3
# ordering at x=1 is left open by the source analysis.  x=3 drops the
# window that is two-thirds barrier sites: with a majority of its sites
# depleted the block sits outside the density window in which the ranking
# heuristic is meaningful (no three-site window can hold both barriers and
# keep live borders).
RANKING_BLOCKS: dict[int, tuple[str, ...]] = {
    1: ("imp", "d0", "d1"),
    2: ("2imp-sym", "1imp-asym", "d0", "d1", "d2", "d3"),
    3: ("1imp-asym", "d0", "d1", "d2"),
    4: ("2imp-sym", "2imp-asym", "1imp-asym", "d0", "d1", "d2"),
}

# Superlattice patterns tabulated at L=12, N=6, U=4t, V=8t.  All five admit
# window placements with live (V=0) borders around depleted interiors for
# both x=3 and x=4, which is the geometry the enhancement claim is about.
FIG5_PATTERNS = ((1, 1, 2, 2), (1, 2), (1, 4, 3, 4), (1, 3), (1, 5))

# Fixed "optimally located" blocks for the SL[1,4,3,4] trend scans: the
# windows centered on the isolated barrier site 0, which win the measured
# comparison at the reference point U=4t, V=8t.
FIG6_BLOCKS = {3: BlockSpec((11, 0, 1)), 4: BlockSpec((10, 11, 0, 1))}


def _impurity_plan(values, blocks, outputs, U=4.0) -> SweepPlan:
    return SweepPlan(
        potential=("impurities", IMPURITY_SITES),
        axis="V",
        values=tuple(values),
        U=U,
        blocks=blocks,
        outputs=frozenset(outputs),
        **TWO_IMPURITY_BASE,
    )


def reproduce(figure: str, out_dir: Path, workers: int = 1) -> dict:
    """Run the named figure scenario; returns the summary dict and writes
    <figure>_*.csv plus <figure>_summary.json under out_dir."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    runner = {
        "fig2": _reproduce_fig2,
        "fig3a": _reproduce_fig3a,
        "fig3b": _reproduce_fig3b,
        "fig4": _reproduce_fig4,
        "fig5": _reproduce_fig5,
        "fig6a": _reproduce_fig6a,
        "fig6b": _reproduce_fig6b,
    }.get(figure)
    if runner is None:
        raise ValidationError(f"unknown figure {figure!r}; choose one of {FIGURES}")
    return runner(out_dir, workers)


def _reproduce_fig2(out_dir: Path, workers: int) -> dict:
    """Single-site entropy versus barrier strength, per placement family plus
    the bipartition average and the homogeneous baseline."""
    blocks = tuple(BlockSpec(sites) for sites in CANDIDATE_BLOCKS[1].values())
    plan = _impurity_plan(DEFAULT_V_GRID, blocks,
                          ("entropy", "enhancement", "average", "prediction"))
    rows = run_sweep(plan, workers=workers)
    write_rows_csv(rows, out_dir / "fig2_single_site_vs_V.csv")

    by_label = _index_rows(rows, CANDIDATE_BLOCKS[1])
    v8 = 8.0
    v_last = plan.values[-1]
    averages = {r.axis_value: r.average_S_bits for r in rows if r.average_S_bits is not None}
    summary = {
        "impurity_S_at_V20": by_label["imp"][v_last].S_bits,
        "impurity_monotone_decreasing": _monotone_decreasing(
            [by_label["imp"][v].S_bits for v in plan.values]
        ),
        "homogeneous_S1": by_label["imp"][plan.values[0]].S_hom_bits,
        "enhancement_at_V8": {
            lbl: by_label[lbl][v8].enhancement for lbl in ("d0", "d1", "d2", "d3")
        },
        "d0_vs_d1_relative_gap_at_V8": (
            (by_label["d1"][v8].S_bits - by_label["d0"][v8].S_bits) / by_label["d1"][v8].S_bits
        ),
        "average_saturation_rel_change_16_to_20": (
            (averages[16.0] - averages[v_last]) / averages[v_last]
        ),
    }
    write_json(summary, out_dir / "fig2_summary.json")
    return summary


def _reproduce_fig3a(out_dir: Path, workers: int) -> dict:
    """Density profile of the V=8t two-impurity chain against the open
    effective chain of the 8 remaining sites."""
    spec = make_impurity_chain(U=4.0, impurity_sites=IMPURITY_SITES, V=8.0,
                               **TWO_IMPURITY_BASE)
    basis, gs = solve_chain(spec)
    profile = density_profile(gs, basis)

    eff = make_uniform_chain(8, 1.0, 4.0, 3, 3, boundary="open")
    ebasis, egs = solve_chain(eff)
    eprofile = density_profile(egs, ebasis)
    # Walk the ring away from the barriers: effective site k sits at 5+k mod 10.
    eff_sites = [(5 + k) % 10 for k in range(8)]

    rows = [["chain", "position", "site", "density"]]
    for i in range(spec.L):
        rows.append(["impurity", i, i, repr(float(profile[i]))])
    for k, site in enumerate(eff_sites):
        rows.append(["effective_open_L8", k, site, repr(float(eprofile[k]))])
    _write_plain_csv(rows, out_dir / "fig3a_density_profiles.csv")

    deviations = np.abs(profile[eff_sites] - eprofile)
    summary = {
        "impurity_site_densities": [float(profile[s]) for s in IMPURITY_SITES],
        "max_abs_profile_deviation": float(deviations.max()),
        "effective_site_map": {str(k): s for k, s in enumerate(eff_sites)},
    }
    write_json(summary, out_dir / "fig3a_summary.json")
    return summary


def _reproduce_fig3b(out_dir: Path, workers: int) -> dict:
    """Interface-density ranking of the candidate windows per block size,
    from the solved V=8t density profile."""
    spec = make_impurity_chain(U=4.0, impurity_sites=IMPURITY_SITES, V=8.0,
                               **TWO_IMPURITY_BASE)
    basis, gs = solve_chain(spec)
    profile = density_profile(gs, basis)

    rows = [["x", "rank", "label", "block_sites", "interface_density",
             "block_density", "S_bits_measured"]]
    top_blocks = {}
    for x, labels in RANKING_BLOCKS.items():
        family = {lbl: CANDIDATE_BLOCKS[x][lbl] for lbl in labels}
        blocks = [BlockSpec(sites) for sites in family.values()]
        ranked = rank_blocks(profile, blocks)
        label_of = {BlockSpec(sites): lbl for lbl, sites in family.items()}
        for rank, score in enumerate(ranked):
            measured = block_entropy(gs, basis, score.block, spec=spec, profile=profile)
            rows.append([
                x, rank, label_of[score.block],
                ";".join(str(s) for s in score.block.sites),
                repr(score.interface_density), repr(score.block_density),
                repr(measured.S_bits),
            ])
        top_blocks[str(x)] = {
            "label": label_of[ranked[0].block],
            "sites": list(ranked[0].block.sites),
        }
    _write_plain_csv(rows, out_dir / "fig3b_block_ranking.csv")
    summary = {"top_ranked_per_x": top_blocks}
    write_json(summary, out_dir / "fig3b_summary.json")
    return summary


def _reproduce_fig4(out_dir: Path, workers: int) -> dict:
    """Block entropy versus barrier strength for x = 2, 3, 4 placement
    families plus the per-size bipartition averages."""
    all_rows: list[ResultRow] = []
    summary: dict = {}
    for x in (2, 3, 4):
        blocks = tuple(BlockSpec(sites) for sites in CANDIDATE_BLOCKS[x].values())
        plan = _impurity_plan(DEFAULT_V_GRID, blocks, ("entropy", "enhancement", "average"))
        rows = run_sweep(plan, workers=workers)
        all_rows.extend(rows)
        by_label = _index_rows(rows, CANDIDATE_BLOCKS[x])
        averages = [r.average_S_bits for r in rows if r.average_S_bits is not None]
        best_label = max(by_label, key=lambda lbl: by_label[lbl][8.0].S_bits)
        summary[f"x{x}"] = {
            "best_block_at_V8": best_label,
            "best_S_at_V8": by_label[best_label][8.0].S_bits,
            "average_monotone_decreasing": _monotone_decreasing(averages),
        }
    write_rows_csv(all_rows, out_dir / "fig4_block_entropy_vs_V.csv")
    write_json(summary, out_dir / "fig4_summary.json")
    return summary


def _reproduce_fig5(out_dir: Path, workers: int) -> dict:
    """Superlattice entanglement table: best x=3 / x=4 windows per pattern at
    U=4t, V=8t, against the homogeneous chain and the conformal ceiling."""
    hom = make_uniform_chain(SUPERLATTICE_L, 1.0, 4.0, 3, 3, "periodic")
    hbasis, hgs = solve_chain(hom)
    S_hom = {
        x: block_entropy(hgs, hbasis, BlockSpec(tuple(range(x))), spec=hom).S_bits
        for x in (3, 4)
    }

    rows = [["pattern", "x", "block_sites", "S_bits", "S_hom_bits", "enhancement",
             "n", "n_eff", "verdict", "conformal_max", "exceeds_conformal"]]
    max_enh = None
    exceed_count = 0
    for counts in FIG5_PATTERNS:
        spec = make_superlattice_chain(SUPERLATTICE_L, 1.0, 4.0, 3, 3, counts, 8.0, "periodic")
        basis, gs = solve_chain(spec)
        profile = density_profile(gs, basis)
        verdict = predict_enhancement_regime(spec)
        for x in (3, 4):
            windows = enumerate_blocks(spec.L, x, "contiguous", spec.boundary)
            best = max(
                (block_entropy(gs, basis, w, spec=spec, profile=profile) for w in windows),
                key=lambda r: r.S_bits,
            )
            enh = enhancement(best.S_bits, S_hom[x])
            exceeds = best.S_bits > conformal_max(x)
            exceed_count += exceeds
            label = "SL[" + ",".join(str(c) for c in counts) + "]"
            rows.append([
                label, x, ";".join(str(s) for s in best.block.sites),
                repr(best.S_bits), repr(S_hom[x]), repr(enh),
                repr(verdict.n), repr(verdict.n_eff), verdict.verdict,
                repr(conformal_max(x)), exceeds,
            ])
            if max_enh is None or enh > max_enh[0]:
                max_enh = (enh, label, x)
    _write_plain_csv(rows, out_dir / "fig5_superlattice_entanglement.csv")
    summary = {
        "max_enhancement": max_enh[0],
        "max_enhancement_pattern": max_enh[1],
        "max_enhancement_x": max_enh[2],
        "n_configurations_exceeding_conformal_max": int(exceed_count),
        "homogeneous_S": {str(x): S_hom[x] for x in (3, 4)},
    }
    write_json(summary, out_dir / "fig5_summary.json")
    return summary


def _superlattice_trend(out_dir, workers, axis, values, fixed_U, fixed_V, fig) -> dict:
    plan = SweepPlan(
        L=SUPERLATTICE_L,
        t=1.0,
        N_up=3,
        N_down=3,
        boundary="periodic",
        potential=("superlattice", (1, 4, 3, 4)),
        axis=axis,
        values=tuple(values),
        U=fixed_U,
        V=fixed_V,
        blocks=tuple(FIG6_BLOCKS.values()),
        outputs=frozenset({"entropy", "enhancement"}),
    )
    rows = run_sweep(plan, workers=workers)
    write_rows_csv(rows, out_dir / f"{fig}_enhancement_vs_{axis}.csv")
    curve = {}
    for row in rows:
        if row.S_bits is None:
            continue
        curve.setdefault(row.x, []).append((row.axis_value, row.enhancement))
    summary = {
        f"enhancement_vs_{axis}": {
            str(x): {repr(v): e for v, e in pts} for x, pts in sorted(curve.items())
        },
        "all_positive": all(e > 0 for pts in curve.values() for _, e in pts),
    }
    write_json(summary, out_dir / f"{fig}_summary.json")
    return summary


def _reproduce_fig6a(out_dir: Path, workers: int) -> dict:
    """Enhancement versus barrier strength for SL[1,4,3,4] at U=4t with the
    fixed optimal x=3 / x=4 windows."""
    return _superlattice_trend(out_dir, workers, "V", np.arange(1.0, 20.5, 1.0),
                               4.0, None, "fig6a")


def _reproduce_fig6b(out_dir: Path, workers: int) -> dict:
    """Enhancement versus interaction strength for SL[1,4,3,4] at V=8t."""
    return _superlattice_trend(out_dir, workers, "U", DEFAULT_U_GRID,
                               None, 8.0, "fig6b")


def _index_rows(rows, families: dict[str, tuple[int, ...]]):
    """label -> axis value -> row, for block-entropy rows."""
    sites_to_label = {";".join(str(s) for s in sorted(sites)): lbl
                      for lbl, sites in families.items()}
    table: dict[str, dict[float, ResultRow]] = {lbl: {} for lbl in families}
    for row in rows:
        lbl = sites_to_label.get(row.block_sites)
        if lbl is not None:
            table[lbl][row.axis_value] = row
    return table


def _monotone_decreasing(values) -> bool:
    return all(b < a for a, b in zip(values, values[1:]))


def _write_plain_csv(rows, path: Path) -> None:
    import csv

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as f:
        writer = csv.writer(f)
        writer.writerows(rows)

"""Experiment orchestration: parameter sweeps over V or U with per-block
entropy, density, bipartition-average, enhancement, and regime outputs.

Every result row carries the full parameter tuple so files are
self-describing; rerunning a plan reproduces its output byte for byte
(deterministic solver start vector, fixed orderings).
"""

from __future__ import annotations

import csv
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Iterable

import numpy as np

from .entanglement import average_block_entropy, block_entropy, density_profile, enhancement
from .errors import SolverError, ValidationError
from .lattice import (
    BlockSpec,
    ChainSpec,
    SuperlatticePattern,
    enumerate_blocks,
    homogeneous_counterpart,
    make_impurity_chain,
    make_superlattice_chain,
)
from .predictor import predict_enhancement_regime
from .solve import solve_chain

OUTPUT_KINDS = ("entropy", "density", "average", "enhancement", "prediction")


@dataclass(frozen=True)
class SweepPlan:
    """One axis sweep over a family of chains sharing a potential shape.

    The potential shape is either ("impurities", sites) or
    ("superlattice", pattern counts); for axis="V" the amplitude is swept and
    `V` ignored, for axis="U" the amplitude `V` is fixed and U swept.
    """

    L: int
    t: float
    N_up: int
    N_down: int
    boundary: str
    potential: tuple[str, tuple[int, ...]]
    axis: str
    values: tuple[float, ...]
    U: float | None = None
    V: float | None = None
    blocks: tuple[BlockSpec, ...] = ()
    block_descriptor: tuple[int, str] | None = None  # (x, mode) alternative
    outputs: frozenset = frozenset({"entropy", "enhancement"})

    def validate(self) -> None:
        if self.axis not in ("V", "U"):
            raise ValidationError(f"sweep axis must be 'V' or 'U', got {self.axis!r}")
        if len(self.values) == 0:
            raise ValidationError("sweep needs at least one axis value")
        vals = [float(v) for v in self.values]
        if not all(np.isfinite(vals)):
            raise ValidationError(f"axis values must be finite, got {vals}")
        if any(b <= a for a, b in zip(vals, vals[1:])):
            raise ValidationError(f"axis values must be strictly increasing, got {vals}")
        kind, _ = self.potential
        if kind not in ("impurities", "superlattice"):
            raise ValidationError(f"unknown potential shape {kind!r}")
        if self.axis == "V" and self.U is None:
            raise ValidationError("a V sweep needs a fixed U")
        if self.axis == "U" and self.V is None:
            raise ValidationError("a U sweep needs a fixed potential amplitude V")
        unknown = set(self.outputs) - set(OUTPUT_KINDS)
        if unknown:
            raise ValidationError(f"unknown outputs {sorted(unknown)}; allowed: {OUTPUT_KINDS}")
        if not self.blocks and self.block_descriptor is None and (
            self.outputs & {"entropy", "enhancement", "average"}
        ):
            raise ValidationError("entropy outputs need explicit blocks or an (x, mode) descriptor")
        # Every sweep point must produce a valid chain.
        for v in self.values:
            self.spec_at(float(v))

    def spec_at(self, value: float) -> ChainSpec:
        U = float(value) if self.axis == "U" else float(self.U)
        amp = float(self.V) if self.axis == "U" else float(value)
        kind, payload = self.potential
        if kind == "impurities":
            return make_impurity_chain(self.L, self.t, U, self.N_up, self.N_down,
                                       payload, amp, self.boundary)
        return make_superlattice_chain(self.L, self.t, U, self.N_up, self.N_down,
                                       payload, amp, self.boundary)

    def blocks_for(self, spec: ChainSpec) -> tuple[BlockSpec, ...]:
        if self.blocks:
            return self.blocks
        if self.block_descriptor is not None:
            x, mode = self.block_descriptor
            return tuple(enumerate_blocks(spec.L, x, mode, spec.boundary))
        return ()

    def potential_label(self) -> str:
        kind, payload = self.potential
        if kind == "impurities":
            return "imp[" + ",".join(str(s) for s in payload) + "]"
        return SuperlatticePattern(tuple(payload), 0.0).label()


@dataclass
class ResultRow:
    """Flat record: every row repeats the full parameter tuple."""

    axis: str
    axis_value: float
    L: int
    t: float
    U: float
    V_amplitude: float
    boundary: str
    N_up: int
    N_down: int
    potential: str
    energy: float
    block_sites: str = ""
    x: int | None = None
    d: int | None = None
    S_bits: float | None = None
    S_hom_bits: float | None = None
    enhancement: float | None = None
    block_density: float | None = None
    interface_density: float | None = None
    average_S_bits: float | None = None
    densities: str = ""
    verdict: str = ""
    n: float | None = None
    n_eff: float | None = None
    degenerate: bool = False

    @classmethod
    def csv_header(cls) -> list[str]:
        return [f.name for f in fields(cls)]

    def to_csv_row(self) -> list:
        out = []
        for f in fields(self):
            value = getattr(self, f.name)
            out.append("" if value is None else value)
        return out


def _solve_point(args):
    """Worker body for one sweep point; module-level so it pickles."""
    plan, value, allow_degenerate = args
    spec = plan.spec_at(value)
    basis, gs = solve_chain(spec, allow_degenerate=allow_degenerate)
    return value, spec, basis, gs


def run_sweep(
    plan: SweepPlan,
    workers: int = 1,
    allow_degenerate: bool = False,
) -> list[ResultRow]:
    """Execute a sweep: one solve per axis value plus homogeneous baselines.

    Baselines (V=0, same L, N, U) are solved once per distinct U and attached
    to every row so the enhancement column is recomputable from the row alone.
    Rows are ordered by axis value regardless of worker completion order.
    """
    plan.validate()
    values = [float(v) for v in plan.values]

    if workers > 1:
        jobs = [(plan, v, allow_degenerate) for v in values]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            solved = list(pool.map(_solve_point, jobs))
    else:
        solved = [_solve_point((plan, v, allow_degenerate)) for v in values]
    solved.sort(key=lambda item: item[0])

    baselines: dict[float, tuple] = {}

    def baseline_for(spec: ChainSpec):
        if spec.U not in baselines:
            hom = homogeneous_counterpart(spec)
            hbasis, hgs = solve_chain(hom, allow_degenerate=allow_degenerate)
            hprofile = density_profile(hgs, hbasis)
            baselines[spec.U] = (hom, hbasis, hgs, hprofile)
        return baselines[spec.U]

    rows: list[ResultRow] = []
    for value, spec, basis, gs in solved:
        try:
            rows.extend(_rows_for_point(plan, value, spec, basis, gs, baseline_for))
        except SolverError as err:
            raise SolverError(
                f"sweep point {plan.axis}={value} "
                f"({plan.potential_label()}, L={spec.L}, U={spec.U}): {err}"
            ) from err
    return rows


def _rows_for_point(plan, value, spec, basis, gs, baseline_for) -> list[ResultRow]:
    amp = float(plan.V) if plan.axis == "U" else float(value)
    common = dict(
        axis=plan.axis,
        axis_value=value,
        L=spec.L,
        t=spec.t,
        U=spec.U,
        V_amplitude=amp,
        boundary=spec.boundary,
        N_up=spec.N_up,
        N_down=spec.N_down,
        potential=plan.potential_label(),
        energy=gs.energy,
        degenerate=gs.degenerate_flag,
    )
    profile = density_profile(gs, basis)
    rows: list[ResultRow] = []

    verdict = None
    if "prediction" in plan.outputs and spec.impurity_sites:
        verdict = predict_enhancement_regime(spec)

    if plan.outputs & {"entropy", "enhancement"}:
        need_hom = "enhancement" in plan.outputs
        for block in plan.blocks_for(spec):
            report = block_entropy(gs, basis, block, spec=spec, profile=profile)
            row = ResultRow(**common)
            row.block_sites = ";".join(str(s) for s in block.sites)
            row.x = report.x
            row.d = report.d
            row.S_bits = report.S_bits
            row.block_density = report.block_density
            row.interface_density = report.interface_density
            if need_hom:
                hom, hbasis, hgs, hprofile = baseline_for(spec)
                hreport = block_entropy(hgs, hbasis, block, spec=hom, profile=hprofile)
                row.S_hom_bits = hreport.S_bits
                row.enhancement = enhancement(report.S_bits, hreport.S_bits)
            if verdict is not None:
                row.verdict, row.n, row.n_eff = verdict.verdict, verdict.n, verdict.n_eff
            rows.append(row)

    if "average" in plan.outputs:
        sizes = sorted({b.x for b in plan.blocks_for(spec)}) or (
            [plan.block_descriptor[0]] if plan.block_descriptor else []
        )
        for x in sizes:
            avg, _ = average_block_entropy(gs, basis, x, "contiguous", spec=spec)
            row = ResultRow(**common)
            row.block_sites = f"average(x={x})"
            row.x = x
            row.average_S_bits = avg
            rows.append(row)

    if "density" in plan.outputs:
        row = ResultRow(**common)
        row.densities = ";".join(repr(float(v)) for v in profile)
        rows.append(row)

    if "prediction" in plan.outputs and verdict is not None and not (
        plan.outputs & {"entropy", "enhancement"}
    ):
        row = ResultRow(**common)
        row.verdict, row.n, row.n_eff = verdict.verdict, verdict.n, verdict.n_eff
        rows.append(row)

    return rows


def write_rows_csv(rows: Iterable[ResultRow], path: Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(ResultRow.csv_header())
        for row in rows:
            writer.writerow(row.to_csv_row())


def write_json(doc: dict, path: Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w") as f:
        json.dump(doc, f, indent=2, sort_keys=True)
        f.write("\n")


def sweep_plan_from_json_dict(doc: dict) -> SweepPlan:
    """Parse the sweep config schema (see README) into a SweepPlan."""
    if "base" not in doc or "axis" not in doc or "values" not in doc:
        raise ValidationError("sweep config needs 'base', 'axis', and 'values'")
    base = doc["base"]
    if not isinstance(base, dict):
        raise ValidationError("sweep 'base' must be a chain config object")
    axis = doc["axis"]
    if "impurities" in base:
        potential = ("impurities", tuple(int(s) for s in base["impurities"].get("sites", ())))
        amp = base["impurities"].get("V")
    elif "superlattice" in base:
        potential = ("superlattice", tuple(int(c) for c in base["superlattice"]["pattern"]))
        amp = base["superlattice"].get("V")
    else:
        raise ValidationError(
            "sweep base must describe its potential shape via 'impurities' or 'superlattice'"
        )
    blocks, descriptor = parse_blocks_argument(doc.get("blocks"))
    plan = SweepPlan(
        L=int(base["L"]),
        t=float(base.get("t", 1.0)),
        N_up=int(base["N_up"]),
        N_down=int(base["N_down"]),
        boundary=base.get("boundary", "periodic"),
        potential=potential,
        axis=axis,
        values=tuple(float(v) for v in doc["values"]),
        U=float(base.get("U", 0.0)) if axis == "V" else None,
        V=float(amp) if (axis == "U" and amp is not None) else None,
        blocks=blocks,
        block_descriptor=descriptor,
        outputs=frozenset(doc.get("outputs", ["entropy", "enhancement"])),
    )
    plan.validate()
    return plan


def parse_blocks_argument(arg) -> tuple[tuple[BlockSpec, ...], tuple[int, str] | None]:
    """Accept blocks as '3:contiguous', '0,1,2', or a list of site lists."""
    if arg is None:
        return (), None
    if isinstance(arg, str):
        if ":" in arg:
            x_text, mode = arg.split(":", 1)
            try:
                x = int(x_text)
            except ValueError:
                raise ValidationError(f"bad block descriptor {arg!r}; expected '<x>:<mode>'")
            if mode not in ("contiguous", "all_subsets"):
                raise ValidationError(f"unknown block mode {mode!r} in {arg!r}")
            return (), (x, mode)
        try:
            sites = tuple(int(s) for s in arg.split(",") if s != "")
        except ValueError:
            raise ValidationError(f"bad block site list {arg!r}; expected comma-separated ints")
        return (BlockSpec(sites),), None
    if isinstance(arg, (list, tuple)):
        return tuple(BlockSpec(tuple(int(s) for s in sites)) for sites in arg), None
    raise ValidationError(f"cannot interpret blocks argument {arg!r}")

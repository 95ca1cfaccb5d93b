"""Chain specifications: uniform chains, localized impurities, superlattice
potentials, and block-placement descriptors."""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from .errors import ValidationError

BOUNDARIES = ("periodic", "open")


@dataclass(frozen=True)
class ChainSpec:
    """Physical description of one chain: sizes, couplings, per-site potential.

    Energies (t, U, V) are all measured in units of the hopping t; t itself
    defaults to 1 and only exists so tests can exercise the t=0 limit.
    """

    L: int
    t: float
    U: float
    V: tuple[float, ...]
    boundary: str
    N_up: int
    N_down: int

    def __post_init__(self):
        if not isinstance(self.L, int) or self.L < 1:
            raise ValidationError(f"L must be a positive integer, got {self.L!r}")
        if len(self.V) != self.L:
            raise ValidationError(f"potential has {len(self.V)} entries for L={self.L} sites")
        if self.t < 0:
            raise ValidationError(f"hopping t must be >= 0, got {self.t}")
        if self.U < 0:
            raise ValidationError(f"on-site repulsion U must be >= 0, got {self.U}")
        if any(v < 0 for v in self.V):
            raise ValidationError("site potentials must be repulsive (V_i >= 0)")
        if self.boundary not in BOUNDARIES:
            raise ValidationError(f"boundary must be one of {BOUNDARIES}, got {self.boundary!r}")
        for name, n in (("N_up", self.N_up), ("N_down", self.N_down)):
            if not isinstance(n, int) or not 0 <= n <= self.L:
                raise ValidationError(f"{name}={n!r} must be an integer in [0, L]")
        if not 0 < self.filling < 2:
            raise ValidationError(
                f"filling N/L must lie strictly between 0 and 2, got {self.filling}"
            )

    @property
    def N(self) -> int:
        return self.N_up + self.N_down

    @property
    def filling(self) -> float:
        return self.N / self.L

    @property
    def impurity_sites(self) -> tuple[int, ...]:
        return tuple(i for i, v in enumerate(self.V) if v > 0)

    def to_json_dict(self) -> dict:
        return {
            "L": self.L,
            "t": self.t,
            "U": self.U,
            "V": list(self.V),
            "boundary": self.boundary,
            "N_up": self.N_up,
            "N_down": self.N_down,
        }


@dataclass(frozen=True)
class BlockSpec:
    """An ordered set of block sites."""

    sites: tuple[int, ...]

    def __post_init__(self):
        if len(self.sites) == 0:
            raise ValidationError("block must contain at least one site")
        if len(set(self.sites)) != len(self.sites):
            raise ValidationError(f"block sites must be distinct, got {self.sites}")
        object.__setattr__(self, "sites", tuple(sorted(self.sites)))

    @property
    def x(self) -> int:
        return len(self.sites)

    def validate_for(self, L: int) -> None:
        if any(not 0 <= s < L for s in self.sites):
            raise ValidationError(f"block {self.sites} has sites outside 0..{L - 1}")
        if len(self.sites) >= L:
            raise ValidationError(f"block {self.sites} must be a proper subset of {L} sites")

    def complement(self, L: int) -> "BlockSpec":
        self.validate_for(L)
        return BlockSpec(tuple(i for i in range(L) if i not in set(self.sites)))


@dataclass(frozen=True)
class SuperlatticePattern:
    """Periodic potential pattern built from an [a, alpha, b, beta] layer count
    notation: a sites at V, alpha at 0, b at V, beta at 0.  Two-element
    patterns [a, alpha] mean a sites at V followed by alpha at 0.
    """

    counts: tuple[int, ...]
    V: float

    def __post_init__(self):
        if len(self.counts) not in (2, 4):
            raise ValidationError(
                f"superlattice pattern needs 2 or 4 layer counts, got {self.counts}"
            )
        if any(not isinstance(c, int) or c < 0 for c in self.counts):
            raise ValidationError(f"layer counts must be nonnegative integers, got {self.counts}")
        if sum(self.counts) < 1:
            raise ValidationError("superlattice unit cell must contain at least one site")
        if self.V < 0:
            raise ValidationError(f"superlattice barrier must be repulsive, got V={self.V}")

    @property
    def segments(self) -> tuple[tuple[float, int], ...]:
        levels = (self.V, 0.0, self.V, 0.0)
        return tuple((levels[k], c) for k, c in enumerate(self.counts))

    @property
    def unit_cell(self) -> tuple[float, ...]:
        cell: list[float] = []
        for level, count in self.segments:
            cell.extend([level] * count)
        return tuple(cell)

    @property
    def cell_length(self) -> int:
        return sum(self.counts)

    @property
    def barriers_per_cell(self) -> int:
        return sum(c for k, c in enumerate(self.counts) if k % 2 == 0)

    def label(self) -> str:
        return "SL[" + ",".join(str(c) for c in self.counts) + "]"


def make_impurity_chain(
    L: int,
    t: float,
    U: float,
    N_up: int,
    N_down: int,
    impurity_sites: Iterable[int],
    V: float,
    boundary: str = "periodic",
) -> ChainSpec:
    """Chain with potential V on the given sites and 0 elsewhere."""
    sites = tuple(impurity_sites)
    potential = [0.0] * L
    for s in sites:
        if not 0 <= s < L:
            raise ValidationError(f"impurity site {s} outside chain of length {L}")
        potential[s] = float(V)
    return ChainSpec(L=L, t=t, U=U, V=tuple(potential), boundary=boundary,
                     N_up=N_up, N_down=N_down)


def make_superlattice_chain(
    L: int,
    t: float,
    U: float,
    N_up: int,
    N_down: int,
    pattern: Sequence[int] | SuperlatticePattern,
    V: float,
    boundary: str = "periodic",
) -> ChainSpec:
    """Chain whose potential tiles the pattern's unit cell across all L sites."""
    if not isinstance(pattern, SuperlatticePattern):
        pattern = SuperlatticePattern(tuple(int(c) for c in pattern), float(V))
    cell = pattern.unit_cell
    if L % len(cell) != 0:
        raise ValidationError(
            f"chain length {L} is not a multiple of the {len(cell)}-site unit cell "
            f"of {pattern.label()}"
        )
    potential = tuple(cell[i % len(cell)] for i in range(L))
    return ChainSpec(L=L, t=t, U=U, V=potential, boundary=boundary,
                     N_up=N_up, N_down=N_down)


def make_uniform_chain(
    L: int, t: float, U: float, N_up: int, N_down: int, boundary: str = "periodic"
) -> ChainSpec:
    return make_impurity_chain(L, t, U, N_up, N_down, (), 0.0, boundary)


def homogeneous_counterpart(spec: ChainSpec) -> ChainSpec:
    """Same chain with all site potentials removed (the enhancement baseline)."""
    return ChainSpec(L=spec.L, t=spec.t, U=spec.U, V=(0.0,) * spec.L,
                     boundary=spec.boundary, N_up=spec.N_up, N_down=spec.N_down)


def enumerate_blocks(L: int, x: int, mode: str, boundary: str = "periodic") -> list[BlockSpec]:
    """Candidate blocks of size x.

    contiguous: the L cyclic windows (periodic) or the L-x+1 windows (open).
    all_subsets: every C(L, x) site set.
    """
    if not 1 <= x <= L - 1:
        raise ValidationError(f"block size x={x} must satisfy 1 <= x <= L-1={L - 1}")
    if boundary not in BOUNDARIES:
        raise ValidationError(f"boundary must be one of {BOUNDARIES}, got {boundary!r}")
    if mode == "contiguous":
        if boundary == "periodic":
            return [BlockSpec(tuple((start + k) % L for k in range(x))) for start in range(L)]
        return [BlockSpec(tuple(range(start, start + x))) for start in range(L - x + 1)]
    if mode == "all_subsets":
        return [BlockSpec(sites) for sites in combinations(range(L), x)]
    raise ValidationError(f"unknown block mode {mode!r} (use 'contiguous' or 'all_subsets')")


def interface_sites(block: BlockSpec, L: int, boundary: str = "periodic") -> tuple[int, ...]:
    """Complement sites adjacent (on the chain graph) to any block site."""
    block.validate_for(L)
    in_block = set(block.sites)
    found = set()
    for s in block.sites:
        for step in (-1, 1):
            nb = s + step
            if boundary == "periodic":
                nb %= L
            elif not 0 <= nb < L:
                continue
            if nb not in in_block:
                found.add(nb)
    return tuple(sorted(found))


def distance_to_impurities(block: BlockSpec, spec: ChainSpec) -> int | None:
    """Number of sites strictly between the block and the nearest impurity;
    None when the block contains an impurity or the chain has none."""
    impurities = spec.impurity_sites
    if not impurities or set(block.sites) & set(impurities):
        return None
    best = None
    for b in block.sites:
        for imp in impurities:
            gap = abs(b - imp)
            if spec.boundary == "periodic":
                gap = min(gap, spec.L - gap)
            d = gap - 1
            best = d if best is None else min(best, d)
    return best


# --- JSON configuration loading ------------------------------------------------


def chain_from_json_dict(doc: dict) -> ChainSpec:
    """Build a ChainSpec from its JSON document form.

    Potentials are given either explicitly ("V": [...]) or through one of the
    shorthands {"impurities": {"sites": [...], "V": v}} /
    {"superlattice": {"pattern": [...], "V": v}}.
    """
    if not isinstance(doc, dict):
        raise ValidationError(f"chain config must be a JSON object, got {type(doc).__name__}")
    try:
        L = int(doc["L"])
        N_up = int(doc["N_up"])
        N_down = int(doc["N_down"])
    except KeyError as missing:
        raise ValidationError(f"chain config is missing required key {missing}") from None
    t = float(doc.get("t", 1.0))
    U = float(doc.get("U", 0.0))
    boundary = doc.get("boundary", "periodic")

    potential_keys = [k for k in ("V", "impurities", "superlattice") if k in doc]
    if len(potential_keys) != 1:
        raise ValidationError(
            "chain config needs exactly one of 'V', 'impurities', 'superlattice'; "
            f"got {potential_keys or 'none'}"
        )
    key = potential_keys[0]
    if key == "V":
        return ChainSpec(L=L, t=t, U=U, V=tuple(float(v) for v in doc["V"]),
                         boundary=boundary, N_up=N_up, N_down=N_down)
    if key == "impurities":
        sub = doc["impurities"]
        return make_impurity_chain(L, t, U, N_up, N_down,
                                   tuple(int(s) for s in sub.get("sites", ())),
                                   float(sub.get("V", 0.0)), boundary)
    sub = doc["superlattice"]
    if "pattern" not in sub:
        raise ValidationError("superlattice config requires a 'pattern' list")
    return make_superlattice_chain(L, t, U, N_up, N_down,
                                   tuple(int(c) for c in sub["pattern"]),
                                   float(sub.get("V", 0.0)), boundary)


def chain_from_json(text: str) -> ChainSpec:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as err:
        raise ValidationError(f"invalid JSON: {err}") from None
    return chain_from_json_dict(doc)


def chain_to_json(spec: ChainSpec, indent: int | None = None) -> str:
    return json.dumps(spec.to_json_dict(), indent=indent)

"""Cost models for resource graph games.

A cost model maps a load vector to a per-resource cost vector.  All models
except Exponential evaluate in exact rational arithmetic.  Table-backed
models (Tabulated, SeparablePlusLinear, PlayerSpecificSeparable) accept
integer loads only and raise LoadRangeError beyond their declared bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Optional, Sequence, Union

from .errors import IncompatibleModelsError, LoadRangeError, StructureError, UsageError

Number = Union[int, Fraction, float]
Loads = Sequence[Number]


def _as_int_loads(loads: Loads) -> tuple:
    out = []
    for v in loads:
        iv = int(v)
        if iv != v:
            raise LoadRangeError(f"integer-load model evaluated at fractional load {v!r}")
        out.append(iv)
    return tuple(out)


@dataclass(frozen=True, eq=False)
class Tabulated:
    """Finite tables c_r keyed by the load restricted to the neighborhood B_r.

    neighborhoods[r] is a sorted tuple of coordinate indices; tables[r] maps
    the restriction of an integer load vector to those coordinates (each
    entry in 0..max_load) to a rational cost.
    """

    m: int
    neighborhoods: tuple
    tables: tuple
    max_load: int

    def __post_init__(self):
        if len(self.neighborhoods) != self.m or len(self.tables) != self.m:
            raise StructureError("tabulated model needs one neighborhood and table per resource")
        if self.max_load < 0:
            raise StructureError("max_load must be non-negative")
        for r, hood in enumerate(self.neighborhoods):
            if any(s < 0 or s >= self.m for s in hood):
                raise StructureError(f"neighborhood of resource {r} out of range")
            if tuple(sorted(hood)) != tuple(hood):
                raise StructureError(f"neighborhood of resource {r} must be sorted")


@dataclass(frozen=True, eq=False)
class SeparablePlusLinear:
    """c_r(x) = f_r(x_r) + (A x)_r with f_r tabulated on 0..max_load."""

    f: tuple
    A: tuple

    def __post_init__(self):
        m = len(self.A)
        if len(self.f) != m or any(len(row) != m for row in self.A):
            raise StructureError("f and A must agree on the resource count")
        if len({len(t) for t in self.f}) > 1:
            raise StructureError("all f tables must share the same load bound")

    @property
    def m(self) -> int:
        return len(self.A)

    @property
    def max_load(self) -> int:
        return len(self.f[0]) - 1


@dataclass(frozen=True, eq=False)
class Affine:
    """c(x) = A x + b, evaluable at rational loads."""

    A: tuple
    b: tuple

    def __post_init__(self):
        if len(self.A) != len(self.b) or any(len(row) != len(self.b) for row in self.A):
            raise StructureError("A must be square with matching b")

    @property
    def m(self) -> int:
        return len(self.b)


@dataclass(frozen=True, eq=False)
class Exponential:
    """c_r(x) = a_r * exp(phi * x_r) + b_r; the only float-valued model."""

    a: tuple
    phi: float
    b: tuple

    def __post_init__(self):
        if len(self.a) != len(self.b):
            raise StructureError("a and b must have the same length")

    @property
    def m(self) -> int:
        return len(self.a)


@dataclass(frozen=True, eq=False)
class Bilevel:
    """c_r(x) = x_r + kappa*_r(x): an attacker budget split over the argmax loads."""

    budget: Fraction

    def __post_init__(self):
        if self.budget <= 0:
            raise StructureError("attacker budget must be positive")

    m = None  # resource count is implied by the game


@dataclass(frozen=True, eq=False)
class PlayerSpecificSeparable:
    """Per-player, per-resource non-decreasing tables nu[i][r][load]."""

    nu: tuple

    def __post_init__(self):
        if not self.nu:
            raise StructureError("need at least one player table")
        m = len(self.nu[0])
        for i, per_res in enumerate(self.nu):
            if len(per_res) != m:
                raise StructureError(f"player {i} table has wrong resource count")
            for r, table in enumerate(per_res):
                for k in range(1, len(table)):
                    if table[k] < table[k - 1]:
                        raise StructureError(f"nu[{i}][{r}] is not non-decreasing")

    @property
    def m(self) -> int:
        return len(self.nu[0])

    @property
    def max_load(self) -> int:
        return len(self.nu[0][0]) - 1


CostModel = Union[
    Tabulated, SeparablePlusLinear, Affine, Exponential, Bilevel, PlayerSpecificSeparable
]


@dataclass(frozen=True)
class ArgmaxSet:
    """Indices attaining the maximum load, together with that maximum."""

    indices: frozenset
    value: Number


def argmax_set(loads: Loads) -> ArgmaxSet:
    if not loads:
        raise StructureError("argmax of an empty load vector")
    top = max(loads)
    return ArgmaxSet(frozenset(r for r, v in enumerate(loads) if v == top), top)


def kappa_star(loads: Loads, budget: Number) -> tuple:
    """Even split of the budget over the resources with maximal load."""
    if budget <= 0:
        raise StructureError("budget must be positive")
    top = argmax_set(loads)
    share = Fraction(budget) / len(top.indices)
    return tuple(share if r in top.indices else Fraction(0) for r in range(len(loads)))


def eval_cost_entry(model: CostModel, loads: Loads, r: int, player: Optional[int] = None) -> Number:
    """Cost of resource r under the given loads (player index for player-specific models)."""
    if isinstance(model, Tabulated):
        il = _as_int_loads(loads)
        if len(il) != model.m:
            raise StructureError("load vector has wrong dimension")
        if any(v < 0 or v > model.max_load for v in il):
            raise LoadRangeError(f"load {il} outside 0..{model.max_load}")
        key = tuple(il[s] for s in model.neighborhoods[r])
        try:
            return model.tables[r][key]
        except KeyError:
            raise LoadRangeError(f"no table entry for resource {r} at {key}") from None
    if isinstance(model, SeparablePlusLinear):
        il = _as_int_loads(loads)
        if len(il) != model.m:
            raise StructureError("load vector has wrong dimension")
        xr = il[r]
        if xr < 0 or xr > model.max_load:
            raise LoadRangeError(f"load {xr} outside 0..{model.max_load}")
        total = model.f[r][xr]
        for s, coeff in enumerate(model.A[r]):
            if coeff and il[s]:
                total += coeff * il[s]
        return total
    if isinstance(model, Affine):
        total = model.b[r]
        for s, coeff in enumerate(model.A[r]):
            if coeff and loads[s]:
                total += coeff * loads[s]
        return total
    if isinstance(model, Exponential):
        return model.a[r] * math.exp(model.phi * float(loads[r])) + model.b[r]
    if isinstance(model, Bilevel):
        return loads[r] + kappa_star(loads, model.budget)[r]
    if isinstance(model, PlayerSpecificSeparable):
        if player is None:
            raise UsageError("player-specific model needs a player index")
        il = _as_int_loads(loads)
        table = model.nu[player][r]
        if il[r] < 0 or il[r] >= len(table):
            raise LoadRangeError(f"load {il[r]} outside table for player {player}, resource {r}")
        return table[il[r]]
    raise UsageError(f"unknown cost model {model!r}")


def eval_cost(model: CostModel, loads: Loads, player: Optional[int] = None) -> tuple:
    """Full cost vector c(x) (or c_i(x) for player-specific models)."""
    if isinstance(model, PlayerSpecificSeparable) and player is None:
        raise UsageError("player-specific model needs a player index")
    if not isinstance(model, PlayerSpecificSeparable) and player is not None:
        # tolerated: the index is simply ignored for shared costs
        player = None
    if isinstance(model, Bilevel):
        kappa = kappa_star(loads, model.budget)
        return tuple(loads[r] + kappa[r] for r in range(len(loads)))
    m = model.m if model.m is not None else len(loads)
    return tuple(eval_cost_entry(model, loads, r, player) for r in range(m))


def model_dimension(model: CostModel, fallback: Optional[int] = None) -> int:
    if model.m is not None:
        return model.m
    if fallback is None:
        raise UsageError("model dimension is implied by the game; pass a fallback")
    return fallback


def compose(models: Sequence[CostModel]) -> CostModel:
    """Block-diagonal composition of same-variant models on the disjoint resource union."""
    if not models:
        raise UsageError("compose needs at least one model")
    kinds = {type(mod) for mod in models}
    if len(kinds) != 1:
        raise IncompatibleModelsError(
            "mixed variants cannot be composed structurally; normalize with as_tabulated first"
        )
    kind = kinds.pop()
    if kind is Tabulated:
        total_m = sum(mod.m for mod in models)
        hoods, tables = [], []
        offset = 0
        for mod in models:
            for r in range(mod.m):
                hoods.append(tuple(s + offset for s in mod.neighborhoods[r]))
                tables.append(dict(mod.tables[r]))
            offset += mod.m
        return Tabulated(
            m=total_m,
            neighborhoods=tuple(hoods),
            tables=tuple(tables),
            max_load=min(mod.max_load for mod in models),
        )
    if kind is SeparablePlusLinear:
        L = min(mod.max_load for mod in models)
        f = []
        for mod in models:
            f.extend(tuple(row[: L + 1]) for row in mod.f)
        return SeparablePlusLinear(f=tuple(f), A=_blockdiag([mod.A for mod in models]))
    if kind is Affine:
        b = tuple(v for mod in models for v in mod.b)
        return Affine(A=_blockdiag([mod.A for mod in models]), b=b)
    if kind is Exponential:
        phis = {mod.phi for mod in models}
        if len(phis) != 1:
            raise IncompatibleModelsError("exponential models must share the exponent")
        return Exponential(
            a=tuple(v for mod in models for v in mod.a),
            phi=models[0].phi,
            b=tuple(v for mod in models for v in mod.b),
        )
    raise IncompatibleModelsError(
        f"{kind.__name__} has no structural composition; normalize with as_tabulated first"
    )


def _blockdiag(blocks: Sequence[Sequence[Sequence[Number]]]) -> tuple:
    total = sum(len(b) for b in blocks)
    rows = [[Fraction(0)] * total for _ in range(total)]
    offset = 0
    for block in blocks:
        k = len(block)
        for i in range(k):
            for j in range(k):
                rows[offset + i][offset + j] = block[i][j]
        offset += k
    return tuple(tuple(row) for row in rows)


def as_tabulated(
    model: CostModel,
    max_load: int,
    player: Optional[int] = None,
    allow_float: bool = False,
    m: Optional[int] = None,
) -> Tabulated:
    """Exhaustive tabulation on integer loads <= max_load with minimized neighborhoods."""
    if max_load < 1:
        raise UsageError("max_load must be at least 1")
    if isinstance(model, Exponential) and not allow_float:
        raise UsageError("exponential models tabulate to floats; pass allow_float=True")
    if isinstance(model, Tabulated) and max_load > model.max_load:
        raise LoadRangeError("cannot extend a tabulated model beyond its bound")
    dim = model_dimension(model, m)
    grid = list(product(range(max_load + 1), repeat=dim))
    values = {pt: eval_cost(model, pt, player) for pt in grid}
    hoods, tables = [], []
    for r in range(dim):
        deps = []
        for s in range(dim):
            if _depends_on(values, dim, r, s, max_load):
                deps.append(s)
        hood = tuple(deps)
        table = {}
        for pt, costs in values.items():
            key = tuple(pt[s] for s in hood)
            table[key] = costs[r]
        hoods.append(hood)
        tables.append(table)
    return Tabulated(m=dim, neighborhoods=tuple(hoods), tables=tuple(tables), max_load=max_load)


def _depends_on(values, dim, r, s, max_load):
    for pt, costs in values.items():
        if pt[s] == max_load:
            continue
        bumped = pt[:s] + (pt[s] + 1,) + pt[s + 1 :]
        if values[bumped][r] != costs[r]:
            return True
    return False

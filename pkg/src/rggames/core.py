"""Game representation: players, strategy spaces, profiles, loads, private cost.

Strategy vectors are tuples over the m resources.  Unweighted players play
0/1 incidence vectors; a player of weight w plays w times a 0/1 vector.
Games and profiles are immutable; every operation here is a pure function.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple, Union

from . import costs as _costs
from .errors import CapacityError, StructureError

Number = Union[int, Fraction]
Vector = Tuple[Number, ...]
Profile = Tuple[Vector, ...]


@dataclass(frozen=True, eq=False)
class Explicit:
    """An explicit list of 0/1 incidence vectors, deduplicated and sorted."""

    vectors: tuple

    def __post_init__(self):
        if not self.vectors:
            raise StructureError("strategy space must be non-empty")
        dims = {len(v) for v in self.vectors}
        if len(dims) != 1:
            raise StructureError("all strategy vectors must share one dimension")
        for v in self.vectors:
            if any(e not in (0, 1) for e in v):
                raise StructureError(f"explicit strategies must be 0/1 vectors, got {v}")
        canon = tuple(sorted(set(self.vectors)))
        object.__setattr__(self, "vectors", canon)

    @property
    def m(self) -> int:
        return len(self.vectors[0])


@dataclass(frozen=True, eq=False)
class MatroidBases:
    """Strategy space given by the bases of a matroid descriptor (see matroid module)."""

    desc: object

    @property
    def m(self) -> int:
        return self.desc.m


StrategySpace = Union[Explicit, MatroidBases]


@dataclass(frozen=True, eq=False)
class Player:
    weight: Number = 1
    strategy_space: StrategySpace = None

    def __post_init__(self):
        if self.weight <= 0:
            raise StructureError("player weight must be positive")
        if self.strategy_space is None:
            raise StructureError("player needs a strategy space")

    def base_vectors(self, cap: int = 10**6) -> tuple:
        """The 0/1 vectors of this player's space, in canonical order."""
        if isinstance(self.strategy_space, Explicit):
            return self.strategy_space.vectors
        from .matroid import enumerate_bases

        return enumerate_bases(self.strategy_space.desc, cap=cap)

    def strategies(self, cap: int = 10**6) -> tuple:
        """Playable vectors: weight-scaled copies of the 0/1 base vectors."""
        base = self.base_vectors(cap=cap)
        if self.weight == 1:
            return base
        w = self.weight
        return tuple(tuple(w * e for e in v) for v in base)


@dataclass(frozen=True, eq=False)
class Game:
    n_resources: int
    players: tuple
    cost_model: object

    def __post_init__(self):
        if self.n_resources < 0:
            raise StructureError("resource count must be non-negative")
        object.__setattr__(self, "players", tuple(self.players))
        for i, p in enumerate(self.players):
            if p.strategy_space.m != self.n_resources:
                raise StructureError(
                    f"player {i} has strategies of dimension {p.strategy_space.m}, "
                    f"expected {self.n_resources}"
                )
        mm = getattr(self.cost_model, "m", None)
        if mm is not None and mm != self.n_resources:
            raise StructureError(
                f"cost model covers {mm} resources, game has {self.n_resources}"
            )

    @property
    def n_players(self) -> int:
        return len(self.players)

    @property
    def unweighted(self) -> bool:
        return all(p.weight == 1 for p in self.players)


def load_of(game: Game, profile: Profile) -> Vector:
    """Resource-wise sum of the chosen vectors (exact arithmetic)."""
    if len(profile) != game.n_players:
        raise StructureError("profile has wrong number of players")
    loads = [0] * game.n_resources
    for v in profile:
        if len(v) != game.n_resources:
            raise StructureError("strategy vector has wrong dimension")
        for r, e in enumerate(v):
            if e:
                loads[r] += e
    return tuple(loads)


def private_cost(game: Game, profile: Profile, i: int, loads: Optional[Vector] = None):
    """pi_i(x) = x_i^T c_i(load(x)); only the support rows of c are evaluated."""
    if loads is None:
        loads = load_of(game, profile)
    model = game.cost_model
    player = i if isinstance(model, _costs.PlayerSpecificSeparable) else None
    total = 0
    for r, e in enumerate(profile[i]):
        if e:
            total += e * _costs.eval_cost_entry(model, loads, r, player)
    return total


def deviate(profile: Profile, i: int, y: Vector) -> Profile:
    """Replace player i's strategy by y, leaving everyone else unchanged."""
    if i < 0 or i >= len(profile):
        raise StructureError(f"no player {i} in a {len(profile)}-player profile")
    return profile[:i] + (tuple(y),) + profile[i + 1 :]


def validate_profile(game: Game, profile: Profile, cap: int = 10**6) -> None:
    """Check that every choice is playable; raises StructureError otherwise."""
    if len(profile) != game.n_players:
        raise StructureError("profile has wrong number of players")
    for i, (p, v) in enumerate(zip(game.players, profile)):
        if tuple(v) not in p.strategies(cap=cap):
            raise StructureError(f"player {i} cannot play {v}")


def profile_space_size(game: Game, cap: int = 10**7) -> int:
    total = 1
    for i, p in enumerate(game.players):
        total *= len(p.strategies())
        if total > cap:
            raise CapacityError(f"profile space exceeds budget {cap} at player {i}")
    return total

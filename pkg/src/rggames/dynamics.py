"""Best-response dynamics, equilibrium verification, and the brute-force oracle.

Verification enumerates strategy spaces exhaustively; that exponential work
is the documented price of generality, so every enumeration takes an explicit
cap and fails loudly instead of truncating.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import product
from typing import Optional, Union

from .core import Game, Profile, Vector, deviate, load_of, private_cost
from .errors import CapacityError, UsageError

FLOAT_TOL = 1e-9


def _improves(candidate, incumbent) -> bool:
    """Strict improvement; float costs compare with tolerance."""
    if isinstance(candidate, float) or isinstance(incumbent, float):
        return candidate < incumbent - FLOAT_TOL
    return candidate < incumbent


@dataclass(frozen=True)
class IsPNE:
    pass


@dataclass(frozen=True)
class NotPNE:
    player: int
    deviation: Vector
    delta: object  # pi(deviation) - pi(current) < 0


@dataclass(frozen=True)
class PNEFound:
    profile: Profile


@dataclass(frozen=True)
class NoPNEExists:
    profiles_checked: int


Certificate = Union[IsPNE, NotPNE, PNEFound, NoPNEExists]


@dataclass(frozen=True)
class DynamicsTrace:
    steps: tuple  # (player, old strategy, new strategy, delta pi)
    terminal: Profile
    converged: bool
    iterations: int


def _spaces(game: Game, cap: int):
    out = []
    for i, p in enumerate(game.players):
        try:
            out.append(p.strategies(cap=cap))
        except CapacityError as exc:
            raise CapacityError(f"player {i}: {exc}") from None
    return out


def verify_pne(game: Game, profile: Profile, cap: int = 10**6) -> Certificate:
    """IsPNE iff no player has a strictly improving unilateral deviation."""
    loads = load_of(game, profile)
    for i, space in enumerate(_spaces(game, cap)):
        cur = private_cost(game, profile, i, loads=loads)
        base = tuple(loads[r] - profile[i][r] for r in range(game.n_resources))
        for y in space:
            if y == profile[i]:
                continue
            new_loads = tuple(base[r] + y[r] for r in range(game.n_resources))
            alt = private_cost(game, deviate(profile, i, y), i, loads=new_loads)
            if _improves(alt, cur):
                return NotPNE(player=i, deviation=y, delta=alt - cur)
    return IsPNE()


def best_response(game: Game, profile: Profile, i: int, cap: int = 10**6) -> Vector:
    """Cost-minimizing strategy for player i; ties keep the incumbent, then lexicographic."""
    loads = load_of(game, profile)
    base = tuple(loads[r] - profile[i][r] for r in range(game.n_resources))
    best = profile[i]
    best_cost = private_cost(game, profile, i, loads=loads)
    for y in game.players[i].strategies(cap=cap):
        if y == profile[i]:
            continue
        new_loads = tuple(base[r] + y[r] for r in range(game.n_resources))
        cost = private_cost(game, deviate(profile, i, y), i, loads=new_loads)
        if _improves(cost, best_cost):
            best, best_cost = y, cost
    return best


def run_best_response_dynamics(
    game: Game,
    start: Profile,
    max_iters: int = 1000,
    schedule: str = "round-robin",
    seed: Optional[int] = None,
    cap: int = 10**6,
) -> DynamicsTrace:
    """Apply strict best responses until none exists or max_iters steps were taken."""
    if schedule not in ("round-robin", "random"):
        raise UsageError(f"unknown schedule {schedule!r}")
    rng = random.Random(seed) if schedule == "random" else None
    profile = tuple(tuple(v) for v in start)
    steps = []
    n = game.n_players
    while len(steps) < max_iters:
        order = list(range(n))
        if rng is not None:
            rng.shuffle(order)
        moved = False
        for i in order:
            old_cost = private_cost(game, profile, i)
            y = best_response(game, profile, i, cap=cap)
            if y == profile[i]:
                continue
            new_profile = deviate(profile, i, y)
            delta = private_cost(game, new_profile, i) - old_cost
            steps.append((i, profile[i], y, delta))
            profile = new_profile
            moved = True
            if len(steps) >= max_iters:
                break
        if not moved:
            return DynamicsTrace(tuple(steps), profile, True, len(steps))
    converged = isinstance(verify_pne(game, profile, cap=cap), IsPNE)
    return DynamicsTrace(tuple(steps), profile, converged, len(steps))


def brute_force_pne(game: Game, budget: int = 10**7, cap: int = 10**6) -> Certificate:
    """Enumerate all profiles in canonical order; first PNE or an exhaustion certificate."""
    spaces = _spaces(game, cap)
    total = 1
    for s in spaces:
        total *= len(s)
    if total > budget:
        raise CapacityError(f"{total} profiles exceed the budget {budget}")
    checked = 0
    for choices in product(*spaces):
        checked += 1
        if isinstance(verify_pne(game, tuple(choices), cap=cap), IsPNE):
            return PNEFound(profile=tuple(choices))
    return NoPNEExists(profiles_checked=checked)

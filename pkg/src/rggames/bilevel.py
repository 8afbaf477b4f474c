"""Bilevel load balancing: attacker budget split over the most loaded
resources, folded into the cost function, with the matroid equilibrium lift.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core import Game, MatroidBases
from .costs import Bilevel, PlayerSpecificSeparable, kappa_star
from .errors import StructureError, UsageError
from .matroid import solve_via_theorem3


@dataclass(frozen=True, eq=False)
class BilevelGame:
    """An unweighted game on matroid strategy spaces with budget-attack costs."""

    base: Game

    def __post_init__(self):
        model = self.base.cost_model
        if not isinstance(model, Bilevel):
            raise StructureError("bilevel games need the budget-attack cost model")
        for i, p in enumerate(self.base.players):
            if p.weight != 1:
                raise StructureError("bilevel games are defined for unit weights")
            if not isinstance(p.strategy_space, MatroidBases):
                raise StructureError(f"player {i} needs a matroid strategy space")

    @property
    def budget(self) -> Fraction:
        return self.base.cost_model.budget


def make_bilevel_game(n_resources: int, descs: Sequence, budget) -> BilevelGame:
    from .core import Player

    players = tuple(Player(strategy_space=MatroidBases(desc=d)) for d in descs)
    game = Game(
        n_resources=n_resources,
        players=players,
        cost_model=Bilevel(budget=Fraction(budget)),
    )
    return BilevelGame(base=game)


def attack_allocation(loads: Sequence, budget) -> tuple:
    """The attack vector kappa*: budget split evenly over the argmax loads."""
    return kappa_star(loads, budget)


def identity_nu(game: BilevelGame, max_load: int = None) -> PlayerSpecificSeparable:
    """nu_{T,g}(x) = x for every type and resource, tabulated up to the player count."""
    n = game.base.n_players
    m = game.base.n_resources
    L = max_load if max_load is not None else n + 1
    table = tuple(range(L + 1))
    return PlayerSpecificSeparable(nu=tuple(tuple(table for _ in range(m)) for _ in range(n)))


def solve_bilevel(game: BilevelGame, max_iters: int = 1000, cap: int = 10**6):
    """Equilibrium via the separable identity-nu game, verified on the attack costs."""
    return solve_via_theorem3(game.base, identity_nu(game), max_iters=max_iters, cap=cap)


@dataclass(frozen=True)
class CaseAudit:
    case: str
    guard_holds: bool
    lhs: Fraction  # sum of kappa over supp(t)
    rhs: Fraction  # sum of kappa over supp(u)
    inequality_holds: bool


def case_audit(t: Sequence[int], u: Sequence[int], z: Sequence, budget) -> CaseAudit:
    """Classify a single exchange into the attack-conservation proof cases.

    Requires u = t + 1_s - 1_r (or t = u).  Checks the inequality
    sum_{g in supp(t)} kappa*_g(t+z) <= sum_{g in supp(u)} kappa*_g(u+z)
    and reports which case of the argmax analysis applies.  The inequality is
    only claimed when the guard t_r + z_r <= u_s + z_s holds.
    """
    if len(t) != len(u) or len(z) != len(t):
        raise StructureError("t, u, z must share one dimension")
    m = len(t)
    delta = [u[g] - t[g] for g in range(m)]
    if all(d == 0 for d in delta):
        loads = tuple(t[g] + z[g] for g in range(m))
        kap = kappa_star(loads, budget)
        val = sum(kap[g] for g in range(m) if t[g])
        return CaseAudit("equal", True, val, val, True)
    rs = [g for g, d in enumerate(delta) if d == -1]
    ss = [g for g, d in enumerate(delta) if d == 1]
    if len(rs) != 1 or len(ss) != 1 or sum(abs(d) for d in delta) != 2:
        raise UsageError("inputs must differ by one single-element exchange")
    r, s = rs[0], ss[0]

    t_loads = tuple(t[g] + z[g] for g in range(m))
    u_loads = tuple(u[g] + z[g] for g in range(m))
    top_t = max(t_loads)
    top_u = max(u_loads)
    S_t = {g for g in range(m) if t_loads[g] == top_t}
    S_u = {g for g in range(m) if u_loads[g] == top_u}

    kap_t = kappa_star(t_loads, budget)
    kap_u = kappa_star(u_loads, budget)
    lhs = sum((kap_t[g] for g in range(m) if t[g]), Fraction(0))
    rhs = sum((kap_u[g] for g in range(m) if u[g]), Fraction(0))

    if s not in S_u:
        case = "1"
    elif s in S_t:
        case = "2a"
    else:
        case = "2b" + ("-empty" if not (S_t & {g for g in range(m) if t[g]}) else
                       ("-r-max" if r in S_t else "-r-not-max"))
    guard = t_loads[r] <= u_loads[s]
    return CaseAudit(case, guard, lhs, rhs, lhs <= rhs)

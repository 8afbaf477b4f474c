"""Exact potentials for the two consistent cost classes, plus the property tester.

The normative contract is the exact-potential identity
P(y, x_{-i}) - P(x) = pi_i(y, x_{-i}) - pi_i(x); both potentials below
satisfy it in exact rational arithmetic.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from typing import Callable, NamedTuple, Optional

from .core import Game, Profile, deviate, load_of, private_cost
from .costs import Affine, SeparablePlusLinear
from .errors import UsageError


def _require_symmetric(A) -> None:
    m = len(A)
    for r in range(m):
        for s in range(r + 1, m):
            if A[r][s] != A[s][r]:
                raise UsageError(f"interaction matrix is asymmetric at ({r},{s})")


def _quad(A, u, v):
    total = 0
    for r, ur in enumerate(u):
        if not ur:
            continue
        row = A[r]
        acc = 0
        for s, vs in enumerate(v):
            if vs and row[s]:
                acc += row[s] * vs
        total += ur * acc
    return total


def potential_unweighted(game: Game, profile: Profile):
    """sum_r sum_{k<=x_r} f_r(k) + 1/2 x^T A x + 1/2 sum_i x_i^T A x_i."""
    model = game.cost_model
    if not isinstance(model, SeparablePlusLinear):
        raise UsageError("unweighted potential needs a separable-plus-linear cost model")
    if not game.unweighted:
        raise UsageError("unweighted potential requires unit weights")
    _require_symmetric(model.A)
    loads = load_of(game, profile)
    total = Fraction(0)
    for r, xr in enumerate(loads):
        for k in range(1, int(xr) + 1):
            total += model.f[r][k]
    total += Fraction(1, 2) * _quad(model.A, loads, loads)
    for v in profile:
        total += Fraction(1, 2) * _quad(model.A, v, v)
    return total


def potential_weighted_affine(game: Game, profile: Profile):
    """Sequential sum sum_i x_i^T (A x_{<=i} + b); order-invariant for symmetric A."""
    model = game.cost_model
    if not isinstance(model, Affine):
        raise UsageError("weighted potential needs an affine cost model")
    _require_symmetric(model.A)
    prefix = [0] * game.n_resources
    total = Fraction(0)
    for v in profile:
        for r, e in enumerate(v):
            if e:
                prefix[r] += e
        total += _quad(model.A, v, prefix)
        total += sum(e * model.b[r] for r, e in enumerate(v) if e)
    return total


class PotentialCheck(NamedTuple):
    ok: bool
    witness: Optional[tuple]  # (profile, player, deviation) on failure


def check_exact_potential(
    game: Game,
    P: Callable[[Profile], object],
    cap: int = 10**6,
    tol: float = 0.0,
) -> PotentialCheck:
    """Verify dP = dpi_i over all profiles, players, and unilateral deviations."""
    spaces = [p.strategies(cap=cap) for p in game.players]
    for choices in product(*spaces):
        x = tuple(choices)
        px = P(x)
        for i in range(game.n_players):
            pi_x = private_cost(game, x, i)
            for y in spaces[i]:
                if y == x[i]:
                    continue
                x2 = deviate(x, i, y)
                lhs = P(x2) - px
                rhs = private_cost(game, x2, i) - pi_x
                diff = lhs - rhs
                if (abs(diff) > tol) if tol else (diff != 0):
                    return PotentialCheck(False, (x, i, y))
    return PotentialCheck(True, None)

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from rggames.core import (
    Explicit,
    Game,
    Player,
    deviate,
    load_of,
    private_cost,
    profile_space_size,
    validate_profile,
)
from rggames.costs import Affine, SeparablePlusLinear
from rggames.errors import StructureError


def affine_identity(m):
    rows = tuple(tuple(Fraction(1 if r == s else 0) for s in range(m)) for r in range(m))
    return Affine(A=rows, b=tuple(Fraction(0) for _ in range(m)))


def simple_game(m=2, n=2, cost=None):
    space = Explicit(vectors=tuple(tuple(1 if r == k else 0 for r in range(m)) for k in range(m)))
    players = tuple(Player(strategy_space=space) for _ in range(n))
    return Game(n_resources=m, players=players, cost_model=cost or affine_identity(m))


class TestLoadOf:
    def test_componentwise_sum(self):
        game = simple_game()
        # choose (1,0) and (0,1); also check an overlapping pair
        assert load_of(game, ((1, 0), (0, 1))) == (1, 1)
        assert load_of(game, ((1, 0), (1, 0))) == (2, 0)

    def test_no_players(self):
        game = Game(n_resources=3, players=(), cost_model=affine_identity(3))
        assert load_of(game, ()) == (0, 0, 0)

    def test_rational_weights(self):
        space = Explicit(vectors=((1, 0),))
        players = (
            Player(weight=Fraction(1, 2), strategy_space=space),
            Player(weight=Fraction(3, 2), strategy_space=space),
        )
        game = Game(n_resources=2, players=players, cost_model=affine_identity(2))
        profile = tuple(p.strategies()[0] for p in players)
        assert load_of(game, profile) == (2, 0)

    def test_dimension_mismatch(self):
        game = simple_game()
        with pytest.raises(StructureError):
            load_of(game, ((1, 0, 0), (0, 1)))


class TestPrivateCost:
    def test_single_player_identity_cost(self):
        game = simple_game(m=1, n=1, cost=Affine(A=((Fraction(1),),), b=(Fraction(0),)))
        assert private_cost(game, ((1,),), 0) == 1

    def test_empty_vector_costs_zero(self):
        space = Explicit(vectors=((0, 0), (1, 0)))
        game = Game(
            n_resources=2,
            players=(Player(strategy_space=space),),
            cost_model=affine_identity(2),
        )
        assert private_cost(game, ((0, 0),), 0) == 0

    def test_quadratic_separable(self):
        # f1(k) = k^2, f2 = 0, no interaction; two players sharing resource 1 pay 4 each
        f = (tuple(Fraction(k * k) for k in range(4)), tuple(Fraction(0) for _ in range(4)))
        A = ((Fraction(0), Fraction(0)), (Fraction(0), Fraction(0)))
        game = simple_game(cost=SeparablePlusLinear(f=f, A=A))
        profile = ((1, 0), (1, 0))
        assert private_cost(game, profile, 0) == 4
        assert private_cost(game, profile, 1) == 4

    def test_depends_only_on_aggregate_load(self):
        game = simple_game(m=2, n=3)
        a = ((1, 0), (0, 1), (1, 0))
        b = ((1, 0), (1, 0), (0, 1))  # others permuted, same aggregate for player 0
        assert private_cost(game, a, 0) == private_cost(game, b, 0)


class TestDeviate:
    def test_identity(self):
        profile = ((1, 0), (0, 1))
        assert deviate(profile, 0, (1, 0)) == profile

    def test_single_player(self):
        assert deviate(((1, 0),), 0, (0, 1)) == ((0, 1),)

    def test_frame_condition(self):
        profile = ((1, 0), (0, 1), (1, 0))
        out = deviate(profile, 1, (1, 0))
        assert out[0] == profile[0] and out[2] == profile[2] and out[1] == (1, 0)

    def test_bad_index(self):
        with pytest.raises(StructureError):
            deviate(((1, 0),), 3, (0, 1))


@given(
    st.integers(min_value=1, max_value=4),
    st.data(),
)
def test_load_of_deviate_identity(m, data):
    k = data.draw(st.integers(min_value=1, max_value=3))
    vectors = st.tuples(*[st.integers(min_value=0, max_value=1) for _ in range(m)])
    space = Explicit(
        vectors=tuple(data.draw(vectors) for _ in range(3))
    )
    players = tuple(Player(strategy_space=space) for _ in range(k))
    game = Game(n_resources=m, players=players, cost_model=affine_identity(m))
    profile = tuple(data.draw(st.sampled_from(space.vectors)) for _ in range(k))
    i = data.draw(st.integers(min_value=0, max_value=k - 1))
    y = data.draw(st.sampled_from(space.vectors))
    before = load_of(game, profile)
    after = load_of(game, deviate(profile, i, y))
    expected = tuple(before[r] - profile[i][r] + y[r] for r in range(m))
    assert after == expected


class TestStructure:
    def test_explicit_deduplicates_and_sorts(self):
        space = Explicit(vectors=((1, 0), (0, 1), (1, 0)))
        assert space.vectors == ((0, 1), (1, 0))

    def test_explicit_rejects_non_binary(self):
        with pytest.raises(StructureError):
            Explicit(vectors=((2, 0),))

    def test_empty_space_rejected(self):
        with pytest.raises(StructureError):
            Explicit(vectors=())

    def test_weight_must_be_positive(self):
        with pytest.raises(StructureError):
            Player(weight=0, strategy_space=Explicit(vectors=((1,),)))

    def test_game_checks_dimensions(self):
        with pytest.raises(StructureError):
            Game(
                n_resources=3,
                players=(Player(strategy_space=Explicit(vectors=((1, 0),))),),
                cost_model=affine_identity(3),
            )

    def test_weighted_strategies_scale(self):
        p = Player(weight=Fraction(3, 2), strategy_space=Explicit(vectors=((1, 0),)))
        assert p.strategies() == ((Fraction(3, 2), Fraction(0)),)

    def test_validate_profile(self):
        game = simple_game()
        validate_profile(game, ((1, 0), (0, 1)))
        with pytest.raises(StructureError):
            validate_profile(game, ((1, 1), (0, 1)))

    def test_profile_space_size(self):
        assert profile_space_size(simple_game(m=2, n=3)) == 8

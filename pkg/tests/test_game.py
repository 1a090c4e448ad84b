import json

import numpy as np
import pytest

import stochgames as sg
from oracles import random_game

from conftest import FIXTURES


def minimal_game_doc():
    return json.dumps(
        {
            "states": ["s"],
            "dynamics": {"s": {"a": {"b": {"payment": 0, "transition": {"s": 1}}}}},
        }
    )


class TestParse:
    def test_sec7_fixture_parses(self, sec7_game):
        assert sec7_game.n == 4
        assert sec7_game.states == ("1", "2", "3", "4")
        assert sec7_game.option("1", "a1", "b1").payment == 2
        assert sec7_game.option("2", "a1", "b1").transition == {"1": 0.5, "2": 0.5}

    def test_minimal_game(self):
        game = sg.parse_game(minimal_game_doc())
        assert game.n == 1
        assert game.option("s", "a", "b").transition == {"s": 1.0}

    def test_fraction_strings_exact(self):
        doc = minimal_game_doc().replace('{"s": 1}', '{"s": "3/3"}')
        game = sg.parse_game(doc)
        assert game.option("s", "a", "b").transition["s"] == 1.0

    def test_row_sum_violation(self):
        doc = minimal_game_doc().replace('{"s": 1}', '{"s": 0.9}')
        with pytest.raises(sg.StochasticityError):
            sg.parse_game(doc)

    def test_negative_probability(self):
        doc = json.dumps(
            {
                "states": ["s", "t"],
                "dynamics": {
                    "s": {"a": {"b": {"payment": 0, "transition": {"s": 1.5, "t": -0.5}}}},
                    "t": {"a": {"b": {"payment": 0, "transition": {"t": 1}}}},
                },
            }
        )
        with pytest.raises(sg.StochasticityError):
            sg.parse_game(doc)

    def test_unknown_state_label(self):
        doc = minimal_game_doc().replace('{"s": 1}', '{"zz": 1}')
        with pytest.raises(sg.GameFormatError):
            sg.parse_game(doc)

    def test_syntax_error_carries_position(self):
        with pytest.raises(sg.GameFormatError) as err:
            sg.parse_game("{\n  broken")
        assert err.value.line == 2

    def test_missing_min_action(self):
        doc = json.dumps({"states": ["s"], "dynamics": {"s": {}}})
        with pytest.raises(sg.GameFormatError):
            sg.parse_game(doc)

    def test_round_trip(self, sec7_game):
        text = sg.serialize_game(sec7_game)
        again = sg.parse_game(text)
        assert again == sec7_game
        assert sg.serialize_game(again) == text

    def test_round_trip_random_games(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            game = random_game(rng, int(rng.integers(1, 5)))
            assert sg.parse_game(sg.serialize_game(game)) == game


class TestSupport:
    def test_sec7_support_counts(self, sec7_support):
        assert sec7_support.n == 4
        assert sec7_support.m1 == 6
        assert sec7_support.m2 == 9

    def test_sec7_chance_rows(self, sec7_game, sec7_support):
        # the four half-half branches have two-element supports
        halves = {
            row.successors
            for row in sec7_support.rows
            if len(row.successors) == 2
        }
        as_labels = {tuple(sec7_game.states[j] for j in succ) for succ in halves}
        assert as_labels == {("1", "2"), ("1", "3"), ("2", "4"), ("3", "4")}

    def test_deterministic_rows_are_singletons(self):
        game = sg.parse_game(minimal_game_doc())
        support = sg.extract_support(game)
        assert all(len(r.successors) == 1 for r in support.rows)

    def test_explicit_half_row(self):
        doc = json.dumps(
            {
                "states": ["1", "2", "3", "4"],
                "dynamics": {
                    "1": {"a": {"b": {"payment": 0, "transition": {"1": 0.5, "2": 0.5}}}},
                    "2": {"a": {"b": {"payment": 0, "transition": {"2": 1}}}},
                    "3": {"a": {"b": {"payment": 0, "transition": {"3": 1}}}},
                    "4": {"a": {"b": {"payment": 0, "transition": {"4": 1}}}},
                },
            }
        )
        support = sg.extract_support(sg.parse_game(doc))
        assert support.successors("1", "a", "b") == (0, 1)

    def test_subthreshold_entry_warns(self):
        doc = json.dumps(
            {
                "states": ["1", "2"],
                "dynamics": {
                    "1": {"a": {"b": {"payment": 0, "transition": {"1": 1.0, "2": 1e-13}}}},
                    "2": {"a": {"b": {"payment": 0, "transition": {"2": 1}}}},
                },
            }
        )
        game = sg.parse_game(doc)
        with pytest.warns(UserWarning):
            support = sg.extract_support(game)
        assert support.successors("1", "a", "b") == (0,)

    def test_support_invariant_under_perturbation(self, sec7_game, sec7_support):
        rng = np.random.default_rng(1)
        for _ in range(5):
            g = rng.normal(size=sec7_game.n)
            assert sg.extract_support(sg.perturb_payments(sec7_game, g)) == sec7_support


class TestPerturb:
    def test_zero_perturbation(self, sec7_game):
        same = sg.perturb_payments(sec7_game, [0, 0, 0, 0])
        assert same == sec7_game

    def test_state_one_shift(self, sec7_game):
        shifted = sg.perturb_payments(sec7_game, [1, 0, 0, 0])
        assert shifted.option("1", "a1", "b1").payment == 3
        assert shifted.option("1", "a2", "b1").payment == 2
        assert shifted.option("2", "a1", "b1").payment == -2

    def test_length_mismatch(self, sec7_game):
        with pytest.raises(sg.PreconditionError):
            sg.perturb_payments(sec7_game, [1, 2])

    def test_proof_driven_bounds(self, sec7_game):
        # with payments shifted by s * eta for a recession fixed point eta,
        # every scaled iterate is pinched between s*eta -/+ max|r|
        eta = np.array([0.0, 0.0, 0.5, 1.0])
        C = sec7_game.max_abs_payment()
        for s in range(1, 6):
            shifted = sg.perturb_payments(sec7_game, s * eta)
            est = sg.value_iteration(shifted, 300) / 300
            assert np.all(est >= s * eta - C - 1e-9)
            assert np.all(est <= s * eta + C + 1e-9)


class TestSimulate:
    def _policy(self, game):
        min_policy = {s: sorted(game.dynamics[s])[0] for s in game.states}
        max_policy = {
            (s, a): sorted(spec.max_actions)[0]
            for s in game.states
            for a, spec in game.dynamics[s].items()
        }
        return sg.Policy(min_policy, max_policy)

    def test_horizon_zero(self, sec7_game):
        tr = sg.simulate(sec7_game, self._policy(sec7_game), "1", 0, 3)
        assert tr.states == ("1",)
        assert tr.steps == ()
        assert tr.total_payoff == 0

    def test_reproducible(self, sec7_game):
        policy = self._policy(sec7_game)
        a = sg.simulate(sec7_game, policy, "2", 50, 11)
        b = sg.simulate(sec7_game, policy, "2", 50, 11)
        assert a == b

    def test_confining_min_policy_sec7(self, sec7_game):
        # min policy that keeps play in {1, 2}: state 2 must avoid the
        # action whose branch reaches state 3
        policy = sg.Policy(
            {"1": "a2", "2": "a1", "3": "a1", "4": "a1"},
            {
                ("1", "a1"): "b1", ("1", "a2"): "b1",
                ("2", "a1"): "b1", ("2", "a2"): "b1",
                ("3", "a1"): "b2", ("4", "a1"): "b2",
            },
        )
        tr = sg.simulate(sec7_game, policy, "1", 10_000, 5)
        assert set(tr.states) <= {"1", "2"}

    def test_deterministic_two_cycle(self):
        doc = json.dumps(
            {
                "states": ["1", "2"],
                "dynamics": {
                    "1": {"a": {"b": {"payment": 1, "transition": {"2": 1}}}},
                    "2": {"a": {"b": {"payment": 0, "transition": {"1": 1}}}},
                },
            }
        )
        game = sg.parse_game(doc)
        tr = sg.simulate(game, self._policy(game), "1", 4, 0)
        assert tr.states == ("1", "2", "1", "2", "1")
        assert tr.total_payoff == 2

    def test_steps_follow_support(self, sec7_game, sec7_support):
        policy = self._policy(sec7_game)
        for seed in range(5):
            tr = sg.simulate(sec7_game, policy, "3", 200, seed)
            for step, nxt in zip(tr.steps, tr.states[1:]):
                succ = sec7_support.successors(step.state, step.min_action, step.max_action)
                assert sec7_game.index(nxt) in succ
            assert tr.total_payoff == pytest.approx(sum(s.payment for s in tr.steps))

    def test_bad_start(self, sec7_game):
        with pytest.raises(sg.PreconditionError):
            sg.simulate(sec7_game, self._policy(sec7_game), "zz", 5, 0)

    def test_bad_policy(self, sec7_game):
        policy = sg.Policy({"1": "nope"}, {})
        with pytest.raises(sg.PreconditionError):
            sg.simulate(sec7_game, policy, "1", 5, 0)

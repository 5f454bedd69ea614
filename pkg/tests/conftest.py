import numpy as np
import pytest

import mgincept as mg


def single_step_game(a, b):
    """One-state, one-step game from a pair of n x m payoff matrices."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    n, m = a.shape
    transitions = np.ones((1, 1, n, m, 1))
    return mg.MarkovGame(1, 1, n, m, [1.0], [[[a]], [[b]]], transitions)


def pure_stage_policy(player, action, k, horizon=1, states=1):
    actions = np.full((horizon, states), action, dtype=int)
    return mg.MarkovPolicy.deterministic(player, actions, k)


@pytest.fixture
def decoy_game():
    """Matching game for the victim; the attacker is paid only on (0, 0).

    The victim's matrix makes action 1 the best response to attacker action
    0 and vice versa; the attacker's true preference is column 0.  Faking a
    preference for column 1 baits the victim into row 0, worth 5.
    """
    return single_step_game([[0.0, 1.0], [1.0, 0.0]], [[5.0, 0.0], [0.0, 0.0]])


@pytest.fixture
def decoy_beliefs():
    """Singleton beliefs for each pure attacker action of decoy_game."""
    return {
        0: mg.BeliefSet((pure_stage_policy(2, 0, 2),)),
        1: mg.BeliefSet((pure_stage_policy(2, 1, 2),)),
    }


def chain_game(seed=0, horizon=2, states=2, n=2, m=2):
    """Small random game with well-spread transitions, seeded."""
    from mgincept.oracle import random_game

    return random_game(np.random.default_rng(seed), horizon, states, n, m)


def random_policy(rng, player, horizon, states, k):
    entries = rng.uniform(0.05, 1.0, (horizon, states, k))
    entries /= entries.sum(axis=2, keepdims=True)
    return mg.MarkovPolicy(player, entries)

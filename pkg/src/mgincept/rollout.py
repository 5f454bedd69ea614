"""Seeded Monte Carlo rollouts of a fixed policy pair.

The generator is PCG64 (numpy's named 64-bit generator), so runs replay
bit-for-bit across platforms given the same seed.  Each episode consumes a
fixed layout of uniforms: one draw for the initial state, then per step one
draw each for the victim action, attacker action and next state (the last
next-state draw is consumed even though unused, keeping the layout simple).
Categorical sampling inverts the cumulative distribution, so a one-hot row
always yields its hot index and deterministic instances have zero variance.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import MarkovGame, MarkovPolicy, _check_policy


@dataclass(frozen=True)
class RolloutStats:
    """Empirical returns: mean and standard error per player, plus the seed."""

    episodes: int
    mean_returns: np.ndarray
    std_errors: np.ndarray
    seed: int


def _sample(cdf_rows: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Vectorized inverse-CDF draw: row i gets the index where u[i] falls."""
    idx = (cdf_rows <= u[:, None]).sum(axis=1)
    return np.minimum(idx, cdf_rows.shape[1] - 1)


def simulate(g: MarkovGame, pi1: MarkovPolicy, pi2: MarkovPolicy,
             episodes: int, seed: int) -> RolloutStats:
    """Estimate both players' values by seeded rollouts; unbiased for V_i."""
    _check_policy(g, pi1, 1)
    _check_policy(g, pi2, 2)
    if episodes < 1:
        raise ValueError("episodes must be >= 1")
    rng = np.random.Generator(np.random.PCG64(seed))
    H = g.horizon
    u = rng.random((episodes, 1 + 3 * H))

    mu_cdf = np.cumsum(g.mu)
    cdf1 = np.cumsum(pi1.entries, axis=2)          # (H, S, n)
    cdf2 = np.cumsum(pi2.entries, axis=2)          # (H, S, m)
    cdft = np.cumsum(g.transitions, axis=4)        # (H, S, n, m, S)

    step_rewards = np.zeros((episodes, 2, H))
    state = _sample(np.broadcast_to(mu_cdf, (episodes, g.num_states)), u[:, 0])
    for h in range(H):
        a1 = _sample(cdf1[h, state], u[:, 1 + 3 * h])
        a2 = _sample(cdf2[h, state], u[:, 2 + 3 * h])
        step_rewards[:, 0, h] = g.rewards[0, h, state, a1, a2]
        step_rewards[:, 1, h] = g.rewards[1, h, state, a1, a2]
        state = _sample(cdft[h, state, a1, a2], u[:, 3 + 3 * h])

    # sum steps in backward order, matching the exact evaluator's grouping so
    # deterministic instances reproduce its values bit-for-bit
    returns = step_rewards[:, :, H - 1].copy()
    for h in range(H - 2, -1, -1):
        returns += step_rewards[:, :, h]

    mean = np.empty(2)
    se = np.zeros(2)
    for i in range(2):
        col = returns[:, i]
        if np.all(col == col[0]):  # zero-variance: the mean is exact
            mean[i] = col[0]
        else:
            mean[i] = col.mean()
            if episodes > 1:
                se[i] = col.std(ddof=1) / np.sqrt(episodes)
    return RolloutStats(episodes=episodes, mean_returns=mean, std_errors=se, seed=seed)

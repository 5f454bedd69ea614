"""Backward induction for the attacker's worst-case optimal Markov policy.

Given a validated game and a finitely generated victim belief, solve one
stage game per (step, state) from the last layer backwards.  Within a layer
the per-state solves are independent; layers are strictly sequential.
Worst-case values are unique, so the value tables are reproducible
bit-for-bit through the deterministic LP engine even though the returned
policy may be any optimal vertex.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import (
    BeliefSet,
    MarkovGame,
    MarkovPolicy,
    ValueTables,
    _player_index,
    require_valid,
    stage_mix_matrix,
)
from .stage import MAX_BELIEF_POLICIES, StageBR, nf_attacker_best_response

DEFAULT_STAGE_BUDGET = 200_000


@dataclass(frozen=True)
class QMatrices:
    """Per-(player, step, state) stage payoff matrices, shape (2, H, S, n, m)."""

    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 5 or values.shape[0] != 2:
            raise ValueError(f"q matrices must be (2, H, S, n, m), got {values.shape}")
        if not np.all(np.isfinite(values)):
            raise ValueError("q matrices must be finite")
        values = values.copy()
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    def stage(self, player: int, h: int, s: int) -> np.ndarray:
        return self.values[_player_index(player), h, s]


@dataclass(frozen=True)
class BRSolveReport:
    """Result of the full backward pass: attacker policy, value and Q tables."""

    pi2_star: MarkovPolicy
    v: ValueTables
    q: QMatrices
    v1_root: float
    v2_root: float


def q_from_v(g: MarkovGame, player: int, h: int, v_next) -> np.ndarray:
    """Stage payoffs at step h from the next layer's values, shape (S, n, m)."""
    i = _player_index(player)
    v_next = np.asarray(v_next, dtype=float)
    if v_next.shape != (g.num_states,):
        raise ValueError(f"v_next has shape {v_next.shape}, expected ({g.num_states},)")
    if not (0 <= h < g.horizon):
        raise ValueError(f"step {h} out of range for horizon {g.horizon}")
    return g.rewards[i, h] + g.transitions[h] @ v_next


def clean_mix(y: np.ndarray) -> np.ndarray:
    """Snap an LP-produced mix onto the simplex (clip tiny negatives, rescale).

    Solver output satisfies the simplex constraints to ~1e-12 but policy
    construction validates exactly; the snap changes entries by at most the
    solver's own rounding error.
    """
    y = np.clip(np.asarray(y, dtype=float), 0.0, None)
    total = y.sum()
    if total <= 0.0:
        raise ValueError("mix has no positive mass")
    return y / total


def _check_budget(g: MarkovGame, k: int, budget: int) -> None:
    cost = g.horizon * g.num_states * max(g.n, g.m, k)
    if cost > budget:
        raise ValueError(
            f"instance size H*S*max(n,m,K) = {cost} exceeds solve budget {budget}"
        )


def markov_attacker_best_response(
    g: MarkovGame,
    belief: BeliefSet,
    *,
    k_cap: int = MAX_BELIEF_POLICIES,
    budget: int = DEFAULT_STAGE_BUDGET,
) -> BRSolveReport:
    """Compute an attacker policy that is worst-case optimal against the belief.

    Backward induction over stage games: at each (h, s) build both players'
    stage payoffs from the next layer's worst-case values, then run the
    two-LP stage solve against the belief's stage mixes.
    """
    require_valid(g)
    if not belief.matches(g):
        raise ValueError("belief dimensions do not match game")
    if belief.size > k_cap:
        raise ValueError(f"belief size {belief.size} exceeds cap {k_cap}")
    _check_budget(g, belief.size, budget)

    H, S = g.horizon, g.num_states
    values = np.zeros((2, H + 1, S))
    qvals = np.zeros((2, H, S, g.n, g.m))
    pi2 = np.zeros((H, S, g.m))
    for h in range(H - 1, -1, -1):
        qvals[0, h] = q_from_v(g, 1, h, values[0, h + 1])
        qvals[1, h] = q_from_v(g, 2, h, values[1, h + 1])
        for s in range(S):
            br: StageBR = nf_attacker_best_response(
                stage_mix_matrix(belief, h, s), qvals[0, h, s], qvals[1, h, s],
                k_cap=k_cap,
            )
            values[0, h, s] = br.z_star
            values[1, h, s] = br.v2_star
            pi2[h, s] = clean_mix(br.y_star)
    tables = ValueTables(values)
    v1_root, v2_root = tables.root(g.mu)
    return BRSolveReport(
        pi2_star=MarkovPolicy(2, pi2),
        v=tables,
        q=QMatrices(qvals),
        v1_root=v1_root,
        v2_root=v2_root,
    )


def secure_belief(g: MarkovGame) -> BeliefSet:
    """The belief of a victim that trusts nothing: all m constant pure policies.

    Per-stage mixtures of these bases span every attacker policy, so solving
    against this belief is solving against a maximin (security) victim.
    """
    bases = []
    for j in range(g.m):
        actions = np.full((g.horizon, g.num_states), j, dtype=int)
        bases.append(MarkovPolicy.deterministic(2, actions, g.m))
    return BeliefSet(tuple(bases))

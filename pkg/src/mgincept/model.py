"""Core data model: Markov games, Markov policies, belief sets, value tables.

Conventions used throughout the package:

* Steps, states and actions are 0-indexed. A game with horizon H has step
  layers h = 0 .. H-1 and value layers h = 0 .. H (layer H is terminal and
  identically zero).
* Player 1 is the victim (row player, n actions), player 2 is the attacker
  (column player, m actions).
* Probability vectors are validated to sum to 1 within 1e-12 and are never
  renormalized: invalid inputs are rejected so downstream math stays exact.

All types are immutable after construction (frozen dataclasses over
read-only numpy arrays) and safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

PROB_TOL = 1e-12
MEMBERSHIP_TOL = 1e-9


class InvalidGameError(ValueError):
    """Raised when an operation requires a game that fails validation."""

    def __init__(self, report: "ValidationReport"):
        self.report = report
        super().__init__("game failed validation:\n" + "\n".join(report.messages()))


def _frozen(a, dtype=float) -> np.ndarray:
    arr = np.array(a, dtype=dtype)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class MarkovGame:
    """A finite-horizon two-player Markov game.

    Fields
    ------
    horizon      number of steps H >= 1
    num_states   number of states
    n, m         victim / attacker action counts
    mu           initial state distribution, shape (S,)
    rewards      per-player stage rewards, shape (2, H, S, n, m)
    transitions  next-state distributions, shape (H, S, n, m, S)

    Construction checks shapes and basic typing only; value-level
    invariants (probability sums, finiteness) are checked by
    :func:`validate_game` which reports rather than raises.
    """

    horizon: int
    num_states: int
    n: int
    m: int
    mu: np.ndarray
    rewards: np.ndarray
    transitions: np.ndarray

    def __post_init__(self):
        for name in ("horizon", "num_states", "n", "m"):
            v = getattr(self, name)
            if not isinstance(v, (int, np.integer)) or v < 1:
                raise ValueError(f"{name} must be a positive integer, got {v!r}")
            object.__setattr__(self, name, int(v))
        H, S, n, m = self.horizon, self.num_states, self.n, self.m
        mu = _frozen(self.mu)
        rewards = _frozen(self.rewards)
        transitions = _frozen(self.transitions)
        if mu.shape != (S,):
            raise ValueError(f"mu has shape {mu.shape}, expected {(S,)}")
        if rewards.shape != (2, H, S, n, m):
            raise ValueError(
                f"rewards have shape {rewards.shape}, expected {(2, H, S, n, m)}"
            )
        if transitions.shape != (H, S, n, m, S):
            raise ValueError(
                f"transitions have shape {transitions.shape}, expected {(H, S, n, m, S)}"
            )
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "rewards", rewards)
        object.__setattr__(self, "transitions", transitions)

    def reward_matrix(self, player: int, h: int, s: int) -> np.ndarray:
        """The n x m stage reward matrix of `player` (1 or 2) at (h, s)."""
        return self.rewards[_player_index(player), h, s]

    def with_attacker_rewards(self, fake: np.ndarray) -> "MarkovGame":
        """A copy of this game whose player-2 rewards are replaced by `fake`."""
        rewards = np.array(self.rewards)
        rewards[1] = fake
        return MarkovGame(
            self.horizon, self.num_states, self.n, self.m,
            self.mu, rewards, self.transitions,
        )


def _player_index(player: int) -> int:
    if player not in (1, 2):
        raise ValueError(f"player must be 1 or 2, got {player!r}")
    return player - 1


@dataclass(frozen=True)
class MarkovPolicy:
    """A Markov policy: a mixed action distribution per (step, state).

    `entries` has shape (H, S, k) with k = n for player 1 and k = m for
    player 2.  Every entry row must be a distribution (>= 0, sums to 1
    within 1e-12); violating rows are rejected at construction.
    """

    player: int
    entries: np.ndarray

    def __post_init__(self):
        _player_index(self.player)
        entries = _frozen(self.entries)
        if entries.ndim != 3:
            raise ValueError(f"policy entries must be (H, S, k), got {entries.shape}")
        if not np.all(np.isfinite(entries)):
            raise ValueError("policy entries must be finite")
        if np.any(entries < 0):
            h, s, a = np.unravel_index(int(np.argmin(entries)), entries.shape)
            raise ValueError(f"negative action probability at (h={h}, s={s}, a={a})")
        sums = entries.sum(axis=2)
        if np.any(np.abs(sums - 1.0) > PROB_TOL):
            h, s = np.unravel_index(int(np.argmax(np.abs(sums - 1.0))), sums.shape)
            raise ValueError(
                f"policy row at (h={h}, s={s}) sums to {sums[h, s]!r}, expected 1"
            )
        object.__setattr__(self, "entries", entries)

    @property
    def horizon(self) -> int:
        return self.entries.shape[0]

    @property
    def num_states(self) -> int:
        return self.entries.shape[1]

    @property
    def num_actions(self) -> int:
        return self.entries.shape[2]

    @property
    def is_deterministic(self) -> bool:
        """True iff every stage entry is exactly one-hot."""
        e = self.entries
        return bool(np.all((e == 0.0) | (e == 1.0)) and np.all(e.sum(axis=2) == 1.0))

    def action_at(self, h: int, s: int) -> int:
        """The chosen action of a deterministic policy at (h, s)."""
        if not self.is_deterministic:
            raise ValueError("action_at requires a deterministic policy")
        return int(np.argmax(self.entries[h, s]))

    @staticmethod
    def deterministic(player: int, actions, num_actions: int) -> "MarkovPolicy":
        """Build a deterministic policy from an (H, S) array of action indices."""
        actions = np.asarray(actions, dtype=int)
        if actions.ndim != 2:
            raise ValueError("actions must be an (H, S) integer array")
        if np.any(actions < 0) or np.any(actions >= num_actions):
            raise ValueError("action index out of range")
        H, S = actions.shape
        entries = np.zeros((H, S, num_actions))
        hh, ss = np.meshgrid(np.arange(H), np.arange(S), indexing="ij")
        entries[hh, ss, actions] = 1.0
        return MarkovPolicy(player, entries)

    @staticmethod
    def uniform(player: int, horizon: int, num_states: int, num_actions: int) -> "MarkovPolicy":
        entries = np.full((horizon, num_states, num_actions), 1.0 / num_actions)
        return MarkovPolicy(player, entries)


@dataclass(frozen=True)
class BeliefSet:
    """A finitely generated belief over attacker policies.

    Holds the ordered base policies; semantically the belief is the set of
    all per-stage convex mixtures of the bases.
    """

    base: tuple

    def __post_init__(self):
        base = tuple(self.base)
        if len(base) < 1:
            raise ValueError("belief set needs at least one base policy")
        first = base[0]
        for p in base:
            if not isinstance(p, MarkovPolicy) or p.player != 2:
                raise ValueError("belief base policies must be attacker (player 2) policies")
            if p.entries.shape != first.entries.shape:
                raise ValueError("belief base policies must share (H, S, m) dimensions")
        object.__setattr__(self, "base", base)

    @property
    def size(self) -> int:
        return len(self.base)

    @property
    def horizon(self) -> int:
        return self.base[0].horizon

    @property
    def num_states(self) -> int:
        return self.base[0].num_states

    @property
    def num_actions(self) -> int:
        return self.base[0].num_actions

    def matches(self, g: MarkovGame) -> bool:
        return (self.horizon, self.num_states, self.num_actions) == (
            g.horizon, g.num_states, g.m,
        )


@dataclass(frozen=True)
class ValueTables:
    """Per-(player, layer, state) values with a zero terminal layer.

    `values` has shape (2, H+1, S); layer H must be exactly zero.
    """

    values: np.ndarray

    def __post_init__(self):
        values = _frozen(self.values)
        if values.ndim != 3 or values.shape[0] != 2 or values.shape[1] < 2:
            raise ValueError(f"value tables must be (2, H+1, S), got {values.shape}")
        if np.any(values[:, -1, :] != 0.0):
            raise ValueError("terminal value layer must be exactly zero")
        object.__setattr__(self, "values", values)

    @property
    def horizon(self) -> int:
        return self.values.shape[1] - 1

    def player(self, player: int) -> np.ndarray:
        return self.values[_player_index(player)]

    def root(self, mu) -> tuple:
        """Scalar values (V1, V2) at the root, weighted by the initial distribution."""
        mu = np.asarray(mu, dtype=float)
        return float(mu @ self.values[0, 0]), float(mu @ self.values[1, 0])


@dataclass(frozen=True)
class Violation:
    """One violated invariant, with the coordinates where it was found."""

    code: str
    coords: tuple
    detail: str

    def __str__(self) -> str:
        where = ",".join(f"{k}={v}" for k, v in self.coords)
        return f"{self.code} at ({where}): {self.detail}" if where else f"{self.code}: {self.detail}"


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return len(self.violations) == 0

    def messages(self) -> list:
        return [str(v) for v in self.violations]

    def __iter__(self):
        return iter(self.violations)

    def __len__(self) -> int:
        return len(self.violations)


def _check_distribution(vec: np.ndarray, code: str, coords: tuple, out: list) -> None:
    if not np.all(np.isfinite(vec)):
        out.append(Violation(code + "-nonfinite", coords, "non-finite probability entry"))
        return
    if np.any(vec < 0):
        out.append(Violation(code + "-negative", coords, f"negative entry {vec.min()!r}"))
    total = float(vec.sum())
    if abs(total - 1.0) > PROB_TOL:
        out.append(Violation(code + "-sum", coords, f"sums to {total!r}, expected 1"))


def validate_game(g: MarkovGame) -> ValidationReport:
    """Check every value-level invariant of a game; never raises.

    Dimension consistency is enforced at construction, so the report covers
    probability vectors (mu and every transition row) and reward finiteness.
    """
    out: list = []
    _check_distribution(g.mu, "mu", (), out)
    if not np.all(np.isfinite(g.rewards)):
        bad = np.argwhere(~np.isfinite(g.rewards))
        for i, h, s, a1, a2 in bad[:32]:
            out.append(Violation(
                "reward-nonfinite",
                (("player", int(i) + 1), ("h", int(h)), ("s", int(s)),
                 ("a1", int(a1)), ("a2", int(a2))),
                f"value {g.rewards[i, h, s, a1, a2]!r}",
            ))
    rows = g.transitions.reshape(-1, g.num_states)
    finite = np.isfinite(rows).all(axis=1)
    sums = np.where(finite, rows.sum(axis=1, where=np.isfinite(rows)), np.nan)
    bad_rows = ~finite | (rows < 0).any(axis=1) | (np.abs(sums - 1.0) > PROB_TOL)
    for flat in np.nonzero(bad_rows)[0][:64]:
        h, s, a1, a2 = np.unravel_index(flat, (g.horizon, g.num_states, g.n, g.m))
        coords = (("h", int(h)), ("s", int(s)), ("a1", int(a1)), ("a2", int(a2)))
        _check_distribution(g.transitions[h, s, a1, a2], "transition", coords, out)
    return ValidationReport(tuple(out))


def require_valid(g: MarkovGame) -> None:
    """Raise :class:`InvalidGameError` unless the game passes validation."""
    report = validate_game(g)
    if not report.ok:
        raise InvalidGameError(report)


def _check_policy(g: MarkovGame, pi: MarkovPolicy, player: int) -> None:
    if pi.player != player:
        raise ValueError(f"expected a player-{player} policy, got player {pi.player}")
    k = g.n if player == 1 else g.m
    if pi.entries.shape != (g.horizon, g.num_states, k):
        raise ValueError(
            f"policy shape {pi.entries.shape} does not match game "
            f"{(g.horizon, g.num_states, k)}"
        )


def evaluate_policy(g: MarkovGame, pi1: MarkovPolicy, pi2: MarkovPolicy) -> ValueTables:
    """Exact backward-induction evaluation of a fixed policy pair.

    Returns value tables for both players; the scalar root values are
    `result.root(g.mu)`.
    """
    _check_policy(g, pi1, 1)
    _check_policy(g, pi2, 2)
    H, S = g.horizon, g.num_states
    values = np.zeros((2, H + 1, S))
    for h in range(H - 1, -1, -1):
        for i in range(2):
            q = g.rewards[i, h] + g.transitions[h] @ values[i, h + 1]
            values[i, h] = np.einsum("sn,snm,sm->s", pi1.entries[h], q, pi2.entries[h])
    return ValueTables(values)


def stage_mix_matrix(b: BeliefSet, h: int, s: int) -> np.ndarray:
    """The K x m matrix whose row k is base policy k's action mix at (h, s)."""
    if not (0 <= h < b.horizon and 0 <= s < b.num_states):
        raise IndexError(f"(h={h}, s={s}) out of range for belief of shape "
                         f"({b.horizon}, {b.num_states})")
    return np.stack([p.entries[h, s] for p in b.base])


def belief_membership(b: BeliefSet, pi2: MarkovPolicy) -> bool:
    """True iff pi2 is a per-stage convex mixture of the belief's base policies.

    Each (h, s) is checked by a small feasibility LP at tolerance 1e-9.
    """
    from . import lp

    if pi2.player != 2 or pi2.entries.shape != b.base[0].entries.shape:
        raise ValueError("candidate policy does not match belief dimensions")
    K = b.size
    for h in range(b.horizon):
        for s in range(b.num_states):
            rows = stage_mix_matrix(b, h, s)
            target = pi2.entries[h, s]
            eq = [(rows[:, j], float(target[j])) for j in range(b.num_actions)]
            eq.append((np.ones(K), 1.0))
            prog = lp.LinearProgram(
                num_vars=K,
                objective=np.zeros(K),
                ineq=[],
                eq=eq,
                lower_bounds=np.zeros(K),
            )
            if lp.feasible_point(prog, feas_tol=MEMBERSHIP_TOL) is None:
                return False
    return True

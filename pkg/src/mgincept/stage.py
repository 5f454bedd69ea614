"""Stage-game solvers for one normal-form game under a finitely generated belief.

The victim's worst-case best response against K believed attacker mixes is a
small LP over (x, z); the attacker's best response against the victim's
best-response polytope is the dualized LP over (y, w, alpha).  Composing the
two gives the per-stage solve used by the backward-induction passes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .lp import LinearProgram, LpStatus, solve_lp

MAX_BELIEF_POLICIES = 64
VERTEX_MAX_DIM = 6
VERTEX_INCLUDE_TOL = 1e-9
VERTEX_DEDUP_TOL = 1e-8


class StageSolveError(RuntimeError):
    """An internally inconsistent stage solve (e.g. a non-optimal LP status)."""


@dataclass(frozen=True)
class StageBR:
    """Outcome of one stage solve.

    y_star is one optimal attacker mix (any optimal vertex; recorded as
    returned by the deterministic solver), z_star the victim's worst-case
    value, v2_star the attacker's worst-case value z* . sum(w*) - alpha*.
    """

    y_star: np.ndarray
    z_star: float
    v2_star: float
    w_star: np.ndarray
    alpha_star: float


def _as_finite_matrix(a, name: str) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if a.ndim != 2:
        raise ValueError(f"{name} must be a 2-D matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} contains non-finite entries")
    return a


def victim_br_lp(a_prime) -> tuple:
    """Solve the victim's best-response LP for the stacked payoff matrix.

    a_prime is n x K with column j the victim's payoff vector against the
    j-th believed attacker mix.  Returns (x_star, z_star).
    """
    a_prime = _as_finite_matrix(a_prime, "a_prime")
    n, K = a_prime.shape
    ineq = []
    for j in range(K):
        row = np.concatenate([-a_prime[:, j], [1.0]])  # z - x'A'e_j <= 0
        ineq.append((row, 0.0))
    eq = [(np.concatenate([np.ones(n), [0.0]]), 1.0)]
    prog = LinearProgram(
        num_vars=n + 1,
        objective=np.concatenate([np.zeros(n), [1.0]]),
        ineq=ineq,
        eq=eq,
        lower_bounds=np.concatenate([np.zeros(n), [-np.inf]]),
    )
    sol = solve_lp(prog)
    if sol.status != LpStatus.OPTIMAL:  # the feasible region is a nonempty polytope
        raise StageSolveError(f"victim best-response LP returned {sol.status}")
    return sol.v[:n], float(sol.value)


def attacker_br_lp(z_star: float, a_prime, b) -> StageBR:
    """Solve the attacker's dual best-response LP given the victim's optimum.

    z_star must be the optimal value of victim_br_lp on the same a_prime;
    anything else can make this LP unbounded, which is reported as an
    internal inconsistency.
    """
    a_prime = _as_finite_matrix(a_prime, "a_prime")
    b = _as_finite_matrix(b, "b")
    n, K = a_prime.shape
    if b.shape[0] != n:
        raise ValueError(f"b has {b.shape[0]} rows, expected {n}")
    m = b.shape[1]
    # variables: y (m), w (K), alpha (free)
    ineq = []
    for i in range(n):
        row = np.concatenate([-b[i, :], a_prime[i, :], [-1.0]])  # -(By)_i + (A'w)_i - alpha <= 0
        ineq.append((row, 0.0))
    eq = [(np.concatenate([np.ones(m), np.zeros(K), [0.0]]), 1.0)]
    prog = LinearProgram(
        num_vars=m + K + 1,
        objective=np.concatenate([np.zeros(m), z_star * np.ones(K), [-1.0]]),
        ineq=ineq,
        eq=eq,
        lower_bounds=np.concatenate([np.zeros(m + K), [-np.inf]]),
    )
    sol = solve_lp(prog)
    if sol.status != LpStatus.OPTIMAL:
        raise StageSolveError(
            f"attacker best-response LP returned {sol.status}; "
            "z_star is not the victim optimum for this a_prime"
        )
    y = sol.v[:m]
    w = sol.v[m:m + K]
    alpha = float(sol.v[-1])
    return StageBR(
        y_star=y,
        z_star=float(z_star),
        v2_star=float(z_star * w.sum() - alpha),
        w_star=w,
        alpha_star=alpha,
    )


def nf_attacker_best_response(pi_rows, a, b, *, k_cap: int = MAX_BELIEF_POLICIES) -> StageBR:
    """Attacker best response in one normal-form game against belief rows.

    pi_rows is K x m with each row a believed attacker mix; a and b are the
    victim / attacker payoff matrices.  Chains the two LPs: stack A' = A P',
    solve the victim LP for z*, then the attacker LP.
    """
    pi_rows = _as_finite_matrix(pi_rows, "pi_rows")
    a = _as_finite_matrix(a, "a")
    b = _as_finite_matrix(b, "b")
    K, m = pi_rows.shape
    if K > k_cap:
        raise ValueError(f"belief size {K} exceeds cap {k_cap}")
    if a.shape != b.shape or a.shape[1] != m:
        raise ValueError(
            f"shape mismatch: a {a.shape}, b {b.shape}, pi_rows {pi_rows.shape}"
        )
    sums = pi_rows.sum(axis=1)
    if np.any(pi_rows < 0) or np.any(np.abs(sums - 1.0) > 1e-9):
        raise ValueError("pi_rows rows must be distributions")
    a_prime = a @ pi_rows.T
    _, z_star = victim_br_lp(a_prime)
    return attacker_br_lp(z_star, a_prime, b)


def victim_br_vertices(a_prime, z_star: float, *, max_dim: int = VERTEX_MAX_DIM) -> list:
    """All vertices of the victim's best-response polytope, deduplicated.

    The polytope is {x in simplex(n) | x'A'e_j >= z* for all j}.  Vertices
    are enumerated by brute force over active constraint subsets; this is
    oracle machinery and is gated to n <= max_dim.
    """
    a_prime = _as_finite_matrix(a_prime, "a_prime")
    n, K = a_prime.shape
    if n > max_dim:
        raise ValueError(f"vertex enumeration gated to n <= {max_dim}, got n = {n}")
    # candidate active rows: x_i = 0 (first n) and x'A'e_j = z* (next K)
    C = np.vstack([np.eye(n), a_prime.T])
    r = np.concatenate([np.zeros(n), np.full(K, float(z_star))])
    found: list = []
    for combo in itertools.combinations(range(n + K), n - 1):
        M = np.vstack([np.ones((1, n)), C[list(combo)]])
        rhs = np.concatenate([[1.0], r[list(combo)]])
        if np.linalg.matrix_rank(M) < n:
            continue
        try:
            x = np.linalg.solve(M, rhs)
        except np.linalg.LinAlgError:
            continue
        if np.any(x < -VERTEX_INCLUDE_TOL):
            continue
        if np.any(a_prime.T @ x < z_star - VERTEX_INCLUDE_TOL):
            continue
        if not any(np.max(np.abs(x - y)) <= VERTEX_DEDUP_TOL for y in found):
            found.append(x)
    if not found:
        raise StageSolveError("empty best-response polytope; z_star is not optimal")
    return found

"""Monte Carlo sampling of the hidden process under a policy.

The simulator draws true hidden states, feeds the policy only the
filtered belief profile (the same filter used by exact evaluation),
and accumulates discounted rewards of the scheduled projects.

RNG contract: trajectory i of a batch uses ``np.random.default_rng``
seeded with ``seed ^ i`` (Philox-free but splittable enough for
independent streams; the derivation rule, not the generator family, is
the stable part of the contract).  ``estimate_value`` additionally has
a vectorized fast path for policies that expose ``decide_batch``; it
simulates all trajectories in lockstep from a single generator seeded
with ``seed``, so its estimates are deterministic in ``seed`` but not
trajectory-by-trajectory identical to ``sample_trajectory``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .filtering import BeliefProfile, step_profile
from .policy import PolicyRule
from .types import ModelInstance

_SEED_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class Trajectory:
    """One rollout; all state/observation/action labels are 1-based."""

    states: np.ndarray  # (N, T+1) hidden states
    actions: np.ndarray  # (T+1,)
    observations: np.ndarray  # (T+1,) emitted by the active project
    rewards: np.ndarray  # (T+1,)
    discounted_total: float


def _draw(rng: np.random.Generator, pmf: np.ndarray) -> int:
    return int(np.searchsorted(np.cumsum(pmf), rng.random(), side="right"))


def sample_trajectory(
    inst: ModelInstance, policy: PolicyRule, T: int, seed: int
) -> Trajectory:
    """Roll the hidden chains forward for slots 0..T under the policy.

    At each slot the policy sees the current belief profile and picks a
    project; that project earns R(s), transitions, and emits an
    observation which updates its belief.  Passive projects transition
    silently and their beliefs are propagated.
    """
    rng = np.random.default_rng(seed & _SEED_MASK)
    N = inst.n_projects
    A = inst.A.rows
    B = inst.B.rows
    R = inst.R.values

    states = np.empty((N, T + 1), dtype=np.int64)
    actions = np.empty(T + 1, dtype=np.int64)
    observations = np.empty(T + 1, dtype=np.int64)
    rewards = np.empty(T + 1)

    current = np.array([_draw(rng, x.probs) for x in inst.initial_beliefs])
    profile = BeliefProfile(inst.initial_beliefs, 0)

    disc = 0.0
    scale = 1.0
    for t in range(T + 1):
        u = policy.decide(t, profile)
        states[:, t] = current + 1
        actions[t] = u
        rewards[t] = R[current[u - 1]]
        disc += scale * rewards[t]
        scale *= inst.beta

        # Transition every chain, then the active one emits.
        nxt = np.array([_draw(rng, A[s]) for s in current])
        m = _draw(rng, B[nxt[u - 1]]) + 1
        observations[t] = m
        current = nxt
        if t < T:
            profile = step_profile(inst, profile, u, m)

    return Trajectory(states, actions, observations, rewards, disc)


def _estimate_batched(
    inst: ModelInstance, policy: PolicyRule, T: int, n_traj: int, seed: int
) -> tuple[float, float]:
    """Lockstep simulation of all trajectories with one generator."""
    rng = np.random.default_rng(seed & _SEED_MASK)
    N, X = inst.n_projects, inst.n_states
    A = inst.A.rows
    A_T = A.T
    B = inst.B.rows
    R = inst.R.values
    rows = np.arange(n_traj)

    x0 = np.stack([x.probs for x in inst.initial_beliefs])  # (N, X)
    beliefs = np.broadcast_to(x0, (n_traj, N, X)).copy()
    a_cdf = np.cumsum(A, axis=1)
    b_cdf = np.cumsum(B, axis=1)
    current = np.array(
        [np.searchsorted(np.cumsum(x.probs), rng.random(n_traj), side="right")
         for x in inst.initial_beliefs]
    ).T  # (n_traj, N)

    totals = np.zeros(n_traj)
    scale = 1.0
    for t in range(T + 1):
        u = policy.decide_batch(t, beliefs)  # (n_traj,) 0-based
        totals += scale * R[current[rows, u]]
        scale *= inst.beta

        nxt = (a_cdf[current] > rng.random((n_traj, N, 1))).argmax(axis=2)
        active_next = nxt[rows, u]
        obs = (b_cdf[active_next] > rng.random((n_traj, 1))).argmax(axis=1)

        if t < T:
            beliefs = beliefs @ A  # propagate: each row x -> A' x
            z = beliefs[rows, u]  # (n_traj, X)
            num = z * B[:, obs].T
            beliefs[rows, u] = num / num.sum(axis=1, keepdims=True)
        current = nxt

    mean = float(totals.mean())
    stderr = float(totals.std(ddof=1) / np.sqrt(n_traj))
    return mean, stderr


def estimate_value(
    inst: ModelInstance,
    policy: PolicyRule,
    T: int,
    n_traj: int,
    seed: int,
    return_totals: bool = False,
):
    """Sample mean and standard error of the discounted total reward.

    Uses the vectorized lockstep engine when the policy supports it;
    otherwise falls back to per-trajectory rollouts with derived seeds
    ``seed ^ i``.
    """
    if n_traj < 2:
        raise ValueError(f"n_traj must be >= 2, got {n_traj}")
    if policy.decide_batch is not None and not return_totals:
        return _estimate_batched(inst, policy, T, n_traj, seed)
    totals = np.empty(n_traj)
    for i in range(n_traj):
        totals[i] = sample_trajectory(inst, policy, T, (seed ^ i) & _SEED_MASK).discounted_total
    mean = float(totals.mean())
    stderr = float(totals.std(ddof=1) / np.sqrt(n_traj))
    if return_totals:
        return mean, stderr, totals
    return mean, stderr

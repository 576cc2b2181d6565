"""Policies, the myopic rule, and exact evaluation of finite-horizon
values by exhaustive recursion over the observation tree.

The auxiliary value function W^u_t is the expected discounted reward of
taking action u at slot t and following the myopic rule afterwards;
``policy_value`` evaluates an arbitrary deterministic policy the same
way.  Both share one branch-expansion kernel and memoize on
(slot, rounded profile).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .exceptions import DimensionMismatchError
from .filtering import LIKELIHOOD_FLOOR, BeliefProfile, _filter_from_propagated
from .orders import DEFAULT_TOL, _greatest_array_index
from .types import BeliefVector, ModelInstance, RewardVector, belief_key


@dataclass(frozen=True)
class PolicyRule:
    """A deterministic decision function (slot, profile) -> project (1-based)."""

    name: str
    decide: Callable[[int, BeliefProfile], int]
    #: Optional fast path on raw belief arrays, returning a 0-based index.
    decide_arrays: Optional[Callable[[int, tuple], int]] = None
    #: Optional vectorized fast path for the simulator: (slot, beliefs
    #: of shape (n, N, X)) -> 0-based action array of shape (n,).
    decide_batch: Optional[Callable[[int, np.ndarray], np.ndarray]] = None


@dataclass(frozen=True)
class EvaluationSettings:
    horizon: int
    beta: float
    prune_epsilon: float = 0.0

    def __post_init__(self):
        if self.horizon < 0:
            raise ValueError(f"horizon must be nonnegative, got {self.horizon}")
        if self.prune_epsilon < 0:
            raise ValueError(f"prune_epsilon must be >= 0, got {self.prune_epsilon}")


def horizon_for_tolerance(beta: float, r_max: float, tol: float) -> int:
    """Smallest T with beta^(T+1) * r_max / (1 - beta) below tol."""
    if not 0.0 <= beta < 1.0:
        raise ValueError(f"beta must lie in [0, 1), got {beta}")
    if tol <= 0:
        raise ValueError("tol must be positive")
    T = 0
    tail = beta * r_max / (1.0 - beta) if beta > 0 else 0.0
    while tail >= tol:
        T += 1
        tail *= beta
    return T


def myopic_action(beliefs: BeliefProfile, R: RewardVector, tol: float = DEFAULT_TOL) -> int:
    """MLR-greatest project (1-based), ties broken by lowest index."""
    arrays = list(beliefs.arrays())
    if arrays[0].size != R.values.size:
        raise DimensionMismatchError("reward/belief dimensions differ")
    best = _greatest_array_index(arrays, tol)
    if __debug__:
        # Under monotone rewards the MLR-best project also maximizes the
        # immediate reward.
        rewards = [float(R.values @ x) for x in arrays]
        assert rewards[best] >= max(rewards) - 1e-9, (rewards, best)
    return best + 1


class TreeEvaluator:
    """Exact expectation over the Y-ary observation tree of one instance.

    Shared by the auxiliary-value, policy-value, and DP computations;
    reusable across calls so memoized subtrees amortize.  All internal
    indices are 0-based; beliefs are tuples of read-only arrays.
    """

    def __init__(
        self,
        inst: ModelInstance,
        horizon: int,
        prune_epsilon: float = 0.0,
        tol: float = DEFAULT_TOL,
    ):
        self.inst = inst
        self.T = int(horizon)
        self.A_T = inst.A.rows.T.copy()
        self.B = inst.B.rows.copy()
        self.R = inst.R.values.copy()
        self.beta = inst.beta
        self.N = inst.n_projects
        self.Y = inst.n_obs
        self.prune = float(prune_epsilon)
        self.tol = tol
        self._myopic_memo: dict = {}
        self._policy_memos: dict = {}

    def profile_key(self, t: int, beliefs: tuple) -> tuple:
        return (t, b"".join(belief_key(x) for x in beliefs))

    def myopic_index(self, beliefs: tuple) -> int:
        """0-based myopic project for a tuple of belief arrays."""
        return _greatest_array_index(list(beliefs), self.tol)

    def branches(self, beliefs: tuple, u: int):
        """Observation branches after working project u (0-based).

        Yields (likelihood, stepped beliefs); zero-likelihood branches
        are skipped, sub-prune_epsilon branches dropped.
        """
        propagated = tuple(self.A_T @ x for x in beliefs)
        z = propagated[u]
        ds = z @ self.B
        out = []
        for m in range(self.Y):
            d = float(ds[m])
            if d <= LIKELIHOOD_FLOOR or d < self.prune:
                continue
            filtered = _filter_from_propagated(self.B, z, m, d)
            stepped = tuple(
                filtered if n == u else propagated[n] for n in range(self.N)
            )
            out.append((d, stepped))
        return out

    def avf(self, t: int, beliefs: tuple, u: int) -> float:
        """W^u_t: take u (0-based) now, act myopically afterwards."""
        value = float(self.R @ beliefs[u])
        if t >= self.T:
            return value
        acc = 0.0
        for d, stepped in self.branches(beliefs, u):
            acc += d * self.myopic_value(t + 1, stepped)
        return value + self.beta * acc

    def myopic_value(self, t: int, beliefs: tuple) -> float:
        key = self.profile_key(t, beliefs)
        hit = self._myopic_memo.get(key)
        if hit is not None:
            return hit
        value = self.avf(t, beliefs, self.myopic_index(beliefs))
        self._myopic_memo[key] = value
        return value

    def policy_value(self, t: int, beliefs: tuple, policy: PolicyRule) -> float:
        memo = self._policy_memos.setdefault(policy.name, {})
        key = self.profile_key(t, beliefs)
        hit = memo.get(key)
        if hit is not None:
            return hit
        if policy.decide_arrays is not None:
            u = policy.decide_arrays(t, beliefs)
        else:
            u = policy.decide(t, BeliefProfile([BeliefVector(x) for x in beliefs], t)) - 1
        if not 0 <= u < self.N:
            raise IndexError(f"policy {policy.name!r} chose project {u + 1} of {self.N}")
        value = float(self.R @ beliefs[u])
        if t < self.T:
            acc = 0.0
            for d, stepped in self.branches(beliefs, u):
                acc += d * self.policy_value(t + 1, stepped, policy)
            value += self.beta * acc
        memo[key] = value
        return value


def avf_evaluate(
    inst: ModelInstance,
    profile: BeliefProfile,
    t: int,
    T: int,
    first_action: int,
    prune_epsilon: float = 0.0,
    tol: float = DEFAULT_TOL,
) -> float:
    """Auxiliary value W^u_t for 1-based first action u on a profile."""
    if t > T:
        raise ValueError(f"t={t} exceeds horizon T={T}")
    if not 1 <= first_action <= profile.n_projects:
        raise IndexError(f"project {first_action} out of range 1..{profile.n_projects}")
    ev = TreeEvaluator(inst, T, prune_epsilon, tol)
    return ev.avf(t, profile.arrays(), first_action - 1)


def avf_frozen(
    inst: ModelInstance,
    profile: BeliefProfile,
    t: int,
    T: int,
    first_action: int,
    reference: BeliefProfile,
    tol: float = DEFAULT_TOL,
) -> float:
    """Auxiliary value with continuation decisions frozen to a reference.

    After the first action, each branch's decision is the myopic choice
    computed from ``reference`` evolved along the same action/observation
    history, not from the evaluated profile.  With reference == profile
    this equals ``avf_evaluate``; the point of the frozen form is that
    the value becomes linear in any single component of the profile, so
    the basis decomposition W(x) = sum_i x^(n)(i) W(x with e_i in slot n)
    holds exactly (the self-referencing form breaks it whenever a basis
    substitution flips a downstream myopic choice).
    """
    if t > T:
        raise ValueError(f"t={t} exceeds horizon T={T}")
    if not 1 <= first_action <= profile.n_projects:
        raise IndexError(f"project {first_action} out of range 1..{profile.n_projects}")
    ev = TreeEvaluator(inst, T, 0.0, tol)

    def step(beliefs: tuple, u: int, m: int):
        propagated = tuple(ev.A_T @ x for x in beliefs)
        z = propagated[u]
        d = float(z @ ev.B[:, m])
        if d <= LIKELIHOOD_FLOOR:
            return None
        filtered = _filter_from_propagated(ev.B, z, m, d)
        return d, tuple(filtered if n == u else propagated[n] for n in range(ev.N))

    def value_of(slot: int, ref: tuple, cur: tuple, u: int) -> float:
        value = float(ev.R @ cur[u])
        if slot >= T:
            return value
        acc = 0.0
        for m in range(ev.Y):
            stepped_cur = step(cur, u, m)
            if stepped_cur is None:
                continue
            d, cur_next = stepped_cur
            stepped_ref = step(ref, u, m)
            # The reference profile cannot rule out a branch the
            # evaluated one reaches; fall back to self-reference there.
            ref_next = stepped_ref[1] if stepped_ref is not None else cur_next
            u_next = ev.myopic_index(ref_next)
            acc += d * value_of(slot + 1, ref_next, cur_next, u_next)
        return value + ev.beta * acc

    return value_of(t, reference.arrays(), profile.arrays(), first_action - 1)


def policy_value(
    inst: ModelInstance,
    profile: BeliefProfile,
    t: int,
    T: int,
    policy: PolicyRule,
    prune_epsilon: float = 0.0,
    tol: float = DEFAULT_TOL,
) -> float:
    """Exact expected discounted reward of a policy from slot t to T."""
    if t > T:
        raise ValueError(f"t={t} exceeds horizon T={T}")
    ev = TreeEvaluator(inst, T, prune_epsilon, tol)
    return ev.policy_value(t, profile.arrays(), policy)


def myopic_policy(inst: ModelInstance, tol: float = DEFAULT_TOL) -> PolicyRule:
    """The rule that works the MLR-best project each slot."""
    R = inst.R

    def decide(t: int, profile: BeliefProfile) -> int:
        del t
        return myopic_action(profile, R, tol)

    def decide_arrays(t: int, beliefs: tuple) -> int:
        del t
        return _greatest_array_index(list(beliefs), tol)

    r = inst.R.values

    def decide_batch(t: int, beliefs: np.ndarray) -> np.ndarray:
        # Immediate-reward argmax; coincides with the MLR rule under
        # monotone rewards on order-separated profiles.
        del t
        return np.argmax(beliefs @ r, axis=1)

    return PolicyRule("myopic", decide, decide_arrays, decide_batch)


def stay_policy(project: int) -> PolicyRule:
    """Always work one fixed project (1-based)."""

    return PolicyRule(
        f"stay-{project}",
        lambda t, profile: project,
        lambda t, beliefs: project - 1,
        lambda t, beliefs: np.full(beliefs.shape[0], project - 1, dtype=np.int64),
    )


def round_robin_policy(n_projects: int) -> PolicyRule:
    """Cycle through projects in index order."""

    return PolicyRule(
        "round-robin",
        lambda t, profile: (t % n_projects) + 1,
        lambda t, beliefs: t % n_projects,
        lambda t, beliefs: np.full(beliefs.shape[0], t % n_projects, dtype=np.int64),
    )


def seeded_random_policy(n_projects: int, seed: int) -> PolicyRule:
    """Belief-blind pseudo-random choice, deterministic in (seed, slot)."""

    def pick(t: int) -> int:
        return int(np.random.default_rng((seed, t)).integers(n_projects))

    return PolicyRule(
        f"random-{seed}",
        lambda t, profile: pick(t) + 1,
        lambda t, beliefs: pick(t),
        lambda t, beliefs: np.full(beliefs.shape[0], pick(t), dtype=np.int64),
    )

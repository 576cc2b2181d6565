"""Exact finite-horizon dynamic programming over the reachable belief
tree, and the certification oracle comparing the optimum against the
myopic policy.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import NodeBudgetExceededError
from .filtering import BeliefProfile
from .orders import DEFAULT_TOL
from .policy import TreeEvaluator, myopic_policy
from .types import ModelInstance

DEFAULT_NODE_BUDGET = 10_000_000
#: Two action values within this are treated as tied.
ARGMAX_TOL = 1e-12


@dataclass(frozen=True)
class ValueReport:
    optimal_value: float
    myopic_value: float
    gap: float
    per_depth_node_counts: tuple[int, ...]
    #: Fraction of distinct DP nodes where the myopic action attains the max.
    argmax_agreement: float
    best_action: int
    horizon: int

    def to_json_dict(self) -> dict:
        return {
            "optimal_value": self.optimal_value,
            "myopic_value": self.myopic_value,
            "gap": self.gap,
            "per_depth_node_counts": list(self.per_depth_node_counts),
            "argmax_agreement": self.argmax_agreement,
            "best_action": self.best_action,
            "horizon": self.horizon,
        }


class _DPSolver(TreeEvaluator):
    def __init__(self, inst, horizon, node_budget=DEFAULT_NODE_BUDGET, tol=DEFAULT_TOL,
                 track_agreement=False):
        super().__init__(inst, horizon, prune_epsilon=0.0, tol=tol)
        self.node_budget = int(node_budget)
        self.track_agreement = track_agreement
        self._opt_memo: dict = {}
        self.node_counts = [0] * (self.T + 1)
        self.nodes_total = 0
        self.agree_nodes = 0

    def optimal(self, t: int, beliefs: tuple) -> tuple[float, int]:
        """(V_t, 0-based best action), memoized on (t, rounded profile)."""
        key = self.profile_key(t, beliefs)
        hit = self._opt_memo.get(key)
        if hit is not None:
            return hit
        self.nodes_total += 1
        if self.nodes_total > self.node_budget:
            raise NodeBudgetExceededError(self.node_budget, self.N, self.Y, self.T)
        self.node_counts[t] += 1

        values = np.empty(self.N)
        for u in range(self.N):
            v = float(self.R @ beliefs[u])
            if t < self.T:
                acc = 0.0
                for d, stepped in self.branches(beliefs, u):
                    acc += d * self.optimal(t + 1, stepped)[0]
                v += self.beta * acc
            values[u] = v
        best = float(values.max())
        best_u = int(np.nonzero(values >= best - ARGMAX_TOL)[0][0])
        if self.track_agreement:
            myo = self.myopic_index(beliefs)
            if values[myo] >= best - ARGMAX_TOL:
                self.agree_nodes += 1
        result = (best, best_u)
        self._opt_memo[key] = result
        return result


def optimal_value(
    inst: ModelInstance,
    profile: BeliefProfile,
    t: int,
    T: int,
    node_budget: int = DEFAULT_NODE_BUDGET,
    tol: float = DEFAULT_TOL,
) -> tuple[float, int]:
    """Exact DP value from slot t and the 1-based optimal first action.

    Ties are broken toward the lowest project index within 1e-12.
    """
    if t > T:
        raise ValueError(f"t={t} exceeds horizon T={T}")
    solver = _DPSolver(inst, T, node_budget, tol)
    value, best_u = solver.optimal(t, profile.arrays())
    return value, best_u + 1


def certify_myopic(
    inst: ModelInstance,
    T: int,
    node_budget: int = DEFAULT_NODE_BUDGET,
    tol: float = DEFAULT_TOL,
) -> ValueReport:
    """Compare the DP optimum against the myopic policy from the initial
    profile; reports the gap and per-node argmax agreement."""
    profile = BeliefProfile(inst.initial_beliefs, 0)
    solver = _DPSolver(inst, T, node_budget, tol, track_agreement=True)
    opt, best_u = solver.optimal(0, profile.arrays())
    myo = solver.policy_value(0, profile.arrays(), myopic_policy(inst, tol))
    agreement = solver.agree_nodes / solver.nodes_total if solver.nodes_total else 1.0
    return ValueReport(
        optimal_value=opt,
        myopic_value=myo,
        gap=opt - myo,
        per_depth_node_counts=tuple(solver.node_counts),
        argmax_agreement=agreement,
        best_action=best_u + 1,
        horizon=T,
    )

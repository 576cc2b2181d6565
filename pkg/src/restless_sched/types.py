"""Core domain types: beliefs, model matrices, instances, and validation.

All public state/observation/project indices are 1-based, matching the
usual statement of the scheduling model; internal numpy arrays are
0-based.  Every type is immutable after construction and safe to share
across threads.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .exceptions import DimensionMismatchError, InvalidBeliefError

#: Hard tolerance on simplex membership after construction.
SUM_TOL = 1e-12
#: Constructor renormalizes when the sum drifts by at most this much.
RENORM_TOL = 1e-9
#: Negative entries at least this value are clamped to zero.
CLAMP_TOL = -1e-12
#: Beliefs are rounded to this many decimals for hashing/memoization.
KEY_DECIMALS = 12


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=float)
    a.flags.writeable = False
    return a


def belief_key(probs: np.ndarray) -> bytes:
    """Hashable key for a belief, stable under sub-1e-12 float noise."""
    return (np.round(probs, KEY_DECIMALS) + 0.0).tobytes()


@dataclass(frozen=True)
class BeliefVector:
    """A point on the (X-1)-simplex: the information state of one project."""

    probs: np.ndarray

    def __init__(self, probs: Sequence[float]):
        p = np.asarray(probs, dtype=float)
        if p.ndim != 1 or p.size == 0:
            raise InvalidBeliefError(f"belief must be a nonempty vector, got shape {p.shape}")
        if not np.all(np.isfinite(p)):
            raise InvalidBeliefError("belief has non-finite entries")
        if p.min() < CLAMP_TOL:
            raise InvalidBeliefError(f"belief entry {p.min()} below clamp tolerance")
        p = np.clip(p, 0.0, None)
        s = p.sum()
        if abs(s - 1.0) > RENORM_TOL:
            raise InvalidBeliefError(f"belief sums to {s}, drift exceeds {RENORM_TOL}")
        if s != 1.0:
            p = p / s
        object.__setattr__(self, "probs", _frozen(p))

    @property
    def dim(self) -> int:
        return self.probs.size

    def key(self) -> bytes:
        return belief_key(self.probs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BeliefVector):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        return f"BeliefVector({self.probs.tolist()})"


def basis_belief(i: int, dim: int) -> BeliefVector:
    """Degenerate belief e_i (1-based): all mass on state ``i``."""
    if not 1 <= i <= dim:
        raise IndexError(f"state index {i} out of range 1..{dim}")
    p = np.zeros(dim)
    p[i - 1] = 1.0
    return BeliefVector(p)


@dataclass(frozen=True)
class TransitionMatrix:
    """Row-stochastic matrix; row i is the transition law out of state i."""

    rows: np.ndarray

    def __init__(self, rows: Sequence[Sequence[float]]):
        a = np.asarray(rows, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise DimensionMismatchError(f"transition matrix must be square, got {a.shape}")
        object.__setattr__(self, "rows", _frozen(a))

    @property
    def n_states(self) -> int:
        return self.rows.shape[0]


@dataclass(frozen=True)
class ObservationMatrix:
    """Row i is the observation distribution when the hidden state is i."""

    rows: np.ndarray

    def __init__(self, rows: Sequence[Sequence[float]]):
        b = np.asarray(rows, dtype=float)
        if b.ndim != 2:
            raise DimensionMismatchError(f"observation matrix must be 2-d, got {b.shape}")
        object.__setattr__(self, "rows", _frozen(b))

    @property
    def n_states(self) -> int:
        return self.rows.shape[0]

    @property
    def n_obs(self) -> int:
        return self.rows.shape[1]

    def column(self, m: int) -> np.ndarray:
        """The m-th column (1-based), i.e. the diagonal of the likelihood matrix."""
        if not 1 <= m <= self.n_obs:
            raise IndexError(f"observation index {m} out of range 1..{self.n_obs}")
        return self.rows[:, m - 1]


@dataclass(frozen=True)
class RewardVector:
    """Per-state instantaneous rewards."""

    values: np.ndarray

    def __init__(self, values: Sequence[float]):
        r = np.asarray(values, dtype=float)
        if r.ndim != 1 or r.size == 0:
            raise DimensionMismatchError(f"reward must be a nonempty vector, got {r.shape}")
        if not np.all(np.isfinite(r)):
            raise ValueError("reward has non-finite entries")
        object.__setattr__(self, "values", _frozen(r))


@dataclass(frozen=True)
class ModelInstance:
    """Full problem data for N homogeneous projects sharing one (A, B) pair."""

    n_projects: int
    n_states: int
    n_obs: int
    A: TransitionMatrix
    B: ObservationMatrix
    R: RewardVector
    beta: float
    initial_beliefs: tuple[BeliefVector, ...]

    def __init__(self, n_projects, n_states, n_obs, A, B, R, beta, initial_beliefs):
        object.__setattr__(self, "n_projects", int(n_projects))
        object.__setattr__(self, "n_states", int(n_states))
        object.__setattr__(self, "n_obs", int(n_obs))
        object.__setattr__(self, "A", A if isinstance(A, TransitionMatrix) else TransitionMatrix(A))
        object.__setattr__(self, "B", B if isinstance(B, ObservationMatrix) else ObservationMatrix(B))
        object.__setattr__(self, "R", R if isinstance(R, RewardVector) else RewardVector(R))
        object.__setattr__(self, "beta", float(beta))
        beliefs = tuple(
            x if isinstance(x, BeliefVector) else BeliefVector(x) for x in initial_beliefs
        )
        object.__setattr__(self, "initial_beliefs", beliefs)

    def to_json_dict(self) -> dict:
        return {
            "n_projects": self.n_projects,
            "n_states": self.n_states,
            "n_obs": self.n_obs,
            "beta": self.beta,
            "A": self.A.rows.tolist(),
            "B": self.B.rows.tolist(),
            "R": self.R.values.tolist(),
            "x0": [x.probs.tolist() for x in self.initial_beliefs],
        }

    @classmethod
    def from_json_dict(cls, doc: dict) -> "ModelInstance":
        try:
            return cls(
                n_projects=doc["n_projects"],
                n_states=doc["n_states"],
                n_obs=doc["n_obs"],
                A=doc["A"],
                B=doc["B"],
                R=doc["R"],
                beta=doc["beta"],
                initial_beliefs=doc["x0"],
            )
        except KeyError as e:
            raise ValueError(f"instance document missing key {e}") from e

    @classmethod
    def from_json(cls, text: str) -> "ModelInstance":
        return cls.from_json_dict(json.loads(text))


def expected_reward(R: RewardVector, x: BeliefVector) -> float:
    """Immediate expected reward R'x of working a project with belief x."""
    if R.values.size != x.dim:
        raise DimensionMismatchError(
            f"reward dim {R.values.size} != belief dim {x.dim}"
        )
    return float(R.values @ x.probs)


@dataclass(frozen=True)
class ValidationReport:
    """Structural problems found in a ModelInstance; empty means well-formed."""

    problems: tuple[str, ...] = field(default=())

    @property
    def ok(self) -> bool:
        return not self.problems


def validate_instance(inst: ModelInstance) -> ValidationReport:
    """Check every structural invariant; returns one entry per violation."""
    problems: list[str] = []
    X, Y, N = inst.n_states, inst.n_obs, inst.n_projects
    if N < 1:
        problems.append(f"n_projects must be positive, got {N}")
    if X < 1:
        problems.append(f"n_states must be positive, got {X}")
    if Y < 1:
        problems.append(f"n_obs must be positive, got {Y}")

    A = inst.A.rows
    if A.shape != (X, X):
        problems.append(f"A has shape {A.shape}, expected ({X}, {X})")
    else:
        for i in range(X):
            row = A[i]
            if row.min() < 0:
                problems.append(f"A row {i + 1} has a negative entry")
            if abs(row.sum() - 1.0) > RENORM_TOL:
                problems.append(f"A row {i + 1} not stochastic (sums to {row.sum()!r})")

    B = inst.B.rows
    if B.shape != (X, Y):
        problems.append(f"B has shape {B.shape}, expected ({X}, {Y})")
    else:
        for i in range(X):
            row = B[i]
            if row.min() < 0:
                problems.append(f"B row {i + 1} has a negative entry")
            if abs(row.sum() - 1.0) > SUM_TOL:
                problems.append(f"B row {i + 1} not stochastic (sums to {row.sum()!r})")

    R = inst.R.values
    if R.size != X:
        problems.append(f"R has {R.size} entries, expected {X}")
    elif np.any(np.diff(R) <= 0):
        problems.append("R not strictly increasing in state index")

    if not 0.0 <= inst.beta < 1.0:
        problems.append(f"beta out of range [0, 1): {inst.beta!r}")

    if len(inst.initial_beliefs) != N:
        problems.append(
            f"{len(inst.initial_beliefs)} initial beliefs, expected {N}"
        )
    for n, x in enumerate(inst.initial_beliefs, start=1):
        if x.dim != X:
            problems.append(f"initial belief {n} has dim {x.dim}, expected {X}")

    return ValidationReport(tuple(problems))

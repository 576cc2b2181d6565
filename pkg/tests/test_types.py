import json

import numpy as np
import pytest

from restless_sched import (
    BeliefVector,
    InvalidBeliefError,
    ModelInstance,
    ObservationMatrix,
    RewardVector,
    TransitionMatrix,
    basis_belief,
    expected_reward,
    validate_instance,
)
from restless_sched.types import belief_key


class TestBeliefVector:
    def test_simple_construction(self):
        x = BeliefVector([0.25, 0.75])
        assert x.dim == 2
        assert np.allclose(x.probs, [0.25, 0.75])

    def test_small_drift_renormalized(self):
        x = BeliefVector([0.5, 0.5 + 3e-10])
        assert x.probs.sum() == pytest.approx(1.0, abs=1e-15)

    def test_large_drift_rejected(self):
        with pytest.raises(InvalidBeliefError):
            BeliefVector([0.5, 0.6])

    def test_negative_entry_rejected(self):
        with pytest.raises(InvalidBeliefError):
            BeliefVector([-0.1, 1.1])

    def test_tiny_negative_clamped(self):
        x = BeliefVector([1.0 + 1e-13, -1e-13])
        assert x.probs[1] >= 0.0

    def test_equality_and_hash_on_rounded_key(self):
        a = BeliefVector([0.3, 0.7])
        b = BeliefVector([0.3 + 1e-14, 0.7 - 1e-14])
        assert a == b
        assert hash(a) == hash(b)

    def test_basis_belief_one_based(self):
        e2 = basis_belief(2, 3)
        assert np.array_equal(e2.probs, [0.0, 1.0, 0.0])

    def test_belief_key_negative_zero_normalized(self):
        assert belief_key(np.array([0.0, 1.0])) == belief_key(np.array([-0.0, 1.0]))


class TestMatrices:
    def test_transition_rows_kept(self):
        A = TransitionMatrix([[0.9, 0.1], [0.2, 0.8]])
        assert A.rows.shape == (2, 2)

    def test_nonsquare_rejected(self):
        with pytest.raises(Exception):
            TransitionMatrix([[0.5, 0.5]])

    def test_observation_column_one_based(self):
        B = ObservationMatrix([[0.8, 0.2], [0.3, 0.7]])
        assert np.allclose(B.column(2), [0.2, 0.7])

    def test_reward_rejects_nonfinite(self):
        with pytest.raises(Exception):
            RewardVector([0.0, np.inf])


class TestModelInstance:
    def test_json_round_trip(self, two_state_instance):
        doc = two_state_instance.to_json_dict()
        clone = ModelInstance.from_json(json.dumps(doc))
        assert np.allclose(clone.A.rows, two_state_instance.A.rows)
        assert np.allclose(clone.B.rows, two_state_instance.B.rows)
        assert clone.beta == two_state_instance.beta
        assert len(clone.initial_beliefs) == 2

    def test_missing_key_raises(self):
        with pytest.raises(ValueError):
            ModelInstance.from_json('{"n_projects": 2}')

    def test_expected_reward(self):
        r = expected_reward(RewardVector([1.0, 3.0]), BeliefVector([0.5, 0.5]))
        assert r == pytest.approx(2.0)


class TestValidateInstance:
    def test_good_instance_ok(self, two_state_instance):
        report = validate_instance(two_state_instance)
        assert report.ok
        assert report.problems == ()

    def test_nonstochastic_row_reported(self):
        A = np.array([[0.9, 0.2], [0.2, 0.8]])
        inst = ModelInstance(
            2, 2, 2, TransitionMatrix(A), [[0.9, 0.1], [0.1, 0.9]],
            [0.0, 1.0], 0.5, [[0.5, 0.5], [0.5, 0.5]],
        )
        report = validate_instance(inst)
        assert not report.ok
        assert any("row 1" in p for p in report.problems)

    def test_bad_beta_reported(self, two_state_instance):
        inst = ModelInstance(
            2, 2, 2, two_state_instance.A, two_state_instance.B,
            two_state_instance.R, 1.0, two_state_instance.initial_beliefs,
        )
        assert any("beta" in p for p in validate_instance(inst).problems)

    def test_non_monotone_reward_reported(self, two_state_instance):
        inst = ModelInstance(
            2, 2, 2, two_state_instance.A, two_state_instance.B,
            [1.0, 1.0], 0.5, two_state_instance.initial_beliefs,
        )
        assert any("increasing" in p for p in validate_instance(inst).problems)

    def test_belief_count_mismatch_reported(self, two_state_instance):
        inst = ModelInstance(
            3, 2, 2, two_state_instance.A, two_state_instance.B,
            two_state_instance.R, 0.5, two_state_instance.initial_beliefs,
        )
        assert any("initial beliefs" in p for p in validate_instance(inst).problems)

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from restless_sched import (
    BeliefVector,
    IncomparablePairError,
    ObservationMatrix,
    Relation,
    TransitionMatrix,
    fosd_compare,
    mlr_compare,
    obs_columns_mlr_ordered,
    rows_mlr_ordered,
    sort_by_mlr,
)

simplex3 = st.lists(
    st.floats(min_value=0.01, max_value=1.0), min_size=3, max_size=3
).map(lambda v: np.array(v) / sum(v))


def tilt_up(x: np.ndarray, s: float) -> np.ndarray:
    """Multiply by an increasing positive function: MLR-raises x."""
    y = x * np.exp(s * np.arange(x.size))
    return y / y.sum()


class TestMlrCompare:
    def test_basic_ge(self):
        v = mlr_compare(BeliefVector([0.2, 0.8]), BeliefVector([0.5, 0.5]))
        assert v.relation is Relation.GREATER_OR_EQUAL
        assert v.ge and not v.le

    def test_equal(self):
        v = mlr_compare(BeliefVector([0.4, 0.6]), BeliefVector([0.4, 0.6]))
        assert v.relation is Relation.EQUAL
        assert v.ge and v.le

    def test_incomparable_with_witness(self):
        # Ratios 1.6, 0.4, 1.6: not monotone either way.
        x1 = BeliefVector([0.4, 0.2, 0.4])
        x2 = BeliefVector([0.25, 0.5, 0.25])
        v = mlr_compare(x1, x2)
        assert v.relation is Relation.INCOMPARABLE
        assert v.witness is not None

    def test_zero_entries_no_division(self):
        v = mlr_compare(BeliefVector([0.0, 1.0]), BeliefVector([1.0, 0.0]))
        assert v.relation is Relation.GREATER_OR_EQUAL

    def test_two_state_always_comparable(self):
        rng = np.random.default_rng(0)
        for _ in range(200):
            a, b = rng.dirichlet([1, 1]), rng.dirichlet([1, 1])
            v = mlr_compare(BeliefVector(a), BeliefVector(b))
            assert v.relation is not Relation.INCOMPARABLE

    @given(simplex3, st.floats(min_value=0.0, max_value=3.0))
    @settings(max_examples=200, deadline=None)
    def test_tilted_always_ge(self, x, s):
        v = mlr_compare(BeliefVector(tilt_up(x, s)), BeliefVector(x))
        assert v.ge


class TestFosdCompare:
    def test_tail_dominance(self):
        v = fosd_compare(BeliefVector([0.1, 0.9]), BeliefVector([0.3, 0.7]))
        assert v.ge

    @given(simplex3, simplex3)
    @settings(max_examples=200, deadline=None)
    def test_mlr_implies_fosd(self, a, b):
        mv = mlr_compare(BeliefVector(a), BeliefVector(b))
        if mv.ge:
            assert fosd_compare(BeliefVector(a), BeliefVector(b)).ge
        if mv.le:
            assert fosd_compare(BeliefVector(a), BeliefVector(b)).le

    def test_fosd_not_mlr(self):
        # FOSD-ordered but MLR-incomparable (ratios 0.5, 1.1, 1.0).
        a = BeliefVector([0.1, 0.5, 0.4])
        b = BeliefVector([0.05, 0.55, 0.4])
        assert fosd_compare(b, a).ge
        assert mlr_compare(b, a).relation is Relation.INCOMPARABLE


class TestMatrixOrders:
    def test_ascending_rows(self):
        A = TransitionMatrix([[0.9, 0.1], [0.2, 0.8]])
        assert rows_mlr_ordered(A, "ascending").le
        assert rows_mlr_ordered(A, "descending").relation is Relation.INCOMPARABLE

    def test_descending_rows(self):
        A = TransitionMatrix([[0.2, 0.8], [0.9, 0.1]])
        assert rows_mlr_ordered(A, "descending").ge

    def test_witness_names_adjacent_pair(self):
        A = TransitionMatrix(
            [[0.7, 0.2, 0.1], [0.2, 0.3, 0.5], [0.5, 0.3, 0.2]]
        )
        v = rows_mlr_ordered(A, "ascending")
        assert v.relation is Relation.INCOMPARABLE
        assert v.witness == (2, 3)

    def test_obs_columns_ordered(self):
        B = ObservationMatrix([[0.9, 0.1], [0.2, 0.8]])
        assert obs_columns_mlr_ordered(B).le

    def test_obs_columns_unordered(self):
        B = ObservationMatrix([[0.1, 0.9], [0.8, 0.2]])
        assert obs_columns_mlr_ordered(B).relation is Relation.INCOMPARABLE

    def test_flat_columns_trivially_ordered(self):
        B = ObservationMatrix([[0.4, 0.6], [0.4, 0.6]])
        assert obs_columns_mlr_ordered(B).le


class TestSortByMlr:
    def test_descending_permutation(self):
        xs = [BeliefVector([0.5, 0.5]), BeliefVector([0.1, 0.9]), BeliefVector([0.8, 0.2])]
        assert sort_by_mlr(xs) == (2, 1, 3)

    def test_stable_on_equal(self):
        xs = [BeliefVector([0.5, 0.5]), BeliefVector([0.5, 0.5])]
        assert sort_by_mlr(xs) == (1, 2)

    def test_incomparable_raises_with_indices(self):
        xs = [BeliefVector([0.4, 0.2, 0.4]), BeliefVector([0.25, 0.5, 0.25])]
        with pytest.raises(IncomparablePairError) as ei:
            sort_by_mlr(xs)
        assert {ei.value.first, ei.value.second} == {1, 2}

    @given(st.lists(simplex3, min_size=2, max_size=5), st.floats(0.1, 2.0))
    @settings(max_examples=100, deadline=None)
    def test_tilt_chain_sorts_correctly(self, seeds, s):
        # A chain built by repeated up-tilts of one base is totally ordered.
        base = seeds[0]
        chain = [base]
        for _ in range(len(seeds) - 1):
            chain.append(tilt_up(chain[-1], s))
        xs = [BeliefVector(c) for c in chain]
        order = sort_by_mlr(xs)
        assert list(order) == sorted(range(1, len(xs) + 1), reverse=True)

import math

import numpy as np
import pytest

from ioha import (
    AnchorSequence,
    DataSet,
    Direction,
    Perspective,
    Scale,
    align_fixed_budget,
    align_fixed_target,
    align_parameter,
    generate_sequence,
)
from ioha.align import default_budgets, default_targets, round_budgets
from ioha.datasets import TraceRun
from ioha.errors import InvalidRange, NonPositiveForLog, UnknownParameter


def _ds(records, direction=Direction.MAXIMIZE, params=None):
    evals = [e for e, _ in records]
    best = [b for _, b in records]
    run = TraceRun(evals=evals, best=best, params=params or {})
    return DataSet("alg", "1", 2, direction, [run])


class TestGenerateSequence:
    def test_paper_target_sequence(self):
        seq = generate_sequence(4, 16, step=1.33)
        values = seq.values
        assert values[0] == 4
        assert abs(values[1] - 5.33) < 1e-9
        assert abs(values[2] - 6.66) < 1e-9
        assert values[-1] == 16
        assert abs(values[-2] - 15.97) < 1e-9

    def test_exact_decades_log(self):
        seq = generate_sequence(1, 100, count=3, scale=Scale.LOG)
        assert np.allclose(seq.values, [1, 10, 100])
        assert seq.values[0] == 1 and seq.values[-1] == 100

    def test_unit_grid(self):
        seq = generate_sequence(0, 10, count=11)
        assert seq.values.tolist() == list(range(11))

    def test_step_reaching_max_exactly(self):
        seq = generate_sequence(0, 10, step=2.5)
        assert seq.values.tolist() == [0, 2.5, 5, 7.5, 10]

    def test_count_spacing_even(self):
        seq = generate_sequence(-3, 7, count=21)
        gaps = np.diff(seq.values)
        assert seq.values[0] == -3 and seq.values[-1] == 7
        assert np.all(np.abs(gaps - gaps[0]) <= 1e-9 * 10)

    def test_auto_picks_log_at_two_decades(self):
        assert generate_sequence(1, 100, count=5, scale=Scale.AUTO).scale is Scale.LOG
        assert generate_sequence(1, 99, count=5, scale=Scale.AUTO).scale is Scale.LINEAR
        assert generate_sequence(-1, 1000, count=5, scale=Scale.AUTO).scale is Scale.LINEAR

    def test_invalid_ranges(self):
        with pytest.raises(InvalidRange):
            generate_sequence(5, 5, count=3)
        with pytest.raises(InvalidRange):
            generate_sequence(1, 2, step=-1)
        with pytest.raises(InvalidRange):
            generate_sequence(1, 2, count=1)
        with pytest.raises(InvalidRange):
            generate_sequence(1, 2)
        with pytest.raises(NonPositiveForLog):
            generate_sequence(0, 10, count=3, scale=Scale.LOG)

    def test_log_step_in_decades(self):
        seq = generate_sequence(1, 1000, step=1, scale=Scale.LOG)
        assert np.allclose(seq.values, [1, 10, 100, 1000])


class TestAlignFixedTarget:
    RECORDS = [(1, 295.0), (2, 296.0), (4, 307.0)]

    def _matrix(self, targets):
        ds = _ds(self.RECORDS)
        seq = AnchorSequence(np.array(targets, dtype=float), Scale.LINEAR, Perspective.FIXED_TARGET)
        return align_fixed_target(ds, seq)

    def test_exact_target_hit(self):
        assert self._matrix([296.0]).per_run[0, 0] == 2

    def test_unreachable_target(self):
        assert math.isinf(self._matrix([400.0]).per_run[0, 0])

    def test_target_below_first_record(self):
        assert self._matrix([100.0]).per_run[0, 0] == 1

    def test_monotone_in_target(self):
        matrix = self._matrix([100.0, 295.5, 296.0, 307.0, 400.0])
        row = matrix.per_run[0]
        assert np.all(np.diff(row) >= 0)

    def test_minimization(self):
        ds = _ds([(1, 50.0), (5, 20.0), (9, 10.0)], Direction.MINIMIZE)
        seq = AnchorSequence(np.array([15.0]), Scale.LINEAR, Perspective.FIXED_TARGET)
        assert align_fixed_target(ds, seq).per_run[0, 0] == 9

    def test_wrong_perspective_rejected(self):
        ds = _ds(self.RECORDS)
        seq = AnchorSequence(np.array([2.0]), Scale.LINEAR, Perspective.FIXED_BUDGET)
        with pytest.raises(InvalidRange):
            align_fixed_target(ds, seq)


class TestAlignFixedBudget:
    RECORDS = [(1, 320.0), (24, 344.0), (60, 364.0)]

    def _value_at(self, budget):
        ds = _ds(self.RECORDS)
        seq = AnchorSequence(np.array([budget], dtype=float), Scale.LINEAR, Perspective.FIXED_BUDGET)
        return align_fixed_budget(ds, seq).per_run[0, 0]

    def test_between_records(self):
        assert self._value_at(30) == 344.0

    def test_exact_endpoint(self):
        assert self._value_at(60) == 364.0

    def test_beyond_trace_end(self):
        assert self._value_at(10**6) == 364.0

    def test_below_first_record_undefined(self):
        ds = _ds([(5, 1.0), (9, 2.0)])
        seq = AnchorSequence(np.array([2.0]), Scale.LINEAR, Perspective.FIXED_BUDGET)
        assert math.isnan(align_fixed_budget(ds, seq).per_run[0, 0])

    def test_non_integer_budget_rejected(self):
        ds = _ds(self.RECORDS)
        seq = AnchorSequence(np.array([2.5]), Scale.LINEAR, Perspective.FIXED_BUDGET)
        with pytest.raises(InvalidRange):
            align_fixed_budget(ds, seq)


class TestAlignParameter:
    def _ds(self):
        return _ds(
            [(1, 295.0), (2, 296.0), (4, 307.0)],
            params={"rate": np.array([0.0, 0.0016, 0.2192])},
        )

    def test_value_at_hit(self):
        seq = AnchorSequence(np.array([296.0]), Scale.LINEAR, Perspective.FIXED_TARGET)
        assert align_parameter(self._ds(), seq, "rate").per_run[0, 0] == 0.0016

    def test_never_hit_is_undefined(self):
        seq = AnchorSequence(np.array([999.0]), Scale.LINEAR, Perspective.FIXED_TARGET)
        assert math.isnan(align_parameter(self._ds(), seq, "rate").per_run[0, 0])

    def test_unknown_parameter(self):
        seq = AnchorSequence(np.array([296.0]), Scale.LINEAR, Perspective.FIXED_TARGET)
        with pytest.raises(UnknownParameter):
            align_parameter(self._ds(), seq, "nope")

    def test_budget_perspective(self):
        seq = AnchorSequence(np.array([3.0]), Scale.LINEAR, Perspective.FIXED_BUDGET)
        assert align_parameter(self._ds(), seq, "rate").per_run[0, 0] == 0.0016


class TestDuality:
    """For any trace record (e, b): hitting time of b is <= e and the value
    at budget e is >= b (maximization)."""

    def test_on_golden_runs(self, golden_collection):
        ds = golden_collection.get("self_GA", "19", 16)
        for i, run in enumerate(ds.runs):
            tseq = AnchorSequence(
                np.unique(run.best.astype(float)), Scale.LINEAR, Perspective.FIXED_TARGET
            )
            times = align_fixed_target(ds, tseq).per_run[i]
            bseq = AnchorSequence(
                np.unique(run.evals.astype(float)), Scale.LINEAR, Perspective.FIXED_BUDGET
            )
            values = align_fixed_budget(ds, bseq).per_run[i]
            for e, b in zip(run.evals, run.best):
                j = np.searchsorted(tseq.values, b)
                assert times[j] <= e
                k = np.searchsorted(bseq.values, e)
                assert values[k] >= b


class TestDefaults:
    def test_default_targets_span_central_quartiles(self, golden_collection):
        datasets = [golden_collection.get("self_GA", "19", 16)]
        pooled = np.concatenate([run.best for ds in datasets for run in ds.runs])
        seq = default_targets(datasets)
        assert len(seq) == 10
        assert seq.values[0] == np.quantile(pooled, 0.25)
        assert seq.values[-1] == np.quantile(pooled, 0.75)

    def test_default_budgets_are_integers(self, golden_collection):
        seq = default_budgets([golden_collection.get("RLS", "19", 100)])
        assert np.all(seq.values == np.round(seq.values))
        assert seq.values[0] >= 1

    def test_round_budgets_dedupes(self):
        seq = AnchorSequence(np.array([1.2, 1.4, 3.0]), Scale.LINEAR, Perspective.FIXED_BUDGET)
        # construction succeeds because values are strictly increasing
        rounded = round_budgets(seq)
        assert rounded.values.tolist() == [1.0, 3.0]

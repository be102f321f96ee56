"""Quartile statistics, 1-D k-means, and the synthetic revert generator."""

import io
from datetime import date

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wikirevert.records import NUMERIC_SLOTS, SLOT_REVISION_SIZE
from wikirevert.records import daily_to_dict
from wikirevert.synthesis import (
    QuartileStats,
    SynthConfig,
    fidelity_report,
    generate_reverts,
    kmeans_1d,
    merge_balance,
    quartile_stats,
    write_fidelity_csv,
)

from conftest import make_daily, revertlike_corpus


class TestQuartiles:
    def test_single_value(self):
        stats = quartile_stats([5.0])
        assert (stats.minimum, stats.q1, stats.median, stats.q3, stats.maximum) == (5, 5, 5, 5, 5)

    def test_linear_interpolation_on_five_points(self):
        stats = quartile_stats([1, 2, 3, 4, 5])
        assert (stats.minimum, stats.q1, stats.median, stats.q3, stats.maximum) == (1, 2, 3, 4, 5)

    def test_constant_sample(self):
        stats = quartile_stats([3, 3, 3, 3])
        assert stats.minimum == stats.maximum == 3

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            quartile_stats([])

    @given(st.lists(st.floats(-1e6, 1e6), min_size=1, max_size=60))
    @settings(max_examples=100)
    def test_ordering_invariant(self, values):
        stats = quartile_stats(values)
        assert stats.minimum <= stats.q1 <= stats.median <= stats.q3 <= stats.maximum

    def test_bounds_accessor(self):
        stats = quartile_stats([1, 2, 3, 4, 5])
        assert stats.bounds(0) == (1, 2)
        assert stats.bounds(3) == (4, 5)
        with pytest.raises(ValueError):
            stats.bounds(4)

    def test_invalid_order_rejected(self):
        with pytest.raises(ValueError):
            QuartileStats(minimum=2, q1=1, median=3, q3=4, maximum=5)


class TestKmeans1D:
    def test_k1_centroid_is_mean(self, rng):
        values = rng.normal(size=20)
        assignment, centroids = kmeans_1d(values, k=1, seed=0)
        assert (assignment == 0).all()
        assert centroids[0] == pytest.approx(values.mean())

    def test_well_separated_pairs(self):
        values = np.array([0.0, 0.1, 10.0, 10.1])
        assignment, centroids = kmeans_1d(values, k=2, seed=0)
        assert assignment[0] == assignment[1]
        assert assignment[2] == assignment[3]
        assert assignment[0] != assignment[2]
        assert sorted(np.round(centroids, 2)) == [0.05, 10.05]

    def test_too_few_values_rejected(self):
        with pytest.raises(ValueError):
            kmeans_1d([1.0], k=2)

    def test_deterministic_given_seed(self, rng):
        values = rng.normal(size=50)
        a = kmeans_1d(values, k=3, seed=7)
        b = kmeans_1d(values, k=3, seed=7)
        assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])

    def test_assignment_locally_optimal(self, rng):
        # at convergence every point sits with its nearest centroid, so any
        # single-point reassignment (centroids fixed) cannot lower the SSE
        values = rng.normal(size=50)
        assignment, centroids = kmeans_1d(values, k=3, seed=1)
        sse = np.sum((values - centroids[assignment]) ** 2)
        for i in range(len(values)):
            for c in range(len(centroids)):
                if c == assignment[i]:
                    continue
                perturbed = assignment.copy()
                perturbed[i] = c
                assert np.sum((values - centroids[perturbed]) ** 2) >= sse - 1e-12

    def test_constant_values_collapse(self):
        assignment, centroids = kmeans_1d([2.0, 2.0, 2.0], k=2, seed=0)
        assert len(centroids) == 1
        assert (assignment == 0).all()


class TestGenerateReverts:
    def test_count_four_gives_one_per_interval(self):
        originals = revertlike_corpus(200, seed=1)
        dense = np.stack([r.dense_vector() for r in originals])
        synth = generate_reverts(originals, SynthConfig(count=4, seed=0))
        assert len(synth) == 4
        stats = quartile_stats(dense[:, SLOT_REVISION_SIZE])
        for interval, record in enumerate(synth):
            lo, hi = stats.bounds(interval)
            assert lo - 1e-9 <= record.avg_revision_size <= hi + 1e-9

    def test_all_outputs_are_synthetic_reverts(self):
        originals = revertlike_corpus(100, seed=2)
        synth = generate_reverts(originals, SynthConfig(count=10, seed=0))
        assert all(r.revert_label and r.synthetic for r in synth)

    def test_values_stay_inside_original_bounds(self):
        originals = revertlike_corpus(300, seed=3)
        dense = np.stack([r.dense_vector() for r in originals])
        synth = generate_reverts(originals, SynthConfig(count=100, seed=5))
        generated = np.stack([r.dense_vector() for r in synth])
        for f in range(dense.shape[1]):
            assert generated[:, f].min() >= dense[:, f].min() - 1e-9
            assert generated[:, f].max() <= dense[:, f].max() + 1e-9

    def test_same_seed_byte_identical(self):
        originals = revertlike_corpus(150, seed=4)
        config = SynthConfig(count=25, seed=11)
        first = [daily_to_dict(r) for r in generate_reverts(originals, config)]
        second = [daily_to_dict(r) for r in generate_reverts(originals, config)]
        assert first == second

    def test_small_count_goes_to_first_interval_with_note(self):
        originals = revertlike_corpus(100, seed=5)
        dense = np.stack([r.dense_vector() for r in originals])
        notes: list[str] = []
        synth = generate_reverts(originals, SynthConfig(count=3, seed=0), notes)
        assert len(synth) == 3
        assert any("interval 1" in note for note in notes)
        stats = quartile_stats(dense[:, SLOT_REVISION_SIZE])
        lo, hi = stats.bounds(0)
        for record in synth:
            assert lo - 1e-9 <= record.avg_revision_size <= hi + 1e-9

    def test_remainder_assigned_to_earliest_intervals(self):
        originals = revertlike_corpus(200, seed=6)
        dense = np.stack([r.dense_vector() for r in originals])
        synth = generate_reverts(originals, SynthConfig(count=6, seed=0))
        stats = quartile_stats(dense[:, SLOT_REVISION_SIZE])
        sizes = [r.avg_revision_size for r in synth]
        # layout is [2, 2, 1, 1] across the four intervals, in order
        expected_intervals = [0, 0, 1, 1, 2, 3]
        for value, interval in zip(sizes, expected_intervals):
            lo, hi = stats.bounds(interval)
            assert lo - 1e-9 <= value <= hi + 1e-9

    def test_empty_interval_falls_back_with_note(self):
        # two-point value sets make the middle intervals empty: e.g. values
        # {0, 100} give q1 = 25, median = 50 and no observation in between
        originals = []
        for i in range(40):
            dense = np.zeros(33)
            dense[5:24] = 0.5
            dense[NUMERIC_SLOTS] = [0.0 if i % 2 else 100.0] * len(NUMERIC_SLOTS)
            dense[5:24] = 0.5  # keep probabilities legal
            originals.append(
                make_daily(editor_id=f"e{i}", day=date(2019, 1, 1 + i % 20),
                           dense=dense, revert_label=True)
            )
        notes: list[str] = []
        synth = generate_reverts(originals, SynthConfig(count=8, seed=0), notes)
        assert len(synth) == 8
        assert any("using the full revert set" in note for note in notes)

    def test_requires_revert_records(self):
        with pytest.raises(ValueError):
            generate_reverts([make_daily(revert_label=False)], SynthConfig(count=4))

    def test_dates_inside_configured_range(self):
        originals = revertlike_corpus(100, seed=7)
        lo, hi = date(2020, 6, 1), date(2020, 6, 10)
        synth = generate_reverts(originals, SynthConfig(count=50, seed=0, date_range=(lo, hi)))
        assert all(lo <= r.date <= hi for r in synth)

    def test_config_validation(self):
        with pytest.raises(ValueError):
            SynthConfig(count=0)
        with pytest.raises(ValueError):
            SynthConfig(count=4, date_range=(date(2020, 2, 1), date(2020, 1, 1)))


class TestMergeBalance:
    def test_merge_with_empty_synthetic_sorts(self):
        records = [
            make_daily(editor_id="b", day=date(2019, 1, 2)),
            make_daily(editor_id="a", day=date(2019, 1, 1)),
        ]
        merged = merge_balance(records, [])
        assert [r.editor_id for r in merged] == ["a", "b"]

    def test_dates_non_decreasing(self):
        originals = revertlike_corpus(60, seed=8)
        synth = generate_reverts(originals, SynthConfig(count=30, seed=1))
        merged = merge_balance(originals, synth)
        assert all(a.date <= b.date for a, b in zip(merged, merged[1:]))

    def test_real_sorts_before_synthetic_on_same_key(self):
        real = make_daily(editor_id="a", day=date(2019, 1, 1))
        fake = make_daily(editor_id="a", day=date(2019, 1, 1), synthetic=True)
        merged = merge_balance([real], [fake])
        assert [r.synthetic for r in merged] == [False, True]


class TestFidelity:
    def test_report_covers_numeric_features_and_quartiles(self):
        originals = revertlike_corpus(200, seed=9)
        synth = generate_reverts(originals, SynthConfig(count=200, seed=2))
        rows = fidelity_report(originals, synth)
        assert len(rows) == len(NUMERIC_SLOTS) * 3
        assert {r[1] for r in rows} == {"Q1", "Q2", "Q3"}

    def test_probability_features_change_little(self):
        originals = revertlike_corpus(500, seed=10)
        synth = generate_reverts(originals, SynthConfig(count=1000, seed=3))
        rows = fidelity_report(originals, synth)
        prob_rows = [r for r in rows if "ORES" in r[0]]
        assert max(r[4] for r in prob_rows) <= 10.0

    def test_csv_shape(self):
        originals = revertlike_corpus(80, seed=11)
        synth = generate_reverts(originals, SynthConfig(count=40, seed=4))
        buffer = io.StringIO()
        write_fidelity_csv(fidelity_report(originals, synth), buffer)
        lines = buffer.getvalue().strip().splitlines()
        assert lines[0] == "feature,quartile,original,synthetic,relative_change_pct"
        assert len(lines) == 1 + len(NUMERIC_SLOTS) * 3

"""Incremental editor profiles: running means, cumulative maps, vectors."""

import io
import json
import logging
from datetime import date

import numpy as np
import pytest

from wikirevert.profiles import (
    EditorProfile,
    ProfileStore,
    profile_feature_vector,
    update_profile,
)
from wikirevert.records import MEAN_SLOTS, N_DENSE

from conftest import make_daily


def dense_with(slot_values: dict[int, float]) -> np.ndarray:
    dense = np.zeros(N_DENSE)
    dense[5:24] = 0.5
    for slot, value in slot_values.items():
        dense[slot] = value
    return dense


class TestUpdate:
    def test_first_record_is_identity(self):
        profile = EditorProfile("alice")
        record = make_daily(dense=dense_with({25: 7.0}))
        update_profile(profile, record)
        assert profile.count == 1
        assert profile.means[MEAN_SLOTS.index(25)] == 7.0
        assert profile.last_updated == record.date

    def test_two_values_average(self):
        profile = EditorProfile("alice")
        update_profile(profile, make_daily(day=date(2019, 1, 1), dense=dense_with({25: 2.0})))
        update_profile(profile, make_daily(day=date(2019, 1, 2), dense=dense_with({25: 4.0})))
        assert profile.means[MEAN_SLOTS.index(25)] == pytest.approx(3.0)

    def test_running_mean_matches_batch_mean(self, rng):
        profile = EditorProfile("alice")
        observed = []
        for i in range(10):
            dense = np.zeros(N_DENSE)
            dense[2:] = rng.normal(size=N_DENSE - 2)
            observed.append(dense[2:].copy())
            update_profile(profile, make_daily(day=date(2019, 1, 1 + i), dense=dense))
        batch = np.mean(observed, axis=0)
        assert np.allclose(profile.means, batch, rtol=1e-9)

    def test_editor_mismatch_rejected(self):
        with pytest.raises(ValueError, match="bob"):
            update_profile(EditorProfile("bob"), make_daily(editor_id="alice"))

    def test_time_regression_rejected(self):
        profile = EditorProfile("alice")
        update_profile(profile, make_daily(day=date(2019, 1, 5)))
        with pytest.raises(ValueError, match="sorted"):
            update_profile(profile, make_daily(day=date(2019, 1, 4)))

    def test_same_day_update_allowed(self):
        profile = EditorProfile("alice")
        update_profile(profile, make_daily(day=date(2019, 1, 5)))
        update_profile(profile, make_daily(day=date(2019, 1, 5)))
        assert profile.count == 2

    def test_static_block_never_revised(self, caplog):
        profile = EditorProfile("alice")
        update_profile(profile, make_daily(day=date(2019, 1, 1), dense=dense_with({0: 0.0})))
        with caplog.at_level(logging.WARNING, logger="wikirevert.profiles"):
            update_profile(profile, make_daily(day=date(2019, 1, 2), dense=dense_with({0: 1.0})))
        assert profile.static[0] == 0.0
        assert any("static flags changed" in r.message for r in caplog.records)

    def test_cumulative_maps_grow(self):
        profile = EditorProfile("alice")
        update_profile(
            profile, make_daily(day=date(2019, 1, 1), inserted_ngrams={1: 2, 5: 1})
        )
        update_profile(
            profile, make_daily(day=date(2019, 1, 2), inserted_ngrams={1: 3}, deleted_ngrams={0: 4})
        )
        assert profile.inserted_ngrams == {1: 5, 5: 1}
        assert profile.deleted_ngrams == {0: 4}

    def test_map_merge_is_associative_and_commutative(self, rng):
        maps = [
            {int(k): int(v) for k, v in zip(rng.integers(0, 6, 4), rng.integers(1, 9, 4))}
            for _ in range(3)
        ]

        def merge(into, add):
            out = dict(into)
            for key, value in add.items():
                out[key] = out.get(key, 0) + value
            return out

        left = merge(merge(maps[0], maps[1]), maps[2])
        right = merge(maps[0], merge(maps[1], maps[2]))
        swapped = merge(merge(maps[1], maps[0]), maps[2])
        assert left == right == swapped

    def test_identical_sequences_yield_identical_profiles(self, rng):
        records = [
            make_daily(day=date(2019, 1, 1 + i), dense=dense_with({24: float(v)}))
            for i, v in enumerate(rng.integers(0, 50, size=12))
        ]
        a, b = EditorProfile("alice"), EditorProfile("alice")
        for record in records:
            update_profile(a, record)
            update_profile(b, record)
        assert np.array_equal(a.means, b.means) and a.count == b.count

    def test_means_bounded_by_observations(self, rng):
        profile = EditorProfile("alice")
        values = rng.normal(size=15)
        for i, v in enumerate(values):
            update_profile(
                profile, make_daily(day=date(2019, 1, 1 + i), dense=dense_with({24: float(v)}))
            )
        slot = MEAN_SLOTS.index(24)
        assert values.min() - 1e-12 <= profile.means[slot] <= values.max() + 1e-12


class TestVector:
    def test_count_one_equals_record(self):
        profile = EditorProfile("alice")
        dense = dense_with({24: 9.0, 31: -0.5, 0: 1.0})
        update_profile(profile, make_daily(dense=dense, inserted_ngrams={2: 3}))
        vector = profile_feature_vector(profile, ngram_width=4)
        assert np.allclose(vector[:N_DENSE], dense)
        assert vector[N_DENSE + 2] == 3
        assert len(vector) == N_DENSE + 8

    def test_vector_length_fixed(self):
        profile = EditorProfile("alice")
        update_profile(profile, make_daily())
        for width in (0, 3, 10):
            assert len(profile_feature_vector(profile, width)) == N_DENSE + 2 * width

    def test_unused_profile_rejected(self):
        with pytest.raises(ValueError):
            profile_feature_vector(EditorProfile("alice"), 0)

    def test_replay_oracle(self, rng):
        profile = EditorProfile("alice")
        history = []
        for i in range(8):
            dense = np.zeros(N_DENSE)
            dense[2:] = rng.uniform(0, 5, size=N_DENSE - 2)
            history.append(dense)
            update_profile(profile, make_daily(day=date(2019, 2, 1 + i), dense=dense))
        vector = profile_feature_vector(profile, 0)
        expected = np.mean(history, axis=0)
        expected[:2] = history[0][:2]
        assert np.allclose(vector, expected, rtol=1e-9)


class TestStore:
    def test_lazy_creation_and_routing(self):
        store = ProfileStore(ngram_width=0)
        store.update(make_daily(editor_id="a"))
        store.update(make_daily(editor_id="b"))
        store.update(make_daily(editor_id="a", day=date(2019, 5, 5)))
        assert len(store) == 2
        assert store.profiles["a"].count == 2

    def test_vector_width_property(self):
        assert ProfileStore(ngram_width=7).vector_width == N_DENSE + 14

    def test_export_jsonl(self):
        store = ProfileStore(ngram_width=0)
        store.update(make_daily(editor_id="zed", inserted_ngrams={3: 1}))
        store.update(make_daily(editor_id="amy"))
        buffer = io.StringIO()
        store.export_jsonl(buffer)
        lines = [json.loads(line) for line in buffer.getvalue().splitlines()]
        assert [row["editor_id"] for row in lines] == ["amy", "zed"]
        assert lines[1]["count"] == 1
        assert lines[1]["inserted_ngrams"] == {"3": 1}

"""Daily aggregation: averaging, history rates, labels, and invariants."""

from datetime import date

import numpy as np
import pytest

from wikirevert.aggregate import aggregate_daily
from wikirevert.textfeatures import NgramConfig, WordList, fit_ngram_vocabulary

from conftest import make_event


def test_same_day_revision_sizes_average():
    events = [
        make_event(date="2019-05-04T10:00:00Z", revision_size=10),
        make_event(date="2019-05-04T11:00:00Z", revision_size=20, review_id="r2"),
    ]
    (record,) = aggregate_daily(events)
    assert record.avg_revision_size == 15
    assert record.n_reviews == 2


def test_single_review_averages_equal_raw_values():
    event = make_event(revision_size=42, n_links=7, polarity_inserted=-0.25)
    (record,) = aggregate_daily([event])
    assert record.avg_revision_size == 42
    assert record.avg_links == 7
    assert record.avg_polarity_inserted == -0.25
    assert np.allclose(record.ores_edit_quality, event.ores_edit_quality)
    assert record.n_reviews == 1


def test_empty_input_gives_empty_output():
    assert aggregate_daily([]) == []


def test_revert_label_is_any_revert_that_day():
    events = [
        make_event(date="2019-05-04T10:00:00Z", revert_flag=False),
        make_event(date="2019-05-04T11:00:00Z", revert_flag=True, review_id="r2"),
        make_event(date="2019-05-05T10:00:00Z", revert_flag=False, review_id="r3"),
    ]
    records = aggregate_daily(events)
    assert [r.revert_label for r in records] == [True, False]


def test_output_sorted_by_date_then_editor():
    events = [
        make_event(date="2019-05-05T10:00:00Z", editor={"name": "b", "id": "b"}),
        make_event(date="2019-05-04T10:00:00Z", editor={"name": "z", "id": "z"}, review_id="r2"),
        make_event(date="2019-05-04T10:00:00Z", editor={"name": "a", "id": "a"}, review_id="r3"),
    ]
    records = aggregate_daily(events)
    assert [(r.date.isoformat(), r.editor_id) for r in records] == [
        ("2019-05-04", "a"),
        ("2019-05-04", "z"),
        ("2019-05-05", "b"),
    ]


def test_history_rates():
    # Three edits to two articles across ISO weeks 2019-W01 and 2019-W03.
    events = [
        make_event(date="2019-01-01T10:00:00Z", article="x"),
        make_event(date="2019-01-01T11:00:00Z", article="y", review_id="r2"),
        make_event(date="2019-01-15T10:00:00Z", article="x", review_id="r3"),
    ]
    day1, day2 = aggregate_daily(events)
    assert day1.avg_revisions_per_article == 1.0      # 2 revisions / 2 articles
    assert day1.avg_revisions_per_week == 2.0         # first week
    assert day1.avg_articles_per_week == 2.0
    assert day2.avg_revisions_per_article == 1.5      # 3 revisions / 2 articles
    assert day2.avg_revisions_per_week == 1.0         # 3 revisions / 3 ISO weeks
    assert day2.avg_articles_per_week == pytest.approx(2 / 3)


def test_first_day_rate_denominators_are_at_least_one():
    (record,) = aggregate_daily([make_event()])
    assert record.avg_revisions_per_article == 1.0
    assert record.avg_revisions_per_week == 1.0


def test_group_by_oracle_seven_reviews(rng):
    # Brute-force recomputation over 7 reviews, 2 editors, 3 days.
    spec = [
        ("a", "2019-03-01T09:00:00Z"), ("a", "2019-03-01T15:00:00Z"),
        ("a", "2019-03-02T09:00:00Z"),
        ("b", "2019-03-01T10:00:00Z"), ("b", "2019-03-02T10:00:00Z"),
        ("b", "2019-03-02T11:30:00Z"), ("b", "2019-03-03T10:00:00Z"),
    ]
    events = []
    for i, (editor, stamp) in enumerate(spec):
        events.append(
            make_event(
                date=stamp,
                editor={"name": editor, "id": editor},
                review_id=f"r{i}",
                revision_size=int(rng.integers(1, 500)),
                n_links=int(rng.integers(0, 10)),
                polarity_inserted=float(rng.uniform(-1, 1)),
            )
        )
    records = aggregate_daily(events)

    groups: dict = {}
    for event in events:
        groups.setdefault((event.day(), event.editor_id), []).append(event)
    assert len(records) == len(groups) == 5
    for record in records:
        bucket = groups[(record.date, record.editor_id)]
        assert record.avg_revision_size == pytest.approx(
            sum(e.revision_size for e in bucket) / len(bucket)
        )
        assert record.avg_links == pytest.approx(sum(e.n_links for e in bucket) / len(bucket))
        assert record.avg_polarity_inserted == pytest.approx(
            sum(e.polarity_inserted for e in bucket) / len(bucket)
        )
        assert record.n_reviews == len(bucket)


def test_permutation_invariance_within_day(rng):
    events = [
        make_event(
            date=f"2019-05-04T{h:02d}:00:00Z",
            review_id=f"r{h}",
            revision_size=int(rng.integers(1, 100)),
        )
        for h in range(8)
    ]
    forward = aggregate_daily(events)
    shuffled = list(events)
    rng.shuffle(shuffled)
    assert [r.avg_revision_size for r in aggregate_daily(shuffled)] == [
        r.avg_revision_size for r in forward
    ]


def test_review_count_conserved(rng):
    events = [
        make_event(
            date=f"2019-05-{int(rng.integers(1, 6)):02d}T10:{i:02d}:00Z",
            editor={"name": f"e{int(rng.integers(0, 3))}", "id": f"e{int(rng.integers(0, 3))}"},
            review_id=f"r{i}",
        )
        for i in range(25)
    ]
    records = aggregate_daily(events)
    assert sum(r.n_reviews for r in records) == len(events)


def test_averages_bounded_by_day_extremes(rng):
    sizes = [int(v) for v in rng.integers(0, 1000, size=6)]
    events = [
        make_event(date=f"2019-05-04T0{i}:00:00Z", review_id=f"r{i}", revision_size=s)
        for i, s in enumerate(sizes)
    ]
    (record,) = aggregate_daily(events)
    assert min(sizes) <= record.avg_revision_size <= max(sizes)


def test_ngram_maps_sum_over_day():
    vocab = fit_ngram_vocabulary(
        [["ferry", "schedule"], ["ferry", "harbor"]],
        NgramConfig(word_range=(1, 1), char_range=(1, 1), min_df=0.0, max_df=1.0),
    )
    ferry_idx = vocab.word_ngrams["ferry"]
    events = [
        make_event(date="2019-05-04T10:00:00Z", inserted_text="ferry ferry"),
        make_event(date="2019-05-04T11:00:00Z", inserted_text="ferry schedule", review_id="r2"),
    ]
    (record,) = aggregate_daily(events, vocab=vocab, stopwords=WordList())
    assert record.inserted_ngrams[ferry_idx] == 3

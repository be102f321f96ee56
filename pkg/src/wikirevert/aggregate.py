"""Collapse individual review events into per-editor daily activity records."""

from __future__ import annotations

from datetime import date
from typing import Iterable, Sequence

import numpy as np

from .records import DailyRecord, ReviewEvent
from .textfeatures import NgramVocabulary, WordList, normalize_text, vectorize

# Monday of an ISO week; week indices count ISO weeks elapsed since this day.
_EPOCH_MONDAY = date(1970, 1, 5)


def _week_index(day: date) -> int:
    return (day - _EPOCH_MONDAY).days // 7


def _merge_counts(into: dict[int, int], add: dict[int, int]) -> None:
    for key, value in add.items():
        into[key] = into.get(key, 0) + value


def aggregate_daily(
    events: Iterable[ReviewEvent],
    vocab: NgramVocabulary | None = None,
    stopwords: WordList | None = None,
) -> list[DailyRecord]:
    """One DailyRecord per (editor, UTC day), averages over that day's reviews.

    Per-review numeric features are averaged arithmetically within the day;
    n-gram maps (when a vocabulary is given) sum the day's inserted/deleted
    texts; the per-article and per-week rates cover the editor's whole history
    up to and including the day. A day is labeled revert iff any of its
    reviews was reverted. Output is sorted by (date, editor_id).
    """
    ordered = sorted(events, key=lambda e: e.date)
    buckets: dict[tuple[date, str], list[ReviewEvent]] = {}
    for event in ordered:
        buckets.setdefault((event.day(), event.editor_id), []).append(event)

    # Editor history folds in (day, editor) order, which is also day-ascending
    # for each editor because buckets are keyed by day first.
    history: dict[str, dict] = {}
    records: list[DailyRecord] = []
    for (day, editor_id), day_events in sorted(buckets.items()):
        hist = history.setdefault(
            editor_id, {"revisions": 0, "articles": set(), "first_week": _week_index(day)}
        )
        hist["revisions"] += len(day_events)
        hist["articles"].update(e.article for e in day_events)
        weeks = max(1, _week_index(day) - hist["first_week"] + 1)
        n_articles = max(1, len(hist["articles"]))

        inserted: dict[int, int] = {}
        deleted: dict[int, int] = {}
        if vocab is not None:
            for e in day_events:
                _merge_counts(inserted, vectorize(normalize_text(e.inserted_text, stopwords), vocab))
                _merge_counts(deleted, vectorize(normalize_text(e.deleted_text, stopwords), vocab))

        first = day_events[0]
        n = len(day_events)
        records.append(
            DailyRecord(
                editor_id=editor_id,
                date=day,
                bot_flag=first.bot_flag,
                editor_is_creator=first.editor_is_creator,
                avg_revisions_per_article=hist["revisions"] / n_articles,
                avg_revisions_per_week=hist["revisions"] / weeks,
                avg_articles_per_week=len(hist["articles"]) / weeks,
                ores_edit_quality=_mean_block(day_events, "ores_edit_quality"),
                ores_item_quality=_mean_block(day_events, "ores_item_quality"),
                ores_article_quality=_mean_block(day_events, "ores_article_quality"),
                ores_wp10=_mean_block(day_events, "ores_wp10"),
                avg_revision_size=sum(e.revision_size for e in day_events) / n,
                avg_links=sum(e.n_links for e in day_events) / n,
                avg_repeated_links=sum(e.n_repeated_links for e in day_events) / n,
                avg_reverted_words=sum(e.n_reverted_words for e in day_events) / n,
                avg_bad_words=sum(e.n_bad_words for e in day_events) / n,
                avg_inserted_chars=sum(e.n_inserted_chars for e in day_events) / n,
                avg_deleted_chars=sum(e.n_deleted_chars for e in day_events) / n,
                avg_polarity_inserted=sum(e.polarity_inserted for e in day_events) / n,
                avg_polarity_deleted=sum(e.polarity_deleted for e in day_events) / n,
                inserted_ngrams=inserted,
                deleted_ngrams=deleted,
                revert_label=any(e.revert_flag for e in day_events),
                synthetic=False,
                n_reviews=n,
            )
        )
    return records


def _mean_block(day_events: Sequence[ReviewEvent], attr: str) -> np.ndarray:
    return np.mean([getattr(e, attr) for e in day_events], axis=0)

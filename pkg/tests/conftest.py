"""Shared builders for events, daily records and small corpora."""

from __future__ import annotations

import json
from datetime import date, datetime, timedelta, timezone

import numpy as np
import pytest

from wikirevert.records import DailyRecord, ReviewEvent, event_from_dict


def event_dict(**overrides) -> dict:
    """A schema-valid review event as a JSON-ready dict."""
    base = {
        "date": "2019-05-04T12:33:10Z",
        "review_id": "r1",
        "editor": {"name": "alice", "id": "alice"},
        "creator": {"name": "bob", "id": "bob"},
        "article": "Lisbon",
        "bot_flag": False,
        "editor_is_creator": False,
        "revision_size": 120,
        "n_links": 3,
        "n_repeated_links": 1,
        "inserted_text": "new ferry schedule",
        "deleted_text": "",
        "n_inserted_chars": 18,
        "n_deleted_chars": 0,
        "n_reverted_words": 0,
        "n_bad_words": 0,
        "polarity_inserted": 0.2,
        "polarity_deleted": 0.0,
        "ores_edit_quality": {
            "damaging_false": 0.9,
            "damaging_true": 0.1,
            "goodfaith_false": 0.05,
            "goodfaith_true": 0.95,
        },
        "ores_item_quality": {"a": 0.1, "b": 0.2, "c": 0.3, "d": 0.2, "e": 0.2},
        "ores_article_quality": {"ok": 0.7, "attack": 0.1, "spam": 0.1, "vandalism": 0.1},
        "ores_wp10": {"b": 0.1, "c": 0.2, "fa": 0.1, "ga": 0.2, "start": 0.2, "stub": 0.2},
        "revert_flag": False,
    }
    base.update(overrides)
    return base


def make_event(**overrides) -> ReviewEvent:
    return event_from_dict(event_dict(**overrides))


def event_line(**overrides) -> str:
    return json.dumps(event_dict(**overrides))


def make_daily(
    editor_id: str = "alice",
    day: date = date(2019, 5, 4),
    dense: np.ndarray | None = None,
    revert_label: bool = False,
    **kwargs,
) -> DailyRecord:
    if dense is None:
        dense = np.zeros(33)
        dense[5:24] = 0.5
    return DailyRecord.from_dense(editor_id, day, dense, revert_label=revert_label, **kwargs)


def revertlike_corpus(n: int, seed: int = 0) -> list[DailyRecord]:
    """Revert-labeled daily records with concentrated probability features and
    skewed count features, mimicking the shape of real activity data."""
    rng = np.random.default_rng(seed)
    records = []
    start = date(2019, 1, 1)
    for i in range(n):
        dense = np.zeros(33)
        dense[0] = float(rng.random() < 0.05)
        dense[1] = float(rng.random() < 0.2)
        dense[2:5] = rng.lognormal(0.5, 0.4, size=3)
        dense[5:24] = np.clip(rng.normal(0.8, 0.03, size=19), 0.0, 1.0)
        dense[24:29] = rng.lognormal(2.0, 0.5, size=5)
        dense[29:31] = rng.lognormal(3.0, 0.6, size=2)
        dense[31:33] = rng.uniform(-0.4, 0.4, size=2)
        records.append(
            DailyRecord.from_dense(
                f"editor{rng.integers(0, max(2, n // 5))}",
                start + timedelta(days=int(rng.integers(0, 365))),
                dense,
                inserted_ngrams={int(k): 1 for k in rng.integers(0, 12, size=2)},
                deleted_ngrams={},
                revert_label=True,
            )
        )
    return records


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def utc(year, month, day, hour=0, minute=0, second=0) -> datetime:
    return datetime(year, month, day, hour, minute, second, tzinfo=timezone.utc)

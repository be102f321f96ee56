"""Incrementally maintained per-editor profiles.

The static identifier flags come from the first record ever seen for the
editor and never change; every other scalar feature keeps a running mean; the
n-gram maps accumulate counts. The profile state, not the raw daily record,
is what the online classifiers consume.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from datetime import date
from typing import IO

import numpy as np

from .records import MEAN_SLOTS, N_DENSE, DailyRecord

logger = logging.getLogger(__name__)

_MEAN_SLOTS = np.array(MEAN_SLOTS)


@dataclass
class EditorProfile:
    editor_id: str
    static: np.ndarray = field(default_factory=lambda: np.zeros(2))
    means: np.ndarray = field(default_factory=lambda: np.zeros(len(MEAN_SLOTS)))
    count: int = 0
    inserted_ngrams: dict[int, int] = field(default_factory=dict)
    deleted_ngrams: dict[int, int] = field(default_factory=dict)
    last_updated: date | None = None


def update_profile(profile: EditorProfile, record: DailyRecord) -> EditorProfile:
    """Absorb one daily record: running means advance, n-gram counts accumulate.

    Records must arrive in date order for the editor; a record dated before
    the last update is rejected. A later record contradicting the static flags
    is logged and otherwise ignored.
    """
    if record.editor_id != profile.editor_id:
        raise ValueError(
            f"record for editor '{record.editor_id}' "
            f"applied to profile '{profile.editor_id}'"
        )
    if profile.last_updated is not None and record.date < profile.last_updated:
        raise ValueError(
            f"record for {record.date} precedes profile state at {profile.last_updated}; "
            "the stream must be sorted"
        )
    dense = record.dense_vector()
    if profile.count == 0:
        profile.static = dense[:2].copy()
    elif not np.array_equal(profile.static, dense[:2]):
        # A flipped bot flag is anomalous; the creator flag routinely differs
        # across articles, so it only gets debug-level noise.
        level = logging.WARNING if profile.static[0] != dense[0] else logging.DEBUG
        logger.log(
            level,
            "editor %s: static flags changed (%s -> %s); keeping the original",
            profile.editor_id,
            profile.static.tolist(),
            dense[:2].tolist(),
        )
    profile.count += 1
    profile.means += (dense[_MEAN_SLOTS] - profile.means) / profile.count
    for key, value in record.inserted_ngrams.items():
        profile.inserted_ngrams[key] = profile.inserted_ngrams.get(key, 0) + value
    for key, value in record.deleted_ngrams.items():
        profile.deleted_ngrams[key] = profile.deleted_ngrams.get(key, 0) + value
    profile.last_updated = record.date
    return profile


def profile_feature_vector(profile: EditorProfile, ngram_width: int) -> np.ndarray:
    """Dense slots in canonical order, then the inserted and deleted n-gram
    blocks densified to `ngram_width` columns each."""
    if profile.count == 0:
        raise ValueError(f"profile '{profile.editor_id}' has absorbed no records")
    out = np.zeros(N_DENSE + 2 * ngram_width)
    out[:2] = profile.static
    out[_MEAN_SLOTS] = profile.means
    for key, value in profile.inserted_ngrams.items():
        if key < ngram_width:
            out[N_DENSE + key] = value
    for key, value in profile.deleted_ngrams.items():
        if key < ngram_width:
            out[N_DENSE + ngram_width + key] = value
    return out


class ProfileStore:
    """Editor id -> profile map, created lazily on first sight."""

    def __init__(self, ngram_width: int = 0):
        self.ngram_width = ngram_width
        self.profiles: dict[str, EditorProfile] = {}

    def __len__(self) -> int:
        return len(self.profiles)

    @property
    def vector_width(self) -> int:
        return N_DENSE + 2 * self.ngram_width

    def update(self, record: DailyRecord) -> EditorProfile:
        profile = self.profiles.get(record.editor_id)
        if profile is None:
            profile = EditorProfile(editor_id=record.editor_id)
            self.profiles[record.editor_id] = profile
        return update_profile(profile, record)

    def vector(self, editor_id: str) -> np.ndarray:
        return profile_feature_vector(self.profiles[editor_id], self.ngram_width)

    def export_jsonl(self, fh: IO[str]) -> None:
        """One profile snapshot per line (means, counts, cumulative maps)."""
        for editor_id in sorted(self.profiles):
            p = self.profiles[editor_id]
            fh.write(
                json.dumps(
                    {
                        "editor_id": p.editor_id,
                        "static": p.static.tolist(),
                        "means": p.means.tolist(),
                        "count": p.count,
                        "inserted_ngrams": {str(k): p.inserted_ngrams[k] for k in sorted(p.inserted_ngrams)},
                        "deleted_ngrams": {str(k): p.deleted_ngrams[k] for k in sorted(p.deleted_ngrams)},
                        "last_updated": None if p.last_updated is None else p.last_updated.isoformat(),
                    }
                )
                + "\n"
            )

"""Synthetic revert-day generation for class balancing.

The generator stratifies each numeric feature into its four quartile
intervals, filters each interval subset with 1-D k-means (taking the largest
cluster to shed outliers), and draws uniformly between that cluster's own Q1
and Q3. Sharing the interval index across features for a given sample keeps
inter-feature correlation; features without statistical variation and the
n-gram maps are copied from observed values instead.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date, timedelta
from typing import IO, Iterable, Sequence

import numpy as np

from .records import (
    DENSE_FEATURE_NAMES,
    HASHMAP_SLOTS,
    N_DENSE,
    NUMERIC_SLOTS,
    SLOT_REVISION_SIZE,
    DailyRecord,
)
from .seeds import derive_seed

N_INTERVALS = 4


@dataclass(frozen=True)
class QuartileStats:
    minimum: float
    q1: float
    median: float
    q3: float
    maximum: float

    def __post_init__(self):
        if not (self.minimum <= self.q1 <= self.median <= self.q3 <= self.maximum):
            raise ValueError("quartile statistics out of order")

    def bounds(self, interval: int) -> tuple[float, float]:
        """[low, high] of one of the four quartile intervals (0-based)."""
        edges = (self.minimum, self.q1, self.median, self.q3, self.maximum)
        if not 0 <= interval < N_INTERVALS:
            raise ValueError(f"interval must lie in [0, {N_INTERVALS})")
        return edges[interval], edges[interval + 1]


def quartile_stats(values: Sequence[float]) -> QuartileStats:
    """Min, linear-interpolation quartiles, and max of a non-empty sample."""
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise ValueError("cannot compute quartiles of an empty sample")
    q1, median, q3 = np.quantile(values, [0.25, 0.5, 0.75])
    return QuartileStats(
        minimum=float(values.min()),
        q1=float(q1),
        median=float(median),
        q3=float(q3),
        maximum=float(values.max()),
    )


def kmeans_1d(
    values: Sequence[float], k: int, seed: int = 0
) -> tuple[np.ndarray, np.ndarray]:
    """Lloyd's algorithm on scalars; returns (assignments, centroids).

    Initial centroids are drawn without replacement from the distinct values
    (all of them if fewer than k exist), so the result is deterministic given
    the seed. Iterates until the largest centroid shift drops below 1e-9 or
    100 rounds pass.
    """
    values = np.asarray(values, dtype=float)
    if k < 1:
        raise ValueError("k must be at least 1")
    if values.size < k:
        raise ValueError(f"need at least k={k} values, got {values.size}")
    rng = np.random.default_rng(seed)
    distinct = np.unique(values)
    if len(distinct) <= k:
        centroids = distinct.copy()
    else:
        centroids = np.sort(rng.choice(distinct, size=k, replace=False))
    for _ in range(100):
        distances = np.abs(values[:, None] - centroids[None, :])
        assignment = np.argmin(distances, axis=1)
        updated = centroids.copy()
        for c in range(len(centroids)):
            members = values[assignment == c]
            if members.size:
                updated[c] = members.mean()
        shift = np.max(np.abs(updated - centroids))
        centroids = updated
        if shift < 1e-9:
            break
    assignment = np.argmin(np.abs(values[:, None] - centroids[None, :]), axis=1)
    return assignment, centroids


@dataclass(frozen=True)
class SynthConfig:
    count: int
    seed: int = 0
    k: int = 2
    date_range: tuple[date, date] | None = None

    def __post_init__(self):
        if self.count < 1:
            raise ValueError("count must be positive")
        if self.date_range is not None and self.date_range[0] > self.date_range[1]:
            raise ValueError("date_range start must not exceed its end")


def _interval_counts(count: int, notes: list[str] | None) -> list[int]:
    if count < N_INTERVALS:
        if notes is not None:
            notes.append(f"count={count} < 4: generating all samples from interval 1")
        return [count, 0, 0, 0]
    base, remainder = divmod(count, N_INTERVALS)
    return [base + (1 if r < remainder else 0) for r in range(N_INTERVALS)]


def _cluster_range(values: np.ndarray, k: int, seed: int) -> tuple[float, float]:
    """Q1..Q3 of the largest k-means cluster (ties to the lower cluster id)."""
    if values.size < k:
        cluster = values
    else:
        assignment, centroids = kmeans_1d(values, k, seed)
        sizes = np.bincount(assignment, minlength=len(centroids))
        cluster = values[assignment == int(np.argmax(sizes))]
    return float(np.quantile(cluster, 0.25)), float(np.quantile(cluster, 0.75))


def generate_reverts(
    originals: Sequence[DailyRecord],
    config: SynthConfig,
    notes: list[str] | None = None,
) -> list[DailyRecord]:
    """Create `config.count` synthetic revert-labeled daily records.

    Only revert-labeled originals are consulted. Every generated numeric value
    stays inside the corresponding feature's observed [min, max]; identifier
    flags, the n-gram maps and editor ids are copied from records observed in
    the interval at hand. Dates fall uniformly in the configured range
    (defaulting to the originals' date span) so synthetic activity does not
    clump. Identical configs produce identical output.
    """
    pool = [r for r in originals if r.revert_label]
    if not pool:
        raise ValueError("no revert-labeled records to synthesize from")
    dense = np.stack([r.dense_vector() for r in pool])
    stats = {f: quartile_stats(dense[:, f]) for f in NUMERIC_SLOTS}
    anchor_stats = quartile_stats(dense[:, SLOT_REVISION_SIZE])

    if config.date_range is not None:
        start_day, end_day = config.date_range
    else:
        days = [r.date for r in pool]
        start_day, end_day = min(days), max(days)
    span_days = (end_day - start_day).days

    rng = np.random.default_rng(config.seed)
    per_interval = _interval_counts(config.count, notes)
    all_rows = np.arange(len(pool))
    out: list[DailyRecord] = []
    for interval, n_samples in enumerate(per_interval):
        if n_samples == 0:
            continue
        lo_a, hi_a = anchor_stats.bounds(interval)
        anchor_rows = all_rows[
            (dense[:, SLOT_REVISION_SIZE] >= lo_a) & (dense[:, SLOT_REVISION_SIZE] <= hi_a)
        ]
        if anchor_rows.size == 0:
            anchor_rows = all_rows
            if notes is not None:
                notes.append(f"interval {interval + 1}: empty reference subset, using all records")

        lows = np.empty(len(NUMERIC_SLOTS))
        highs = np.empty(len(NUMERIC_SLOTS))
        for j, f in enumerate(NUMERIC_SLOTS):
            lo, hi = stats[f].bounds(interval)
            subset = dense[(dense[:, f] >= lo) & (dense[:, f] <= hi), f]
            if subset.size == 0:
                subset = dense[:, f]
                if notes is not None:
                    notes.append(
                        f"interval {interval + 1}: no records for "
                        f"'{DENSE_FEATURE_NAMES[f]}', using the full revert set"
                    )
            lows[j], highs[j] = _cluster_range(
                subset, config.k, derive_seed(config.seed, "kmeans", interval, f)
            )

        numeric = rng.uniform(lows, highs, size=(n_samples, len(NUMERIC_SLOTS)))
        flag_picks = {
            slot: anchor_rows[rng.integers(0, anchor_rows.size, size=n_samples)]
            for slot in sorted(HASHMAP_SLOTS)
        }
        inserted_picks = anchor_rows[rng.integers(0, anchor_rows.size, size=n_samples)]
        deleted_picks = anchor_rows[rng.integers(0, anchor_rows.size, size=n_samples)]
        editor_picks = anchor_rows[rng.integers(0, anchor_rows.size, size=n_samples)]
        day_offsets = rng.integers(0, span_days + 1, size=n_samples)

        for i in range(n_samples):
            vector = np.empty(N_DENSE)
            vector[list(NUMERIC_SLOTS)] = numeric[i]
            for slot, picks in flag_picks.items():
                vector[slot] = dense[picks[i], slot]
            out.append(
                DailyRecord.from_dense(
                    editor_id=pool[editor_picks[i]].editor_id,
                    day=start_day + timedelta(days=int(day_offsets[i])),
                    dense=vector,
                    inserted_ngrams=dict(pool[inserted_picks[i]].inserted_ngrams),
                    deleted_ngrams=dict(pool[deleted_picks[i]].deleted_ngrams),
                    revert_label=True,
                    synthetic=True,
                    n_reviews=0,
                )
            )
    return out


def merge_balance(
    original: Iterable[DailyRecord], synthetic: Iterable[DailyRecord]
) -> list[DailyRecord]:
    """Stable chronological merge of real and synthetic records."""
    combined = list(original) + list(synthetic)
    combined.sort(key=lambda r: (r.date, r.editor_id, r.synthetic))
    return combined


def fidelity_report(
    originals: Sequence[DailyRecord], synthetic: Sequence[DailyRecord]
) -> list[tuple[str, str, float, float, float]]:
    """Per-feature relative change (%) of Q1/Q2/Q3 between synthetic and
    original revert data: rows of (feature, quartile, original, synthetic, pct)."""
    orig = np.stack([r.dense_vector() for r in originals if r.revert_label])
    synth = np.stack([r.dense_vector() for r in synthetic])
    rows = []
    for f in NUMERIC_SLOTS:
        o = quartile_stats(orig[:, f])
        s = quartile_stats(synth[:, f])
        for label, o_val, s_val in (
            ("Q1", o.q1, s.q1),
            ("Q2", o.median, s.median),
            ("Q3", o.q3, s.q3),
        ):
            if o_val == 0.0:
                pct = 0.0 if s_val == 0.0 else float("inf")
            else:
                pct = abs(s_val - o_val) / abs(o_val) * 100.0
            rows.append((DENSE_FEATURE_NAMES[f], label, o_val, s_val, pct))
    return rows


def write_fidelity_csv(rows: Sequence[tuple[str, str, float, float, float]], fh: IO[str]) -> None:
    fh.write("feature,quartile,original,synthetic,relative_change_pct\n")
    for feature, quartile, o_val, s_val, pct in rows:
        fh.write(f'"{feature}",{quartile},{o_val!r},{s_val!r},{pct!r}\n')

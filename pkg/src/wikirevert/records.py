"""Schemas and IO for wiki review events and per-editor daily activity records.

A ReviewEvent is one raw timestamped edit with side features, quality-score
probabilities and the inserted/deleted text. A DailyRecord is the per-editor,
per-day aggregate the rest of the pipeline consumes. Both have a stable
JSON-lines wire format; DailyRecord additionally round-trips through CSV.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from datetime import date, datetime, timezone
from typing import IO, Iterable, Iterator

import numpy as np

ORES_EDIT_KEYS = ("damaging_false", "damaging_true", "goodfaith_false", "goodfaith_true")
ORES_ITEM_KEYS = ("a", "b", "c", "d", "e")
ORES_ARTICLE_KEYS = ("ok", "attack", "spam", "vandalism")
ORES_WP10_KEYS = ("b", "c", "fa", "ga", "start", "stub")

_ORES_EDIT_LABELS = ("damagingFalseAvg", "damagingTrueAvg", "goodfaithFalseAvg", "goodfaithTrueAvg")
_ORES_ITEM_LABELS = ("AAvg", "BAvg", "CAvg", "DAvg", "EAvg")
_ORES_ARTICLE_LABELS = ("OKAvg", "attackAvg", "spamAvg", "vandalismAvg")
_ORES_WP10_LABELS = ("WP10BAvg", "WP10CAvg", "WP10FAAvg", "WP10GAAvg", "WP10StartAvg", "WP10StubAvg")

# Canonical ordering of the dense slots of the daily feature vector. Quality
# probability groups are expanded to one slot per probability so that each can
# carry its own split threshold and show up by name in explanations.
DENSE_FEATURE_NAMES: tuple[str, ...] = (
    "Bot flag",
    "Editor is the creator of the article",
    "Average number of revisions per article",
    "Average number of revisions per week",
    "Average number of articles revised per week",
    *(f"Average ORES edit quality probability - {lbl}" for lbl in _ORES_EDIT_LABELS),
    *(f"Average ORES item quality probability - {lbl}" for lbl in _ORES_ITEM_LABELS),
    *(f"Average ORES article quality probability - {lbl}" for lbl in _ORES_ARTICLE_LABELS),
    *(f"Average ORES article quality probability - {lbl}" for lbl in _ORES_WP10_LABELS),
    "Average size of the revision",
    "Average number of links in the revision",
    "The average number of repeated links",
    "Average number of common reverted words",
    "Average number of bad words",
    "Average number of inserted characters",
    "Average number of deleted characters",
    "Average polarity of inserted characters",
    "Average polarity of deleted characters",
)
N_DENSE = len(DENSE_FEATURE_NAMES)

# Slot layout landmarks used across modules.
SLOT_BOT_FLAG = 0
SLOT_IS_CREATOR = 1
SLOT_ORES_START = 5
SLOT_ORES_END = 24          # exclusive; 19 probability slots
SLOT_REVISION_SIZE = 24
SLOT_BAD_WORDS = 28

# The two identifier flags plus the bad-word average carry little or no
# statistical variation; the synthesizer copies observed values for these
# instead of interval statistics.
HASHMAP_SLOTS = frozenset({SLOT_BOT_FLAG, SLOT_IS_CREATOR, SLOT_BAD_WORDS})
NUMERIC_SLOTS = tuple(i for i in range(N_DENSE) if i not in HASHMAP_SLOTS)
PROBABILITY_SLOTS = tuple(range(SLOT_ORES_START, SLOT_ORES_END))

# Slots folded into the running-mean block of an editor profile (everything
# except the two static identifier flags).
MEAN_SLOTS = tuple(range(2, N_DENSE))


class SchemaError(ValueError):
    """A record violates the wire schema; carries the offending field name."""

    def __init__(self, field: str, message: str):
        super().__init__(f"field '{field}': {message}")
        self.field = field


@dataclass(slots=True)
class ParseError:
    line_no: int
    message: str
    field: str | None = None

    def __str__(self) -> str:
        where = f"line {self.line_no}"
        if self.field is not None:
            where += f", field '{self.field}'"
        return f"{where}: {self.message}"


@dataclass(slots=True)
class ReviewEvent:
    """One raw review: a timestamped edit plus its side and content features."""

    date: datetime
    review_id: str
    editor_name: str
    editor_id: str
    creator_name: str
    creator_id: str
    article: str
    bot_flag: bool
    editor_is_creator: bool
    revision_size: int
    n_links: int
    n_repeated_links: int
    inserted_text: str
    deleted_text: str
    n_inserted_chars: int
    n_deleted_chars: int
    n_reverted_words: int
    n_bad_words: int
    polarity_inserted: float
    polarity_deleted: float
    ores_edit_quality: np.ndarray      # 4 probabilities, ORES_EDIT_KEYS order
    ores_item_quality: np.ndarray      # 5 probabilities, ORES_ITEM_KEYS order
    ores_article_quality: np.ndarray   # 4 probabilities, ORES_ARTICLE_KEYS order
    ores_wp10: np.ndarray              # 6 probabilities, ORES_WP10_KEYS order
    revert_flag: bool

    def day(self) -> date:
        return self.date.astimezone(timezone.utc).date()


@dataclass(slots=True)
class DailyRecord:
    """Aggregated activity of one editor over one UTC calendar day."""

    editor_id: str
    date: date
    bot_flag: bool
    editor_is_creator: bool
    avg_revisions_per_article: float
    avg_revisions_per_week: float
    avg_articles_per_week: float
    ores_edit_quality: np.ndarray
    ores_item_quality: np.ndarray
    ores_article_quality: np.ndarray
    ores_wp10: np.ndarray
    avg_revision_size: float
    avg_links: float
    avg_repeated_links: float
    avg_reverted_words: float
    avg_bad_words: float
    avg_inserted_chars: float
    avg_deleted_chars: float
    avg_polarity_inserted: float
    avg_polarity_deleted: float
    inserted_ngrams: dict[int, int]
    deleted_ngrams: dict[int, int]
    revert_label: bool
    synthetic: bool = False
    n_reviews: int = 1

    def dense_vector(self) -> np.ndarray:
        """All scalar features in canonical slot order (booleans as 0/1)."""
        out = np.empty(N_DENSE)
        out[0] = float(self.bot_flag)
        out[1] = float(self.editor_is_creator)
        out[2] = self.avg_revisions_per_article
        out[3] = self.avg_revisions_per_week
        out[4] = self.avg_articles_per_week
        out[5:9] = self.ores_edit_quality
        out[9:14] = self.ores_item_quality
        out[14:18] = self.ores_article_quality
        out[18:24] = self.ores_wp10
        out[24] = self.avg_revision_size
        out[25] = self.avg_links
        out[26] = self.avg_repeated_links
        out[27] = self.avg_reverted_words
        out[28] = self.avg_bad_words
        out[29] = self.avg_inserted_chars
        out[30] = self.avg_deleted_chars
        out[31] = self.avg_polarity_inserted
        out[32] = self.avg_polarity_deleted
        return out

    @staticmethod
    def from_dense(
        editor_id: str,
        day: date,
        dense: np.ndarray,
        inserted_ngrams: dict[int, int] | None = None,
        deleted_ngrams: dict[int, int] | None = None,
        revert_label: bool = False,
        synthetic: bool = False,
        n_reviews: int = 1,
    ) -> "DailyRecord":
        dense = np.asarray(dense, dtype=float)
        if dense.shape != (N_DENSE,):
            raise ValueError(f"dense vector must have shape ({N_DENSE},), got {dense.shape}")
        return DailyRecord(
            editor_id=editor_id,
            date=day,
            bot_flag=bool(dense[0] >= 0.5),
            editor_is_creator=bool(dense[1] >= 0.5),
            avg_revisions_per_article=float(dense[2]),
            avg_revisions_per_week=float(dense[3]),
            avg_articles_per_week=float(dense[4]),
            ores_edit_quality=dense[5:9].copy(),
            ores_item_quality=dense[9:14].copy(),
            ores_article_quality=dense[14:18].copy(),
            ores_wp10=dense[18:24].copy(),
            avg_revision_size=float(dense[24]),
            avg_links=float(dense[25]),
            avg_repeated_links=float(dense[26]),
            avg_reverted_words=float(dense[27]),
            avg_bad_words=float(dense[28]),
            avg_inserted_chars=float(dense[29]),
            avg_deleted_chars=float(dense[30]),
            avg_polarity_inserted=float(dense[31]),
            avg_polarity_deleted=float(dense[32]),
            inserted_ngrams=dict(inserted_ngrams or {}),
            deleted_ngrams=dict(deleted_ngrams or {}),
            revert_label=revert_label,
            synthetic=synthetic,
            n_reviews=n_reviews,
        )


# -- ReviewEvent wire format ------------------------------------------------

def _parse_timestamp(raw: object) -> datetime:
    if not isinstance(raw, str):
        raise ValueError("must be an ISO-8601 string")
    text = raw.strip()
    if text.endswith(("Z", "z")):
        text = text[:-1] + "+00:00"
    try:
        stamp = datetime.fromisoformat(text)
    except ValueError as exc:
        raise ValueError(f"invalid timestamp: {exc}") from exc
    if stamp.tzinfo is None:
        stamp = stamp.replace(tzinfo=timezone.utc)
    return stamp.astimezone(timezone.utc)


def _require(obj: dict, field: str) -> object:
    if field not in obj:
        raise SchemaError(field, "missing")
    return obj[field]


def _as_bool(value: object, field: str) -> bool:
    if not isinstance(value, bool):
        raise SchemaError(field, "must be a boolean")
    return value


def _as_count(value: object, field: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError(field, "must be a non-negative integer")
    if value < 0:
        raise SchemaError(field, "must be a non-negative integer")
    return value


def _as_str(value: object, field: str) -> str:
    if not isinstance(value, str):
        raise SchemaError(field, "must be a string")
    return value


def _as_polarity(value: object, field: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(field, "must be a number")
    value = float(value)
    if not -1.0 <= value <= 1.0:
        raise SchemaError(field, "must lie in [-1, 1]")
    return value


def _as_probs(value: object, field: str, keys: tuple[str, ...]) -> np.ndarray:
    if not isinstance(value, dict):
        raise SchemaError(field, f"must be an object with keys {list(keys)}")
    out = np.empty(len(keys))
    for i, key in enumerate(keys):
        if key not in value:
            raise SchemaError(field, f"missing probability '{key}'")
        p = value[key]
        if isinstance(p, bool) or not isinstance(p, (int, float)):
            raise SchemaError(field, f"probability '{key}' must be a number")
        p = float(p)
        if not 0.0 <= p <= 1.0:
            raise SchemaError(field, f"probability '{key}' must lie in [0, 1]")
        out[i] = p
    return out


def _as_party(value: object, field: str) -> tuple[str, str]:
    if not isinstance(value, dict):
        raise SchemaError(field, "must be an object with 'name' and 'id'")
    for key in ("name", "id"):
        if key not in value:
            raise SchemaError(field, f"missing '{key}'")
        if not isinstance(value[key], str):
            raise SchemaError(field, f"'{key}' must be a string")
    return value["name"], value["id"]


def event_from_dict(obj: dict) -> ReviewEvent:
    """Validate a decoded JSON object and build the event. Raises SchemaError."""
    try:
        stamp = _parse_timestamp(_require(obj, "date"))
    except SchemaError:
        raise
    except ValueError as exc:
        raise SchemaError("date", str(exc)) from exc
    editor_name, editor_id = _as_party(_require(obj, "editor"), "editor")
    creator_name, creator_id = _as_party(_require(obj, "creator"), "creator")
    edit_q = _as_probs(_require(obj, "ores_edit_quality"), "ores_edit_quality", ORES_EDIT_KEYS)
    # The damaging and goodfaith pairs are complementary probabilities.
    if abs(edit_q[0] + edit_q[1] - 1.0) > 1e-6:
        raise SchemaError("ores_edit_quality", "damaging probabilities must sum to 1")
    if abs(edit_q[2] + edit_q[3] - 1.0) > 1e-6:
        raise SchemaError("ores_edit_quality", "goodfaith probabilities must sum to 1")
    return ReviewEvent(
        date=stamp,
        review_id=_as_str(_require(obj, "review_id"), "review_id"),
        editor_name=editor_name,
        editor_id=editor_id,
        creator_name=creator_name,
        creator_id=creator_id,
        article=_as_str(_require(obj, "article"), "article"),
        bot_flag=_as_bool(_require(obj, "bot_flag"), "bot_flag"),
        editor_is_creator=_as_bool(_require(obj, "editor_is_creator"), "editor_is_creator"),
        revision_size=_as_count(_require(obj, "revision_size"), "revision_size"),
        n_links=_as_count(_require(obj, "n_links"), "n_links"),
        n_repeated_links=_as_count(_require(obj, "n_repeated_links"), "n_repeated_links"),
        inserted_text=_as_str(_require(obj, "inserted_text"), "inserted_text"),
        deleted_text=_as_str(_require(obj, "deleted_text"), "deleted_text"),
        n_inserted_chars=_as_count(_require(obj, "n_inserted_chars"), "n_inserted_chars"),
        n_deleted_chars=_as_count(_require(obj, "n_deleted_chars"), "n_deleted_chars"),
        n_reverted_words=_as_count(_require(obj, "n_reverted_words"), "n_reverted_words"),
        n_bad_words=_as_count(_require(obj, "n_bad_words"), "n_bad_words"),
        polarity_inserted=_as_polarity(_require(obj, "polarity_inserted"), "polarity_inserted"),
        polarity_deleted=_as_polarity(_require(obj, "polarity_deleted"), "polarity_deleted"),
        ores_edit_quality=edit_q,
        ores_item_quality=_as_probs(_require(obj, "ores_item_quality"), "ores_item_quality", ORES_ITEM_KEYS),
        ores_article_quality=_as_probs(
            _require(obj, "ores_article_quality"), "ores_article_quality", ORES_ARTICLE_KEYS
        ),
        ores_wp10=_as_probs(_require(obj, "ores_wp10"), "ores_wp10", ORES_WP10_KEYS),
        revert_flag=_as_bool(_require(obj, "revert_flag"), "revert_flag"),
    )


def event_to_dict(event: ReviewEvent) -> dict:
    return {
        "date": event.date.astimezone(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ"),
        "review_id": event.review_id,
        "editor": {"name": event.editor_name, "id": event.editor_id},
        "creator": {"name": event.creator_name, "id": event.creator_id},
        "article": event.article,
        "bot_flag": event.bot_flag,
        "editor_is_creator": event.editor_is_creator,
        "revision_size": event.revision_size,
        "n_links": event.n_links,
        "n_repeated_links": event.n_repeated_links,
        "inserted_text": event.inserted_text,
        "deleted_text": event.deleted_text,
        "n_inserted_chars": event.n_inserted_chars,
        "n_deleted_chars": event.n_deleted_chars,
        "n_reverted_words": event.n_reverted_words,
        "n_bad_words": event.n_bad_words,
        "polarity_inserted": event.polarity_inserted,
        "polarity_deleted": event.polarity_deleted,
        "ores_edit_quality": dict(zip(ORES_EDIT_KEYS, event.ores_edit_quality.tolist())),
        "ores_item_quality": dict(zip(ORES_ITEM_KEYS, event.ores_item_quality.tolist())),
        "ores_article_quality": dict(zip(ORES_ARTICLE_KEYS, event.ores_article_quality.tolist())),
        "ores_wp10": dict(zip(ORES_WP10_KEYS, event.ores_wp10.tolist())),
        "revert_flag": event.revert_flag,
    }


def parse_review_stream(
    source: Iterable[bytes | str],
    errors: list[ParseError] | None = None,
) -> Iterator[ReviewEvent]:
    """Parse newline-delimited JSON review events in file order.

    Malformed records (bad UTF-8, invalid JSON, schema violations) are skipped
    and reported through `errors` with their 1-based line number; they never
    abort the stream. Whitespace-only lines are ignored.
    """
    for line_no, raw in enumerate(source, start=1):
        if isinstance(raw, bytes):
            try:
                line = raw.decode("utf-8")
            except UnicodeDecodeError:
                if errors is not None:
                    errors.append(ParseError(line_no, "not valid UTF-8"))
                continue
        else:
            line = raw
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            if errors is not None:
                errors.append(ParseError(line_no, f"invalid JSON: {exc.msg}"))
            continue
        if not isinstance(obj, dict):
            if errors is not None:
                errors.append(ParseError(line_no, "record must be a JSON object"))
            continue
        try:
            yield event_from_dict(obj)
        except SchemaError as exc:
            if errors is not None:
                errors.append(ParseError(line_no, str(exc), field=exc.field))


def load_events(path: str) -> tuple[list[ReviewEvent], list[ParseError]]:
    """Read a JSON-lines event file. IO failures propagate as OSError."""
    errors: list[ParseError] = []
    with open(path, "rb") as fh:
        events = list(parse_review_stream(fh, errors))
    return events, errors


def write_events(events: Iterable[ReviewEvent], fh: IO[str]) -> None:
    for event in events:
        fh.write(json.dumps(event_to_dict(event)) + "\n")


# -- DailyRecord wire formats -------------------------------------------------

def _ngrams_to_json(counts: dict[int, int]) -> dict[str, int]:
    return {str(k): counts[k] for k in sorted(counts)}


def _ngrams_from_json(obj: dict) -> dict[int, int]:
    return {int(k): int(v) for k, v in obj.items()}


def daily_to_dict(record: DailyRecord) -> dict:
    return {
        "editor_id": record.editor_id,
        "date": record.date.isoformat(),
        "bot_flag": record.bot_flag,
        "editor_is_creator": record.editor_is_creator,
        "avg_revisions_per_article": record.avg_revisions_per_article,
        "avg_revisions_per_week": record.avg_revisions_per_week,
        "avg_articles_per_week": record.avg_articles_per_week,
        "ores_edit_quality": dict(zip(ORES_EDIT_KEYS, record.ores_edit_quality.tolist())),
        "ores_item_quality": dict(zip(ORES_ITEM_KEYS, record.ores_item_quality.tolist())),
        "ores_article_quality": dict(zip(ORES_ARTICLE_KEYS, record.ores_article_quality.tolist())),
        "ores_wp10": dict(zip(ORES_WP10_KEYS, record.ores_wp10.tolist())),
        "avg_revision_size": record.avg_revision_size,
        "avg_links": record.avg_links,
        "avg_repeated_links": record.avg_repeated_links,
        "avg_reverted_words": record.avg_reverted_words,
        "avg_bad_words": record.avg_bad_words,
        "avg_inserted_chars": record.avg_inserted_chars,
        "avg_deleted_chars": record.avg_deleted_chars,
        "avg_polarity_inserted": record.avg_polarity_inserted,
        "avg_polarity_deleted": record.avg_polarity_deleted,
        "inserted_ngrams": _ngrams_to_json(record.inserted_ngrams),
        "deleted_ngrams": _ngrams_to_json(record.deleted_ngrams),
        "revert_label": record.revert_label,
        "synthetic": record.synthetic,
        "n_reviews": record.n_reviews,
    }


def daily_from_dict(obj: dict) -> DailyRecord:
    return DailyRecord(
        editor_id=str(obj["editor_id"]),
        date=date.fromisoformat(obj["date"]),
        bot_flag=bool(obj["bot_flag"]),
        editor_is_creator=bool(obj["editor_is_creator"]),
        avg_revisions_per_article=float(obj["avg_revisions_per_article"]),
        avg_revisions_per_week=float(obj["avg_revisions_per_week"]),
        avg_articles_per_week=float(obj["avg_articles_per_week"]),
        ores_edit_quality=np.array([obj["ores_edit_quality"][k] for k in ORES_EDIT_KEYS], dtype=float),
        ores_item_quality=np.array([obj["ores_item_quality"][k] for k in ORES_ITEM_KEYS], dtype=float),
        ores_article_quality=np.array(
            [obj["ores_article_quality"][k] for k in ORES_ARTICLE_KEYS], dtype=float
        ),
        ores_wp10=np.array([obj["ores_wp10"][k] for k in ORES_WP10_KEYS], dtype=float),
        avg_revision_size=float(obj["avg_revision_size"]),
        avg_links=float(obj["avg_links"]),
        avg_repeated_links=float(obj["avg_repeated_links"]),
        avg_reverted_words=float(obj["avg_reverted_words"]),
        avg_bad_words=float(obj["avg_bad_words"]),
        avg_inserted_chars=float(obj["avg_inserted_chars"]),
        avg_deleted_chars=float(obj["avg_deleted_chars"]),
        avg_polarity_inserted=float(obj["avg_polarity_inserted"]),
        avg_polarity_deleted=float(obj["avg_polarity_deleted"]),
        inserted_ngrams=_ngrams_from_json(obj["inserted_ngrams"]),
        deleted_ngrams=_ngrams_from_json(obj["deleted_ngrams"]),
        revert_label=bool(obj["revert_label"]),
        synthetic=bool(obj.get("synthetic", False)),
        n_reviews=int(obj.get("n_reviews", 1)),
    )


def write_daily_jsonl(records: Iterable[DailyRecord], fh: IO[str]) -> None:
    for record in records:
        fh.write(json.dumps(daily_to_dict(record)) + "\n")


def read_daily_jsonl(fh: Iterable[str]) -> list[DailyRecord]:
    records = []
    for line in fh:
        if line.strip():
            records.append(daily_from_dict(json.loads(line)))
    return records


def load_daily_records(path: str) -> list[DailyRecord]:
    with open(path, "r", encoding="utf-8") as fh:
        return read_daily_jsonl(fh)


def save_daily_records(records: Iterable[DailyRecord], path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        write_daily_jsonl(records, fh)


_CSV_SCALARS = (
    "avg_revisions_per_article",
    "avg_revisions_per_week",
    "avg_articles_per_week",
    "avg_revision_size",
    "avg_links",
    "avg_repeated_links",
    "avg_reverted_words",
    "avg_bad_words",
    "avg_inserted_chars",
    "avg_deleted_chars",
    "avg_polarity_inserted",
    "avg_polarity_deleted",
)

_CSV_ORES = (
    ("ores_edit_quality", ORES_EDIT_KEYS),
    ("ores_item_quality", ORES_ITEM_KEYS),
    ("ores_article_quality", ORES_ARTICLE_KEYS),
    ("ores_wp10", ORES_WP10_KEYS),
)


def _csv_header() -> list[str]:
    header = ["editor_id", "date", "bot_flag", "editor_is_creator"]
    header += list(_CSV_SCALARS)
    for prefix, keys in _CSV_ORES:
        header += [f"{prefix}.{k}" for k in keys]
    header += ["inserted_ngrams", "deleted_ngrams", "revert_label", "synthetic", "n_reviews"]
    return header


def _ngrams_to_cell(counts: dict[int, int]) -> str:
    return "|".join(f"{k}:{counts[k]}" for k in sorted(counts))


def _ngrams_from_cell(cell: str) -> dict[int, int]:
    if not cell:
        return {}
    out: dict[int, int] = {}
    for pair in cell.split("|"):
        key, _, count = pair.partition(":")
        out[int(key)] = int(count)
    return out


def write_daily_csv(records: Iterable[DailyRecord], fh: IO[str]) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(_csv_header())
    for r in records:
        row: list[object] = [r.editor_id, r.date.isoformat(), str(r.bot_flag).lower(),
                             str(r.editor_is_creator).lower()]
        row += [repr(getattr(r, name)) for name in _CSV_SCALARS]
        for prefix, keys in _CSV_ORES:
            row += [repr(float(v)) for v in getattr(r, prefix)]
        row += [
            _ngrams_to_cell(r.inserted_ngrams),
            _ngrams_to_cell(r.deleted_ngrams),
            str(r.revert_label).lower(),
            str(r.synthetic).lower(),
            r.n_reviews,
        ]
        writer.writerow(row)


def read_daily_csv(fh: Iterable[str]) -> list[DailyRecord]:
    reader = csv.reader(fh)
    header = next(reader, None)
    if header != _csv_header():
        raise ValueError("unexpected CSV header")
    records = []
    for row in reader:
        cells = dict(zip(header, row))
        obj: dict = {
            "editor_id": cells["editor_id"],
            "date": cells["date"],
            "bot_flag": cells["bot_flag"] == "true",
            "editor_is_creator": cells["editor_is_creator"] == "true",
            "revert_label": cells["revert_label"] == "true",
            "synthetic": cells["synthetic"] == "true",
            "n_reviews": int(cells["n_reviews"]),
            "inserted_ngrams": _ngrams_from_cell(cells["inserted_ngrams"]),
            "deleted_ngrams": _ngrams_from_cell(cells["deleted_ngrams"]),
        }
        for name in _CSV_SCALARS:
            obj[name] = float(cells[name])
        for prefix, keys in _CSV_ORES:
            obj[prefix] = {k: float(cells[f"{prefix}.{k}"]) for k in keys}
        obj["inserted_ngrams"] = {str(k): v for k, v in obj["inserted_ngrams"].items()}
        obj["deleted_ngrams"] = {str(k): v for k, v in obj["deleted_ngrams"].items()}
        records.append(daily_from_dict(obj))
    return records

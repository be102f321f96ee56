"""Event parsing, schema validation and daily-record serialization."""

import io
import json
from datetime import date

import numpy as np
import pytest

from wikirevert.records import (
    DailyRecord,
    ParseError,
    daily_from_dict,
    daily_to_dict,
    event_from_dict,
    event_to_dict,
    load_events,
    parse_review_stream,
    read_daily_csv,
    read_daily_jsonl,
    write_daily_csv,
    write_daily_jsonl,
)

from conftest import event_dict, event_line, make_daily, make_event


class TestParsing:
    def test_three_valid_lines(self):
        lines = [event_line(review_id=f"r{i}") for i in range(3)]
        errors: list[ParseError] = []
        events = list(parse_review_stream(lines, errors))
        assert len(events) == 3
        assert errors == []
        assert [e.review_id for e in events] == ["r0", "r1", "r2"]

    def test_missing_date_reports_line_and_field(self):
        bad = event_dict()
        del bad["date"]
        lines = [event_line(), json.dumps(bad)]
        errors: list[ParseError] = []
        events = list(parse_review_stream(lines, errors))
        assert len(events) == 1
        assert len(errors) == 1
        assert errors[0].line_no == 2
        assert errors[0].field == "date"

    def test_invalid_utf8_is_record_error(self):
        lines = [event_line().encode(), b"\xff\xfe{bogus}\n", event_line().encode()]
        errors: list[ParseError] = []
        events = list(parse_review_stream(lines, errors))
        assert len(events) == 2
        assert len(errors) == 1
        assert errors[0].line_no == 2
        assert "UTF-8" in errors[0].message

    def test_invalid_json_is_record_error(self):
        errors: list[ParseError] = []
        events = list(parse_review_stream(["{not json"], errors))
        assert events == []
        assert errors[0].line_no == 1
        assert "JSON" in errors[0].message

    def test_blank_lines_skipped(self):
        events = list(parse_review_stream([event_line(), "", "   \n"]))
        assert len(events) == 1

    def test_probability_out_of_range_rejected(self):
        bad = event_dict()
        bad["ores_item_quality"]["a"] = 1.5
        errors: list[ParseError] = []
        assert list(parse_review_stream([json.dumps(bad)], errors)) == []
        assert errors[0].field == "ores_item_quality"

    def test_damaging_pair_must_be_complementary(self):
        bad = event_dict()
        bad["ores_edit_quality"]["damaging_false"] = 0.5  # true stays 0.1
        errors: list[ParseError] = []
        assert list(parse_review_stream([json.dumps(bad)], errors)) == []
        assert errors[0].field == "ores_edit_quality"

    def test_negative_count_rejected(self):
        errors: list[ParseError] = []
        assert list(parse_review_stream([event_line(n_links=-1)], errors)) == []
        assert errors[0].field == "n_links"

    def test_unreadable_source_is_fatal(self, tmp_path):
        with pytest.raises(OSError):
            load_events(str(tmp_path / "never-written.jsonl"))

    def test_load_events_file(self, tmp_path):
        path = tmp_path / "events.jsonl"
        path.write_text(event_line() + "\n" + event_line(review_id="r2") + "\n")
        events, errors = load_events(str(path))
        assert len(events) == 2 and not errors


class TestEventRoundTrip:
    def test_round_trip_equals_structurally(self):
        event = make_event(
            inserted_text="café http://x.y corner",
            polarity_inserted=-0.35,
            revert_flag=True,
        )
        line = json.dumps(event_to_dict(event))
        (back,) = parse_review_stream([line])
        assert event_to_dict(back) == event_to_dict(event)

    def test_timestamp_normalized_to_utc(self):
        event = event_from_dict(event_dict(date="2019-05-04T14:33:10+02:00"))
        assert event_to_dict(event)["date"] == "2019-05-04T12:33:10Z"

    def test_day_is_utc_calendar_date(self):
        event = event_from_dict(event_dict(date="2019-05-05T00:30:00+02:00"))
        assert event.day() == date(2019, 5, 4)


class TestDailyRecordIO:
    def test_jsonl_round_trip(self):
        dense = np.arange(33) / 40.0
        dense[5:24] = 0.25
        record = make_daily(dense=dense, revert_label=True,
                            inserted_ngrams={3: 2, 1: 1}, deleted_ngrams={0: 5}, n_reviews=4)
        buffer = io.StringIO()
        write_daily_jsonl([record], buffer)
        buffer.seek(0)
        (back,) = read_daily_jsonl(buffer)
        assert daily_to_dict(back) == daily_to_dict(record)

    def test_csv_round_trip(self):
        records = [
            make_daily(editor_id="e1", inserted_ngrams={7: 3}, deleted_ngrams={2: 1, 9: 4}),
            make_daily(editor_id="e2", day=date(2020, 1, 2), revert_label=True, synthetic=True),
        ]
        buffer = io.StringIO()
        write_daily_csv(records, buffer)
        buffer.seek(0)
        back = read_daily_csv(buffer)
        assert [daily_to_dict(r) for r in back] == [daily_to_dict(r) for r in records]

    def test_dense_vector_round_trip(self):
        dense = np.linspace(0, 1, 33)
        dense[0] = 1.0  # flag slots hold booleans
        dense[1] = 0.0
        record = DailyRecord.from_dense("e", date(2019, 1, 1), dense)
        assert np.allclose(record.dense_vector(), dense)

    def test_from_dense_rejects_bad_shape(self):
        with pytest.raises(ValueError):
            DailyRecord.from_dense("e", date(2019, 1, 1), np.zeros(10))

    def test_ngram_map_keys_are_ints_after_round_trip(self):
        record = make_daily(inserted_ngrams={11: 2})
        back = daily_from_dict(daily_to_dict(record))
        assert back.inserted_ngrams == {11: 2}

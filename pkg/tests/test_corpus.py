import io
import json
from datetime import date

import pytest
from hypothesis import given, strategies as st

from reqnet import corpus

CSV_HEADER = "issue_id,type,summary,stars,open_date,reporter,reporter_role,os_version\n"


def parse_csv(body):
    return corpus.parse_records(io.StringIO(CSV_HEADER + body), "csv")


class TestCleanText:
    def test_strips_tags(self):
        assert corpus.clean_text("<b>GPS</b> fails") == "GPS fails"

    def test_identity_on_clean_input(self):
        assert corpus.clean_text("plain text") == "plain text"

    def test_foreign_chars_and_tag(self):
        assert corpus.clean_text("naïve  café<br/>fix") == "nave caf fix"

    def test_unmatched_open_bracket(self):
        assert corpus.clean_text("value <") == "value <"

    @given(st.text())
    def test_idempotent(self, text):
        once = corpus.clean_text(text)
        assert corpus.clean_text(once) == once

    @given(st.text())
    def test_output_printable_ascii(self, text):
        cleaned = corpus.clean_text(text)
        assert all(0x20 <= ord(c) <= 0x7E for c in cleaned)
        assert "  " not in cleaned


class TestParseRecords:
    def test_csv_row_maps_fields(self):
        snap, rejects = parse_csv('1,enhancement,"add GPS API",3,2010-05-01,bob,user,2.1\n')
        assert not rejects
        rec = snap.records[0]
        assert rec.issue_id == "1"
        assert rec.issue_type == "enhancement"
        assert rec.summary == "add GPS API"
        assert rec.stars == 3
        assert rec.open_date == date(2010, 5, 1)
        assert rec.reporter_role == "user"

    def test_empty_stream(self):
        snap, rejects = corpus.parse_records(io.StringIO(""), "csv")
        assert len(snap) == 0 and rejects == []

    def test_malformed_rows_collected(self):
        rows = [
            '1,enhancement,ok,0,2010-01-01,a,user,1.0',
            '2,defect,ok,0,2010-01-02,a,user,1.0',
            '3,enhancement,bad date,0,not-a-date,a,user,1.0',
            '4,enhancement,ok,0,2010-01-04,a,user,1.0',
            '5,enhancement,bad stars,minus,2010-01-05,a,user,1.0',
            '6,other,ok,0,2010-01-06,a,user,1.0',
            '7,enhancement,ok,0,2010-01-07,a,user,1.0',
            '8,enhancement,ok,0,2010-01-08,a,user,1.0',
            '9,enhancement,ok,0,2010-01-09,a,user,1.0',
            '10,enhancement,ok,0,2010-01-10,a,user,1.0',
        ]
        snap, rejects = parse_csv("\n".join(rows) + "\n")
        assert len(snap) == 8
        assert len(rejects) == 2
        assert {r.location for r in rejects} == {"row 4", "row 6"}

    def test_missing_required_column_fatal(self):
        with pytest.raises(corpus.FormatError):
            corpus.parse_records(io.StringIO("issue_id,summary\n1,x\n"), "csv")

    def test_jsonl_defaults(self):
        line = json.dumps({"issue_id": "9", "type": "enhancement",
                           "summary": "x", "open_date": "2012-01-01"})
        snap, rejects = corpus.parse_records(io.StringIO(line + "\n"), "jsonl")
        rec = snap.records[0]
        assert rec.stars == 0 and rec.reporter_role == "anonymous"
        assert rec.os_version is None

    def test_jsonl_bad_line_rejected(self):
        snap, rejects = corpus.parse_records(io.StringIO("{not json}\n"), "jsonl")
        assert len(snap) == 0 and len(rejects) == 1

    def test_duplicate_id_rejected(self):
        snap, rejects = parse_csv(
            "1,defect,a,0,2010-01-01,x,user,1\n1,defect,b,0,2010-01-02,x,user,1\n")
        assert len(snap) == 1 and len(rejects) == 1

    def test_unknown_type_maps_to_other(self):
        snap, _ = parse_csv("1,Feature-Request,a,0,2010-01-01,x,user,1\n")
        assert snap.records[0].issue_type == "other"

    def test_round_trip_preserves_fields(self):
        body = ('1,enhancement,"add GPS, API",3,2010-05-01,bob,user,2.1\n'
                "2,defect,screen glitch,0,2011-06-02,amy,developer,3.0\n")
        snap, _ = parse_csv(body)
        buf = io.StringIO()
        corpus.write_jsonl(snap, buf)
        again, rejects = corpus.parse_records(io.StringIO(buf.getvalue()), "jsonl")
        assert not rejects
        assert again.records == snap.records


class TestFilterByType:
    def _mixed(self, counts):
        rows = []
        i = 0
        for t, n in counts.items():
            for _ in range(n):
                i += 1
                rows.append("%d,%s,x,0,2010-01-01,a,user,1" % (i, t))
        snap, _ = parse_csv("\n".join(rows) + "\n")
        return snap

    def test_counts_preserved(self):
        snap = self._mixed({"defect": 3, "enhancement": 2})
        assert len(corpus.filter_by_type(snap, "enhancement")) == 2

    def test_no_match_empty(self):
        snap = self._mixed({"defect": 3})
        assert len(corpus.filter_by_type(snap, "other")) == 0

    def test_scaled_tracker_proportions(self):
        # 1/100-scale synthetic mix: 157 defects, 53 enhancements, 5 others
        counts = {"defect": 157, "enhancement": 53, "other": 5}
        snap = self._mixed(counts)
        for t, n in counts.items():
            assert len(corpus.filter_by_type(snap, t)) == n

    def test_partition_property(self):
        snap = self._mixed({"defect": 7, "enhancement": 4, "other": 2})
        total = sum(len(corpus.filter_by_type(snap, t)) for t in corpus.ISSUE_TYPES)
        assert total == len(snap)


class TestPartitionByRelease:
    def test_mean_per_day(self):
        win = corpus.ReleaseWindow("w", date(2010, 1, 1), date(2010, 3, 22))
        assert (win.end_date - win.start_date).days == 80
        records = tuple(
            corpus.IssueRecord(str(i), "enhancement", "x",
                               open_date=date(2010, 2, 1))
            for i in range(64))
        snap = corpus.CorpusSnapshot(records)
        result = corpus.partition_by_release(snap, [win])
        stats = result.stats[0]
        assert stats.days == 80
        assert stats.total_requests == 64
        assert stats.mean_per_day == pytest.approx(0.8, abs=1e-12)

    def test_empty_window(self):
        win = corpus.ReleaseWindow("w", date(2010, 1, 1), date(2010, 2, 1))
        result = corpus.partition_by_release(corpus.CorpusSnapshot(()), [win])
        assert result.stats[0].total_requests == 0
        assert result.stats[0].mean_per_day == 0.0

    def test_hand_tally_three_windows(self):
        schedule = [
            corpus.ReleaseWindow("a", date(2010, 1, 1), date(2010, 2, 1)),
            corpus.ReleaseWindow("b", date(2010, 2, 1), date(2010, 3, 1)),
            corpus.ReleaseWindow("c", date(2010, 3, 1), date(2010, 4, 1)),
        ]
        days = [date(2009, 12, 25)] + \
               [date(2010, 1, 5), date(2010, 1, 20)] + \
               [date(2010, 2, 1)] + \
               [date(2010, 2, 2), date(2010, 2, 14), date(2010, 3, 1)] + \
               [date(2010, 3, 2)] * 20 + \
               [date(2010, 5, 1)] * 2
        records = tuple(corpus.IssueRecord(str(i), "enhancement", "x", open_date=d)
                        for i, d in enumerate(days))
        result = corpus.partition_by_release(corpus.CorpusSnapshot(records), schedule)
        tally = {s.window.name: s.total_requests for s in result.stats}
        # window end dates are inclusive, starts exclusive
        assert tally == {"a": 3, "b": 3, "c": 20}
        assert len(result.buckets[corpus.BEFORE_FIRST]) == 1
        assert len(result.buckets[corpus.AFTER_LAST]) == 2

    def test_conservation(self):
        schedule = corpus.load_schedule("android-preset")
        import random
        rng = random.Random(11)
        records = tuple(
            corpus.IssueRecord(str(i), "enhancement", "x",
                               open_date=date(2007 + rng.randrange(8),
                                              1 + rng.randrange(12),
                                              1 + rng.randrange(28)))
            for i in range(200))
        snap = corpus.CorpusSnapshot(records)
        result = corpus.partition_by_release(snap, schedule)
        assigned = sum(len(v) for v in result.buckets.values())
        assert assigned == len(snap)

    def test_android_preset_day_counts(self):
        schedule = corpus.load_schedule("android-preset")
        days = {w.name: (w.end_date - w.start_date).days for w in schedule}
        assert days["Early versions"] == 451
        assert days["Cupcake"] == 80
        assert days["Donut"] == 138
        assert days["Eclair"] == 119
        assert days["Froyo"] == 128
        assert days["Gingerbread"] == 265
        assert days["Honeycomb"] == 156
        assert days["Ice Cream Sandwich"] == 154
        assert days["Jellybean"] == 586
        assert days["KitKat"] == 99

    def test_overlapping_schedule_rejected(self):
        bad = [
            corpus.ReleaseWindow("a", date(2010, 1, 1), date(2010, 3, 1)),
            corpus.ReleaseWindow("b", date(2010, 2, 1), date(2010, 4, 1)),
        ]
        with pytest.raises(ValueError):
            corpus.partition_by_release(corpus.CorpusSnapshot(()), bad)

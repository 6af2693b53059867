import io

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from seqentropy.events import (Event, EventFormat, EventSequence, ParseError, SegmentSpec,
                               parse_events, segment, validate, write_events)


class TestParse:
    def test_three_rows(self):
        seq = parse_events("a,b,1\na,c,2\nb,a,2\n")
        assert len(seq) == 3
        assert seq.n_nodes == 3
        assert seq.nodes == {"a", "b", "c"}

    def test_interning_first_appearance(self):
        seq = parse_events("x,y,1\nz,x,2\nw,y,3\n")
        assert seq.labels == ("x", "y", "z", "w")
        assert seq.senders.tolist() == [0, 2, 3]
        assert seq.receivers.tolist() == [1, 0, 1]

    def test_bytes_and_streams(self):
        text = "a,b,1\nb,a,2\n"
        expected = parse_events(text)
        assert parse_events(text.encode()) == expected
        assert parse_events(io.BytesIO(text.encode())) == expected
        assert parse_events(io.StringIO(text)) == expected

    def test_self_loop_rejected_with_count(self):
        with pytest.raises(ParseError, match="1 self-loop"):
            parse_events("a,a,5\n")
        with pytest.raises(ParseError, match="2 self-loop.*line 2"):
            parse_events("a,b,1\nc,c,2\nd,d,3\n")

    def test_malformed_row_reports_line(self):
        with pytest.raises(ParseError) as err:
            parse_events("a,b,1\na,b\n")
        assert err.value.line == 2
        with pytest.raises(ParseError, match="line 3: timestamp 'x'"):
            parse_events("a,b,1\nb,c,2\nc,a,x\n")

    def test_unordered_without_flag(self):
        with pytest.raises(ParseError, match="line 2"):
            parse_events("a,b,5\nb,c,3\n")

    def test_stable_sort_keeps_ties_in_file_order(self):
        fmt = EventFormat(sort_if_unordered=True)
        seq = parse_events("a,b,5\nb,c,3\nc,a,3\nd,a,1\n", fmt)
        assert seq.triples() == [("d", "a", 1), ("b", "c", 3), ("c", "a", 3), ("a", "b", 5)]
        # interning follows the sorted order
        assert seq.labels == ("d", "a", "b", "c")

    def test_lenient_mode_keeps_violations(self):
        seq = parse_events("a,a,3\nb,c,1\n", strict=False)
        assert len(seq) == 2
        assert len(validate(seq)) == 2

    def test_header_and_named_columns(self):
        text = "time,from,to,weight\n10,u,v,1\n11,v,w,1\n"
        fmt = EventFormat(header=True, sender="from", receiver="to", timestamp="time")
        seq = parse_events(text, fmt)
        assert seq.triples() == [("u", "v", 10), ("v", "w", 11)]

    def test_named_column_missing(self):
        fmt = EventFormat(header=True, sender="src", receiver="to", timestamp="time")
        with pytest.raises(ParseError, match="no column 'src'"):
            parse_events("time,from,to\n1,a,b\n", fmt)

    def test_sociopatterns_preset(self):
        text = "140 1157 1232 MED ADM\n160 1157 1191 MED MED\n"
        seq = parse_events(text, EventFormat.from_string("sociopatterns"))
        assert seq.triples() == [("1157", "1232", 140), ("1157", "1191", 160)]

    def test_numeric_ids_stay_strings(self):
        seq = parse_events("007,7,1\n")
        assert seq.labels == ("007", "7")
        assert seq.n_nodes == 2

    def test_symmetrize(self):
        seq = parse_events("a,b,1\nc,a,2\n", EventFormat(symmetrize=True))
        assert seq.triples() == [("a", "b", 1), ("b", "a", 1), ("c", "a", 2), ("a", "c", 2)]

    def test_blank_and_comment_lines_skipped(self):
        seq = parse_events("# header comment\n\na,b,1\n\n")
        assert len(seq) == 1


class TestFormatString:
    def test_key_values(self):
        fmt = EventFormat.from_string("delimiter=tab;header=yes;sender=src;receiver=2;timestamp=0")
        assert fmt == EventFormat(delimiter="\t", header=True, sender="src", receiver=2,
                                  timestamp=0)

    def test_unknown_key(self):
        with pytest.raises(ValueError, match="unknown format key"):
            EventFormat.from_string("colour=red")

    def test_preset(self):
        assert EventFormat.from_string("csv") == EventFormat()


class TestValidate:
    def test_valid(self):
        seq = EventSequence.from_events([("a", "b", 1), ("a", "c", 2), ("b", "a", 2)])
        report = validate(seq)
        assert report.ok and len(report) == 0

    def test_ordering_violation(self):
        seq = EventSequence.from_events([("a", "b", 2), ("b", "a", 1)])
        report = validate(seq)
        assert [(v.kind, v.index) for v in report] == [("ordering", 1)]

    def test_self_loop_violation(self):
        seq = EventSequence.from_events([("a", "b", 1), ("a", "a", 3)])
        report = validate(seq)
        assert [(v.kind, v.index) for v in report] == [("self_loop", 1)]


class TestSegment:
    seq = EventSequence.from_events(
        [("a", "b", 1), ("b", "c", 2), ("c", "d", 5), ("d", "a", 6)])

    def test_two_parts(self):
        parts = segment(self.seq, SegmentSpec((0, 4, 10)))
        assert [len(p) for p in parts] == [2, 2]
        assert parts[1].triples() == [("c", "d", 5), ("d", "a", 6)]

    def test_parts_intern_their_own_nodes(self):
        parts = segment(self.seq, SegmentSpec((0, 4, 10)))
        assert parts[1].labels == ("c", "d", "a")
        assert parts[1].n_nodes == 3

    def test_empty_segments_allowed(self):
        parts = segment(self.seq, SegmentSpec((100, 200, 300)))
        assert [len(p) for p in parts] == [0, 0]
        assert parts[0].n_nodes == 0

    def test_half_open(self):
        parts = segment(self.seq, SegmentSpec((1, 2, 5, 7)))
        assert [[e.timestamp for e in p] for p in parts] == [[1], [2], [5, 6]]

    @pytest.mark.parametrize("bounds", [(), (3,), (0, 0), (5, 2, 9)])
    def test_invalid_spec(self, bounds):
        with pytest.raises(ValueError):
            SegmentSpec(bounds)

    def test_parse_spec(self):
        assert SegmentSpec.parse("0,4, 10").boundaries == (0, 4, 10)


class TestSequence:
    def test_iteration_and_indexing(self):
        seq = EventSequence.from_events([("a", "b", 1), ("b", "c", 2)])
        assert list(seq) == [Event("a", "b", 1), Event("b", "c", 2)]
        assert seq[1] == Event("b", "c", 2)
        assert seq[:1].triples() == [("a", "b", 1)]

    def test_arrays_read_only(self):
        seq = EventSequence.from_events([("a", "b", 1)])
        with pytest.raises(ValueError):
            seq.senders[0] = 1

    def test_write_format(self):
        seq = EventSequence.from_events([("a", "b", 1), ("b", "c", 20)])
        assert write_events(seq) == "a,b,1\nb,c,20\n"


# -- properties --------------------------------------------------------------

label = st.text(alphabet="abcdefghij0123456789_-.", min_size=1, max_size=4)


@st.composite
def event_lists(draw, max_size=40):
    n = draw(st.integers(0, max_size))
    times = sorted(draw(st.lists(st.integers(-1000, 1000), min_size=n, max_size=n)))
    events = []
    for t in times:
        s = draw(label)
        r = draw(label.filter(lambda x, s=s: x != s))
        events.append((s, r, t))
    return events


@given(event_lists())
def test_roundtrip_is_identity(events):
    seq = EventSequence.from_events(events)
    again = parse_events(write_events(seq))
    assert again.triples() == events
    assert parse_events(write_events(again)).triples() == events


@given(event_lists(), st.lists(st.integers(-1200, 1200), min_size=2, max_size=6, unique=True))
def test_segments_concatenate_to_covered_subsequence(events, bounds):
    bounds = sorted(bounds)
    seq = EventSequence.from_events(events)
    joined = [ev for part in segment(seq, SegmentSpec(tuple(bounds))) for ev in part.triples()]
    covered = [ev for ev in events if bounds[0] <= ev[2] < bounds[-1]]
    assert joined == covered


@settings(max_examples=50)
@given(event_lists())
def test_prefix_node_count_non_decreasing(events):
    seq = EventSequence.from_events(events)
    counts = [seq[:k].n_nodes for k in range(len(seq) + 1)]
    assert all(np.diff(counts) >= 0)

"""Event sequences: construction, parsing, validation and segmentation.

An event is a directed, timestamped interaction ``(sender, receiver, t)``.
Sequences keep node labels interned to dense integer indices in
first-appearance order (sender before receiver within an event), so the
numeric core can work on plain integer arrays.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import Iterable, Iterator, NamedTuple, Sequence, TextIO

import numpy as np

__all__ = [
    "Event",
    "EventSequence",
    "EventFormat",
    "SegmentSpec",
    "Violation",
    "ValidationReport",
    "ParseError",
    "parse_events",
    "read_events",
    "write_events",
    "validate",
    "segment",
]


class ParseError(ValueError):
    """Raised when an input file cannot be turned into a valid sequence."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class Event(NamedTuple):
    sender: str
    receiver: str
    timestamp: int


class EventSequence:
    """Time-ordered list of events backed by integer arrays.

    The constructor does not enforce ordering or the no-self-loop rule;
    use :func:`validate` to check a sequence, or :func:`parse_events`
    which rejects invalid input. Instances are treated as immutable.

    Parameters
    ----------
    labels : sequence of str
        Node labels; position is the interned index.
    senders, receivers : array_like of int
        Interned node indices per event.
    timestamps : array_like of int
        Event times, one per event.
    """

    __slots__ = ("labels", "senders", "receivers", "timestamps")

    def __init__(self, labels, senders, receivers, timestamps):
        self.labels = tuple(labels)
        self.senders = np.asarray(senders, dtype=np.int64)
        self.receivers = np.asarray(receivers, dtype=np.int64)
        self.timestamps = np.asarray(timestamps, dtype=np.int64)
        if not (len(self.senders) == len(self.receivers) == len(self.timestamps)):
            raise ValueError("senders, receivers and timestamps differ in length")
        for arr in (self.senders, self.receivers, self.timestamps):
            arr.setflags(write=False)

    @classmethod
    def from_events(cls, events: Iterable[Sequence]) -> "EventSequence":
        """Build a sequence from ``(sender, receiver, timestamp)`` triples."""
        index: dict[str, int] = {}
        senders, receivers, times = [], [], []
        for s, r, t in events:
            s, r = str(s), str(r)
            senders.append(index.setdefault(s, len(index)))
            receivers.append(index.setdefault(r, len(index)))
            times.append(int(t))
        return cls(list(index), senders, receivers, times)

    def __len__(self):
        return len(self.timestamps)

    @property
    def n_events(self) -> int:
        return len(self.timestamps)

    @property
    def n_nodes(self) -> int:
        """Number of distinct nodes taking part in at least one event."""
        if len(self) == 0:
            return 0
        return len(np.union1d(self.senders, self.receivers))

    @property
    def nodes(self) -> frozenset:
        used = np.union1d(self.senders, self.receivers)
        return frozenset(self.labels[i] for i in used)

    def __iter__(self) -> Iterator[Event]:
        labels = self.labels
        for s, r, t in zip(self.senders.tolist(), self.receivers.tolist(),
                           self.timestamps.tolist()):
            yield Event(labels[s], labels[r], t)

    def __getitem__(self, item):
        if isinstance(item, slice):
            return self.take(np.arange(len(self))[item])
        s, r, t = self.senders[item], self.receivers[item], self.timestamps[item]
        return Event(self.labels[s], self.labels[r], int(t))

    def take(self, positions) -> "EventSequence":
        """Sub-sequence at ``positions`` with labels re-interned.

        The result has its own node index, in first-appearance order within
        the selected events, so each part gets its own node set.
        """
        positions = np.asarray(positions, dtype=np.int64)
        s = self.senders[positions]
        r = self.receivers[positions]
        inter = np.empty(2 * len(positions), dtype=np.int64)
        inter[0::2] = s
        inter[1::2] = r
        _, first = np.unique(inter, return_index=True)
        old = inter[np.sort(first)]
        remap = np.full(len(self.labels), -1, dtype=np.int64)
        remap[old] = np.arange(len(old))
        return EventSequence([self.labels[i] for i in old], remap[s], remap[r],
                             self.timestamps[positions])

    def triples(self) -> list[tuple[str, str, int]]:
        return [tuple(ev) for ev in self]

    def __eq__(self, other):
        if not isinstance(other, EventSequence):
            return NotImplemented
        return self.triples() == other.triples()

    def __repr__(self):
        return f"EventSequence(M={self.n_events}, N={self.n_nodes})"


@dataclass(frozen=True)
class EventFormat:
    """Column and delimiter mapping for delimited event files.

    Columns are either 0-based integer positions or header names (names
    require ``header=True``). ``delimiter=None`` splits on any run of
    whitespace, which suits the SocioPatterns ``.dat`` files.
    """

    delimiter: str | None = ","
    header: bool = False
    sender: int | str = 0
    receiver: int | str = 1
    timestamp: int | str = 2
    sort_if_unordered: bool = False
    symmetrize: bool = False

    @classmethod
    def from_string(cls, text: str) -> "EventFormat":
        """Parse a preset name or ``key=value`` pairs joined by ``;``.

        >>> EventFormat.from_string("delimiter=ws;sender=1;receiver=2;timestamp=0")
        EventFormat(delimiter=None, header=False, sender=1, receiver=2, timestamp=0, sort_if_unordered=False, symmetrize=False)
        """
        text = text.strip()
        if text in _PRESETS:
            return _PRESETS[text]
        kwargs = {}
        for item in filter(None, (p.strip() for p in text.split(";"))):
            key, sep, value = item.partition("=")
            key, value = key.strip(), value.strip()
            if not sep:
                raise ValueError(f"format item {item!r} is not key=value")
            if key == "delimiter":
                kwargs[key] = _DELIMITER_NAMES.get(value, value)
            elif key in ("header", "sort_if_unordered", "symmetrize"):
                kwargs[key] = _parse_bool(value)
            elif key in ("sender", "receiver", "timestamp"):
                kwargs[key] = int(value) if value.lstrip("-").isdigit() else value
            else:
                raise ValueError(f"unknown format key {key!r}")
        return cls(**kwargs)


_DELIMITER_NAMES = {"ws": None, "whitespace": None, "tab": "\t", "comma": ",",
                    "semicolon": ";", "space": " "}
_PRESETS = {
    "csv": EventFormat(),
    "tsv": EventFormat(delimiter="\t"),
    # SocioPatterns contact lists: "t i j [extra columns]"
    "sociopatterns": EventFormat(delimiter=None, sender=1, receiver=2, timestamp=0),
}


def _parse_bool(value):
    v = value.lower()
    if v in ("1", "true", "yes", "y"):
        return True
    if v in ("0", "false", "no", "n"):
        return False
    raise ValueError(f"not a boolean: {value!r}")


def _resolve_column(col, names, line):
    if isinstance(col, int):
        return col
    if names is None:
        raise ParseError(f"column {col!r} given by name but the format has no header")
    try:
        return names.index(col)
    except ValueError:
        raise ParseError(f"header has no column {col!r}", line) from None


def parse_events(source, fmt: EventFormat | None = None, *, strict=True) -> EventSequence:
    """Read a delimited event file into an :class:`EventSequence`.

    Parameters
    ----------
    source : bytes, str, or a binary/text stream
        The file content or an open file object.
    fmt : EventFormat, optional
        Column mapping; defaults to ``sender,receiver,timestamp`` CSV.
    strict : bool
        When True (the default), self-loops and out-of-order timestamps raise
        :class:`ParseError`. With ``strict=False`` such rows are kept so the
        result can be passed to :func:`validate`; malformed rows still raise.

    Notes
    -----
    Node identifiers are kept as opaque strings. Ties in timestamps keep
    file order, including after ``sort_if_unordered`` (stable sort).
    """
    fmt = fmt or EventFormat()
    lines = _iter_lines(source)

    names = None
    start = 1
    if fmt.header:
        for lineno, raw in lines:
            if raw.strip():
                names = [c.strip() for c in _split(raw, fmt.delimiter)]
                start = lineno + 1
                break
    cols = [_resolve_column(c, names, start - 1)
            for c in (fmt.sender, fmt.receiver, fmt.timestamp)]
    width = max(cols) + 1

    rows = []
    self_loops = []
    for lineno, raw in lines:
        if not raw.strip() or raw.lstrip().startswith("#"):
            continue
        parts = _split(raw, fmt.delimiter)
        if len(parts) < width:
            raise ParseError(f"expected at least {width} fields, got {len(parts)}", lineno)
        s, r, t = (parts[c].strip() for c in cols)
        if not s or not r:
            raise ParseError("empty node identifier", lineno)
        try:
            t = int(t)
        except ValueError:
            raise ParseError(f"timestamp {t!r} is not an integer", lineno) from None
        if s == r:
            self_loops.append(lineno)
        rows.append((s, r, t, lineno))
        if fmt.symmetrize:
            rows.append((r, s, t, lineno))

    if strict and self_loops:
        raise ParseError(
            f"{len(self_loops)} self-loop row(s) (sender equals receiver), "
            f"first at line {self_loops[0]}")

    times = [row[2] for row in rows]
    unordered = [i for i in range(1, len(times)) if times[i] < times[i - 1]]
    if unordered:
        if fmt.sort_if_unordered:
            rows.sort(key=lambda row: row[2])  # stable: ties keep file order
        elif strict:
            bad = rows[unordered[0]]
            raise ParseError(
                f"timestamp {bad[2]} is earlier than the previous event "
                f"({len(unordered)} ordering violation(s); enable sort_if_unordered)",
                bad[3])

    return EventSequence.from_events((s, r, t) for s, r, t, _ in rows)


def _iter_lines(source):
    if hasattr(source, "read"):
        source = source.read()
    if isinstance(source, bytes):
        source = source.decode("utf-8")
    return _numbered(io.StringIO(source))


class _numbered:
    """Line iterator that can be resumed after reading the header."""

    def __init__(self, stream):
        self._it = enumerate(stream, start=1)

    def __iter__(self):
        return self

    def __next__(self):
        lineno, line = next(self._it)
        return lineno, line.rstrip("\r\n")


def _split(line, delimiter):
    return line.split() if delimiter is None else line.split(delimiter)


def read_events(path, fmt: EventFormat | None = None, *, strict=True) -> EventSequence:
    with open(path, "rb") as fh:
        return parse_events(fh.read(), fmt, strict=strict)


def write_events(seq: EventSequence, stream: TextIO | None = None) -> str | None:
    """Serialize as ``sender,receiver,timestamp`` lines with LF endings.

    Returns the text when no stream is given.
    """
    text = "".join(f"{s},{r},{t}\n" for s, r, t in seq)
    if stream is None:
        return text
    stream.write(text)
    return None


@dataclass(frozen=True)
class Violation:
    kind: str  # "self_loop" or "ordering"
    index: int
    detail: str


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    def __bool__(self):
        # truthy when there is something to report
        return bool(self.violations)

    def __len__(self):
        return len(self.violations)

    def __iter__(self):
        return iter(self.violations)

    @property
    def ok(self) -> bool:
        return not self.violations

    def of_kind(self, kind):
        return [v for v in self.violations if v.kind == kind]


def validate(seq: EventSequence) -> ValidationReport:
    """Report self-loops and timestamp decreases; empty iff the sequence is valid."""
    report = ValidationReport()
    loops = np.flatnonzero(seq.senders == seq.receivers)
    back = np.flatnonzero(np.diff(seq.timestamps) < 0) + 1
    found = [(int(i), "self_loop") for i in loops] + [(int(i), "ordering") for i in back]
    for i, kind in sorted(found):
        ev = seq[i]
        if kind == "self_loop":
            detail = f"event {i}: sender and receiver are both {ev.sender!r}"
        else:
            detail = (f"event {i}: timestamp {ev.timestamp} precedes "
                      f"{int(seq.timestamps[i - 1])}")
        report.violations.append(Violation(kind, i, detail))
    return report


@dataclass(frozen=True)
class SegmentSpec:
    """Half-open time intervals ``[b0, b1), [b1, b2), ...``."""

    boundaries: tuple[int, ...]

    def __post_init__(self):
        b = tuple(int(x) for x in self.boundaries)
        object.__setattr__(self, "boundaries", b)
        if len(b) < 2:
            raise ValueError("a segment spec needs at least two boundaries")
        if any(b1 <= b0 for b0, b1 in zip(b, b[1:])):
            raise ValueError("segment boundaries must be strictly increasing")

    @classmethod
    def parse(cls, text: str) -> "SegmentSpec":
        return cls(tuple(int(x) for x in text.split(",") if x.strip()))

    @property
    def intervals(self) -> list[tuple[int, int]]:
        b = self.boundaries
        return list(zip(b, b[1:]))

    def __len__(self):
        return len(self.boundaries) - 1


def segment(seq: EventSequence, spec: SegmentSpec) -> list[EventSequence]:
    """Split ``seq`` into one sequence per interval of ``spec``.

    Events outside every interval are dropped. Segments may be empty.
    Each segment interns its own node set.
    """
    if not isinstance(spec, SegmentSpec):
        spec = SegmentSpec(tuple(spec))
    out = []
    t = seq.timestamps
    for lo, hi in spec.intervals:
        out.append(seq.take(np.flatnonzero((t >= lo) & (t < hi))))
    return out

"""Cumulative first-, second- and third-order entropy of event sequences.

Three counter families are tracked over a growing prefix:

* nodes, in one of three roles (``sender``, ``receiver`` or ``either``),
* directed edges ``(sender, receiver)``,
* successions, i.e. the pair of edges of two consecutive events.

For a family with counts ``c_i`` summing to ``T`` the Shannon entropy
(natural log) is ``ln T - sum(c_i ln c_i) / T``. Keeping ``sum(c ln c)``
as a running accumulator makes every update O(1).

Maxima depend only on the number ``N`` of distinct nodes seen so far:
``ln N``, ``ln N(N-1)`` and ``2 ln N(N-1)``.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .events import Event, EventSequence

__all__ = [
    "ROLES",
    "CountState",
    "EntropySnapshot",
    "ingest_event",
    "entropy_first",
    "entropy_second",
    "entropy_third",
    "max_entropy",
    "normalized_entropy",
    "snapshot",
    "entropy_series",
    "batch_entropy",
    "batch_entropy_prefixes",
    "cumulative_entropies",
]

ROLES = ("sender", "receiver", "either")


def _xlogx(c):
    return c * math.log(c) if c > 1 else 0.0


class _Family:
    """Frequency table with its total and running sum of c*ln(c)."""

    __slots__ = ("counts", "total", "acc")

    def __init__(self):
        self.counts = {}
        self.total = 0
        self.acc = 0.0

    def add(self, key):
        c = self.counts.get(key, 0)
        self.counts[key] = c + 1
        self.total += 1
        if c:
            self.acc += (c + 1) * math.log(c + 1) - _xlogx(c)

    def entropy(self):
        t = self.total
        if t == 0:
            return 0.0
        return max(0.0, math.log(t) - self.acc / t)

    def recompute_acc(self):
        return math.fsum(_xlogx(c) for c in self.counts.values())

    def copy(self):
        other = _Family()
        other.counts = dict(self.counts)
        other.total = self.total
        other.acc = self.acc
        return other


class CountState:
    """Running count tables over a growing event prefix.

    Single writer: call :meth:`ingest` once per event in sequence order and
    read entropies between ingests. Zero counts are never stored.
    """

    def __init__(self):
        self.senders = _Family()
        self.receivers = _Family()
        self.either = _Family()
        self.edges = _Family()
        self.successions = _Family()
        self.last_edge = None
        self.last_timestamp = None

    def ingest(self, sender, receiver, timestamp=None):
        if sender == receiver:
            raise ValueError(f"self-loop event on node {sender!r}")
        edge = (sender, receiver)
        self.senders.add(sender)
        self.receivers.add(receiver)
        self.either.add(sender)
        self.either.add(receiver)
        self.edges.add(edge)
        if self.last_edge is not None:
            self.successions.add((self.last_edge, edge))
        self.last_edge = edge
        self.last_timestamp = timestamp
        return self

    def reset(self):
        self.__init__()

    def family(self, name):
        """Counter family by name: a role, ``"edge"`` or ``"succession"``."""
        return {
            "sender": self.senders,
            "receiver": self.receivers,
            "either": self.either,
            "edge": self.edges,
            "succession": self.successions,
        }[name]

    # read-only views on the count tables
    sender_counts = property(lambda self: self.senders.counts)
    receiver_counts = property(lambda self: self.receivers.counts)
    either_counts = property(lambda self: self.either.counts)
    edge_counts = property(lambda self: self.edges.counts)
    succession_counts = property(lambda self: self.successions.counts)

    @property
    def n_events(self) -> int:
        return self.edges.total

    @property
    def n_nodes(self) -> int:
        # every seen node has a positive count in the either-role table
        return len(self.either.counts)

    def copy(self) -> "CountState":
        other = CountState.__new__(CountState)
        for name in ("senders", "receivers", "either", "edges", "successions"):
            setattr(other, name, getattr(self, name).copy())
        other.last_edge = self.last_edge
        other.last_timestamp = self.last_timestamp
        return other


def ingest_event(state: CountState, ev: Event) -> CountState:
    return state.ingest(ev.sender, ev.receiver, ev.timestamp)


def _require_events(state):
    if state.n_events == 0:
        raise ValueError("entropy of an empty prefix is undefined")


def entropy_first(state: CountState, role: str = "sender") -> float:
    """Node entropy for ``role`` in {"sender", "receiver", "either"}."""
    if role not in ROLES:
        raise ValueError(f"role must be one of {ROLES}, got {role!r}")
    _require_events(state)
    return state.family(role).entropy()


def entropy_second(state: CountState) -> float:
    _require_events(state)
    return state.edges.entropy()


def entropy_third(state: CountState) -> float:
    # zero until the second event creates the first succession
    return state.successions.entropy()


def max_entropy(order: int, n_nodes: int) -> float:
    """Largest attainable entropy of the given order with ``n_nodes`` nodes.

    Returns 0 for degenerate node counts (``N <= 1`` for order 1,
    ``N < 2`` for orders 2 and 3); see :func:`is_degenerate_max`.
    """
    if order not in (1, 2, 3):
        raise ValueError(f"order must be 1, 2 or 3, got {order!r}")
    if n_nodes < 0:
        raise ValueError("node count must be non-negative")
    if order == 1:
        return math.log(n_nodes) if n_nodes > 1 else 0.0
    if n_nodes < 2:
        return 0.0
    pairs = math.log(n_nodes * (n_nodes - 1))
    return pairs if order == 2 else 2.0 * pairs


def is_degenerate_max(order: int, n_nodes: int) -> bool:
    return max_entropy(order, n_nodes) == 0.0


def _raw_entropy(order, state, role):
    if order == 1:
        return entropy_first(state, role)
    if order == 2:
        return entropy_second(state)
    if order == 3:
        return entropy_third(state)
    raise ValueError(f"order must be 1, 2 or 3, got {order!r}")


def _degenerate(order, state):
    n = state.n_nodes
    if order == 3 and state.successions.total == 0:
        return True
    return is_degenerate_max(order, n)


def normalized_entropy(order: int, state: CountState, role: str = "sender"):
    """Entropy divided by its maximum at the state's current node count.

    Returns ``(value, degenerate)``. Degenerate states (zero maximum, or
    no succession yet for order 3) give ``(0.0, True)``.
    """
    if state.n_events == 0 or _degenerate(order, state):
        return 0.0, True
    value = _raw_entropy(order, state, role)
    top = max_entropy(order, state.n_nodes)
    return min(1.0, value / top), False


@dataclass(frozen=True)
class EntropySnapshot:
    """All entropy values of one prefix.

    Tuples are indexed by order minus one: ``entropy[1]`` is the edge
    entropy. ``entropy[0]`` is for the node role recorded in ``role``.
    """

    event_index: int
    timestamp: int | None
    n_nodes: int
    role: str
    entropy: tuple[float, float, float]
    maximum: tuple[float, float, float]
    normalized: tuple[float, float, float]
    degenerate: tuple[bool, bool, bool]

    @property
    def s1(self):
        return self.entropy[0]

    @property
    def s2(self):
        return self.entropy[1]

    @property
    def s3(self):
        return self.entropy[2]

    def as_row(self) -> dict:
        row = {"event_index": self.event_index, "timestamp": self.timestamp,
               "N": self.n_nodes}
        for o in range(3):
            row[f"S{o + 1}"] = self.entropy[o]
        for o in range(3):
            row[f"S{o + 1}_max"] = self.maximum[o]
        for o in range(3):
            row[f"S{o + 1}_norm"] = self.normalized[o]
        for o in range(3):
            row[f"S{o + 1}_degenerate"] = int(self.degenerate[o])
        return row


def snapshot(state: CountState, event_index=None, timestamp=None,
             role: str = "sender") -> EntropySnapshot:
    """Materialize every measure of the current prefix without changing ``state``."""
    n = state.n_nodes
    maxima = tuple(max_entropy(o, n) for o in (1, 2, 3))
    values, norms, flags = [], [], []
    for order in (1, 2, 3):
        if state.n_events == 0:
            value = 0.0
        else:
            value = min(_raw_entropy(order, state, role), maxima[order - 1])
        norm, flag = normalized_entropy(order, state, role)
        values.append(value)
        norms.append(norm)
        flags.append(flag)
    if event_index is None:
        event_index = state.n_events
    if timestamp is None:
        timestamp = state.last_timestamp
    return EntropySnapshot(event_index, timestamp, n, role, tuple(values),
                           maxima, tuple(norms), tuple(flags))


def entropy_series(seq: EventSequence, role: str = "sender", stride: int = 1):
    """Stream ``seq`` through a fresh :class:`CountState`.

    Yields a snapshot at every ``stride``-th prefix (indices
    ``stride, 2*stride, ...``).
    """
    if stride < 1:
        raise ValueError("stride must be >= 1")
    state = CountState()
    labels = seq.labels
    k = 0
    for s, r, t in zip(seq.senders.tolist(), seq.receivers.tolist(),
                       seq.timestamps.tolist()):
        state.ingest(labels[s], labels[r], t)
        k += 1
        if k % stride == 0:
            yield snapshot(state, k, t, role)


# ---------------------------------------------------------------------------
# Brute-force reference: full probability tables, sum of -p ln p.
# ---------------------------------------------------------------------------

def _family_keys(seq, order, role):
    s = seq.senders.tolist()
    r = seq.receivers.tolist()
    if order == 1:
        if role == "sender":
            return s
        if role == "receiver":
            return r
        if role == "either":
            return s + r
        raise ValueError(f"role must be one of {ROLES}, got {role!r}")
    edges = list(zip(s, r))
    if order == 2:
        return edges
    if order == 3:
        return list(zip(edges, edges[1:]))
    raise ValueError(f"order must be 1, 2 or 3, got {order!r}")


def batch_entropy(seq: EventSequence, order: int, role: str = "sender") -> float:
    """Entropy of the whole sequence from freshly built frequency tables."""
    if len(seq) == 0:
        raise ValueError("entropy of an empty sequence is undefined")
    counts = Counter(_family_keys(seq, order, role))
    total = sum(counts.values())
    h = 0.0
    for c in counts.values():
        p = c / total
        h -= p * math.log(p)
    return h


def batch_entropy_prefixes(seq: EventSequence, order: int, role: str = "sender"):
    """Brute-force entropy of every prefix, one full table per prefix.

    Builds the ``M x distinct`` matrix of cumulative counts and applies
    ``-sum p ln p`` row by row. Memory is quadratic; meant for checking
    small sequences.
    """
    m = len(seq)
    if m == 0:
        raise ValueError("entropy of an empty sequence is undefined")
    keys = _family_keys(seq, order, role)
    if order == 1 and role == "either":
        # senders first, then receivers: both halves belong to event k
        owner = list(range(m)) * 2
    elif order == 3:
        owner = list(range(1, m))
    else:
        owner = list(range(m))
    codes = {}
    cols = [codes.setdefault(key, len(codes)) for key in keys]
    table = np.zeros((m, max(len(codes), 1)))
    np.add.at(table, (np.array(owner, dtype=int), np.array(cols, dtype=int)), 1.0)
    table = np.cumsum(table, axis=0)
    totals = table.sum(axis=1, keepdims=True)
    p = table / np.where(totals > 0, totals, 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(p > 0, -p * np.log(p), 0.0)
    return terms.sum(axis=1)


# ---------------------------------------------------------------------------
# Array path: every prefix at once, used for randomized replicas.
# ---------------------------------------------------------------------------

def _occurrence_counts(keys):
    """For each position, how many times its key occurred up to and including it."""
    n = len(keys)
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    order = np.argsort(keys, kind="stable")
    sk = keys[order]
    new = np.empty(n, dtype=bool)
    new[0] = True
    np.not_equal(sk[1:], sk[:-1], out=new[1:])
    starts = np.flatnonzero(new)
    lengths = np.diff(np.append(starts, n))
    ranks = np.arange(1, n + 1) - np.repeat(starts, lengths)
    out = np.empty(n, dtype=np.int64)
    out[order] = ranks
    return out


def _xlogx_table(n):
    c = np.arange(n + 1, dtype=np.float64)
    with np.errstate(divide="ignore", invalid="ignore"):
        t = c * np.log(c)
    t[:2] = 0.0
    return t


def _prefix_accumulator(keys, table):
    c = _occurrence_counts(keys)
    return np.cumsum(table[c] - table[c - 1])


def _prefix_entropy(acc, totals):
    return np.maximum(0.0, np.log(totals) - acc / totals)


def cumulative_entropies(senders, receivers, role: str = "sender") -> dict:
    """Entropy measures at every prefix of an integer-coded sequence.

    Parameters
    ----------
    senders, receivers : ndarray of int
        Node indices of each event, in sequence order. No self-loops.
    role : str
        Node role used for the first-order entropy.

    Returns
    -------
    dict of ndarray, each of length ``M``
        ``N``, ``S1``..``S3``, ``S1_max``..``S3_max``, ``S1_norm``..``S3_norm``
        and boolean ``S1_degenerate``..``S3_degenerate``; position ``k``
        holds the value for the prefix of length ``k + 1``.
    """
    if role not in ROLES:
        raise ValueError(f"role must be one of {ROLES}, got {role!r}")
    s = np.asarray(senders, dtype=np.int64)
    r = np.asarray(receivers, dtype=np.int64)
    m = len(s)
    if m == 0:
        raise ValueError("entropy of an empty sequence is undefined")
    table = _xlogx_table(2 * m)
    k = np.arange(1, m + 1, dtype=np.float64)

    inter = np.empty(2 * m, dtype=np.int64)
    inter[0::2] = s
    inter[1::2] = r
    _, first = np.unique(inter, return_index=True)
    n_nodes = np.cumsum(np.bincount(first // 2, minlength=m))

    if role == "either":
        acc1 = _prefix_accumulator(inter, table)[1::2]
        s1 = _prefix_entropy(acc1, 2 * k)
    else:
        acc1 = _prefix_accumulator(s if role == "sender" else r, table)
        s1 = _prefix_entropy(acc1, k)

    width = int(max(s.max(), r.max())) + 1
    edge = s * width + r
    s2 = _prefix_entropy(_prefix_accumulator(edge, table), k)

    s3 = np.zeros(m)
    if m > 1:
        _, dense = np.unique(edge, return_inverse=True)
        dense = dense.ravel().astype(np.int64)
        n_edges = int(dense.max()) + 1
        succ = dense[:-1] * n_edges + dense[1:]
        s3[1:] = _prefix_entropy(_prefix_accumulator(succ, table), k[:-1])

    nf = n_nodes.astype(np.float64)
    with np.errstate(divide="ignore", invalid="ignore"):
        max1 = np.where(n_nodes > 1, np.log(nf), 0.0)
        max2 = np.where(n_nodes > 1, np.log(nf * (nf - 1)), 0.0)
    max3 = 2.0 * max2

    deg1 = max1 == 0.0
    deg2 = max2 == 0.0
    deg3 = (max3 == 0.0) | (k < 2)
    out = {"N": n_nodes}
    for name, val, top, deg in (("S1", s1, max1, deg1), ("S2", s2, max2, deg2),
                                ("S3", s3, max3, deg3)):
        val = np.minimum(val, top)
        with np.errstate(divide="ignore", invalid="ignore"):
            norm = np.where(deg, 0.0, val / np.where(deg, 1.0, top))
        out[name] = val
        out[name + "_max"] = top
        out[name + "_norm"] = np.minimum(norm, 1.0)
        out[name + "_degenerate"] = deg
    return out

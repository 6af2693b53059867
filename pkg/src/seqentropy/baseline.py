"""Randomized baselines that keep timestamps and the node set.

Each replica walks the real sequence, keeps every timestamp, and draws a
fresh sender and receiver from the real node set; the receiver is redrawn
while it equals the sender. K replicas seeded ``master_seed + r`` are
summarized by per-checkpoint mean and sample standard deviation.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .engine import ROLES, cumulative_entropies
from .events import EventSequence

__all__ = [
    "SELECTORS",
    "MEASURES",
    "NodeSelector",
    "EnsembleStats",
    "EnsembleAccumulator",
    "random_indices",
    "generate_random_sequence",
    "replica_series",
    "run_ensemble",
    "stride_checkpoints",
]

SELECTORS = ("uniform", "normal", "exponential")
MEASURES = ("S1", "S2", "S3", "S1_norm", "S2_norm", "S3_norm")


@dataclass(frozen=True)
class NodeSelector:
    """Distribution over node indices ``0 .. n_nodes - 1``.

    ``normal`` samples N((N-1)/2, N/6) and ``exponential`` samples an
    exponential with rate 4/N; both round to the nearest integer and
    resample values outside the index range. Indices follow the real
    sequence's first-appearance order.
    """

    kind: str = "uniform"
    n_nodes: int = 0

    def __post_init__(self):
        if self.kind not in SELECTORS:
            raise ValueError(f"selector must be one of {SELECTORS}, got {self.kind!r}")
        if self.n_nodes < 1:
            raise ValueError("selector needs at least one node")

    def _draw(self, rng, size):
        n = self.n_nodes
        if self.kind == "uniform":
            return rng.integers(0, n, size=size)
        if self.kind == "normal":
            x = rng.normal((n - 1) / 2.0, n / 6.0, size=size)
        else:
            x = rng.exponential(n / 4.0, size=size)
        return np.rint(x).astype(np.int64)

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        out = self._draw(rng, size)
        bad = np.flatnonzero((out < 0) | (out >= self.n_nodes))
        while len(bad):
            out[bad] = self._draw(rng, len(bad))
            bad = bad[(out[bad] < 0) | (out[bad] >= self.n_nodes)]
        return out


def random_indices(n_events: int, selector: NodeSelector, seed):
    """Sender and receiver index arrays of one replica.

    Senders are drawn first, then receivers; receivers equal to their
    sender are redrawn (and only those) until none remain.
    """
    if selector.n_nodes < 2:
        raise ValueError("random events need at least two nodes to avoid self-loops")
    rng = np.random.default_rng(seed)
    senders = selector.sample(rng, n_events)
    receivers = selector.sample(rng, n_events)
    clash = np.flatnonzero(senders == receivers)
    while len(clash):
        receivers[clash] = selector.sample(rng, len(clash))
        clash = clash[senders[clash] == receivers[clash]]
    return senders, receivers


def _selector_for(real, selector):
    if isinstance(selector, str):
        selector = NodeSelector(selector, max(len(real.labels), 1))
    if selector.n_nodes != len(real.labels):
        selector = NodeSelector(selector.kind, len(real.labels))
    return selector


def generate_random_sequence(real: EventSequence, selector="uniform", seed=0) -> EventSequence:
    """One randomized replica of ``real`` as a full :class:`EventSequence`."""
    if real.n_nodes < 2:
        raise ValueError("the real sequence needs at least two distinct nodes")
    selector = _selector_for(real, selector)
    s, r = random_indices(len(real), selector, seed)
    # keep the real label table so indices keep their meaning
    return EventSequence(real.labels, s, r, real.timestamps)


def replica_series(real: EventSequence, selector="uniform", seed=0,
                   role="sender", checkpoints=None) -> dict:
    """Entropy measures of one replica at ``checkpoints`` (1-based prefix lengths)."""
    selector = _selector_for(real, selector)
    s, r = random_indices(len(real), selector, seed)
    series = cumulative_entropies(s, r, role)
    if checkpoints is None:
        return {m: series[m] for m in MEASURES}
    pos = np.asarray(checkpoints, dtype=np.int64) - 1
    return {m: series[m][pos] for m in MEASURES}


class EnsembleAccumulator:
    """Welford running mean/variance over replica arrays.

    Replicas must be added in replica-index order for bit-identical
    results; :meth:`merge` combines two partial accumulators.
    """

    def __init__(self, measures=MEASURES):
        self.measures = tuple(measures)
        self.count = 0
        self.mean = {}
        self.m2 = {}

    def add(self, values: dict):
        self.count += 1
        k = self.count
        for m in self.measures:
            x = np.asarray(values[m], dtype=np.float64)
            if k == 1:
                self.mean[m] = x.copy()
                self.m2[m] = np.zeros_like(x)
                continue
            delta = x - self.mean[m]
            self.mean[m] += delta / k
            self.m2[m] += delta * (x - self.mean[m])

    def merge(self, other: "EnsembleAccumulator") -> "EnsembleAccumulator":
        out = EnsembleAccumulator(self.measures)
        if not other.count:
            out.count, out.mean, out.m2 = self.count, dict(self.mean), dict(self.m2)
            return out
        if not self.count:
            out.count, out.mean, out.m2 = other.count, dict(other.mean), dict(other.m2)
            return out
        na, nb = self.count, other.count
        out.count = na + nb
        for m in self.measures:
            delta = other.mean[m] - self.mean[m]
            out.mean[m] = self.mean[m] + delta * (nb / out.count)
            out.m2[m] = self.m2[m] + other.m2[m] + delta ** 2 * (na * nb / out.count)
        return out

    def std(self, m):
        if self.count < 2:
            raise ValueError("sample deviation needs at least two replicas")
        return np.sqrt(np.maximum(self.m2[m], 0.0) / (self.count - 1))


@dataclass
class EnsembleStats:
    """Per-checkpoint mean and sample deviation over ``replicas`` randomized runs."""

    checkpoints: np.ndarray
    timestamps: np.ndarray
    replicas: int
    master_seed: int
    selector: str
    role: str
    mean: dict = field(default_factory=dict)
    std: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.checkpoints)

    def rows(self):
        """One dict per checkpoint, ``<measure>_mean`` / ``<measure>_std`` columns."""
        for i, (k, t) in enumerate(zip(self.checkpoints.tolist(), self.timestamps.tolist())):
            row = {"event_index": k, "timestamp": t}
            for m in self.mean:
                row[f"{m}_mean"] = float(self.mean[m][i])
                row[f"{m}_std"] = float(self.std[m][i])
            yield row


def stride_checkpoints(n_events: int, stride: int = 1) -> np.ndarray:
    if stride < 1:
        raise ValueError("stride must be >= 1")
    return np.arange(stride, n_events + 1, stride, dtype=np.int64)


def _check_checkpoints(checkpoints, n_events):
    cp = np.asarray(checkpoints, dtype=np.int64)
    if cp.ndim != 1 or len(cp) == 0:
        raise ValueError("checkpoints must be a non-empty 1-d list of prefix lengths")
    if cp[0] < 1 or cp[-1] > n_events or np.any(np.diff(cp) <= 0):
        raise ValueError(
            f"checkpoints must be strictly increasing prefix lengths in [1, {n_events}]")
    return cp


def _replica_job(args):
    real, selector, seed, role, checkpoints = args
    return replica_series(real, selector, seed, role, checkpoints)


def run_ensemble(real: EventSequence, replicas: int = 100, selector="uniform",
                 checkpoints=None, master_seed: int = 0, role: str = "sender",
                 workers: int = 1) -> EnsembleStats:
    """Summarize ``replicas`` randomized versions of ``real``.

    Parameters
    ----------
    real : EventSequence
        The observed sequence; supplies timestamps and the node set.
    replicas : int
        Number K of replicas, at least 2. Replica ``r`` uses seed
        ``master_seed + r``.
    selector : str or NodeSelector
        Node distribution (``uniform`` by default).
    checkpoints : array_like of int, optional
        Strictly increasing 1-based prefix lengths; default every event.
    role : str
        Node role for the first-order entropy.
    workers : int
        Process count. Results are reduced in replica order, so they do not
        depend on this value.
    """
    if replicas < 2:
        raise ValueError("an ensemble needs at least two replicas")
    if role not in ROLES:
        raise ValueError(f"role must be one of {ROLES}, got {role!r}")
    if real.n_nodes < 2:
        raise ValueError("the real sequence needs at least two distinct nodes")
    if checkpoints is None:
        checkpoints = stride_checkpoints(len(real))
    cp = _check_checkpoints(checkpoints, len(real))
    selector = _selector_for(real, selector)

    jobs = ((real, selector, master_seed + r, role, cp) for r in range(replicas))
    acc = EnsembleAccumulator()
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for values in pool.map(_replica_job, jobs, chunksize=max(1, replicas // (4 * workers))):
                acc.add(values)
    else:
        for job in jobs:
            acc.add(_replica_job(job))

    return EnsembleStats(
        checkpoints=cp,
        timestamps=real.timestamps[cp - 1],
        replicas=replicas,
        master_seed=master_seed,
        selector=selector.kind,
        role=role,
        mean={m: acc.mean[m] for m in MEASURES},
        std={m: acc.std(m) for m in MEASURES},
    )

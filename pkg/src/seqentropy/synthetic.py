"""Synthetic event sequences for demos and checks."""

from __future__ import annotations

import numpy as np

from .baseline import NodeSelector, random_indices
from .events import EventSequence


def _labels(n_nodes):
    width = len(str(n_nodes - 1))
    return [f"n{i:0{width}d}" for i in range(n_nodes)]


def _from_indices(s, r, n_nodes):
    # re-intern so label order is first-appearance order
    labels = _labels(n_nodes)
    return EventSequence.from_events(
        (labels[a], labels[b], t) for t, (a, b) in enumerate(zip(s.tolist(), r.tolist())))


def uniform_sequence(n_nodes: int, n_events: int, seed=0) -> EventSequence:
    """Events between uniformly drawn distinct nodes, one per time unit."""
    s, r = random_indices(n_events, NodeSelector("uniform", n_nodes), seed)
    return _from_indices(s, r, n_nodes)


def social_sequence(n_nodes: int, n_events: int, n_pairs: int = 50,
                    p_pairs: float = 0.8, seed=0) -> EventSequence:
    """Mostly-habitual communication.

    A fixed set of ``n_pairs`` directed pairs is drawn once; each event
    uses one of those pairs (uniformly) with probability ``p_pairs`` and
    a uniformly random distinct pair otherwise.
    """
    rng = np.random.default_rng(seed)
    n_possible = n_nodes * (n_nodes - 1)
    if n_pairs > n_possible:
        raise ValueError("more habitual pairs requested than exist")
    flat = rng.choice(n_possible, size=n_pairs, replace=False)
    hs = flat // (n_nodes - 1)
    hr = flat % (n_nodes - 1)
    hr = hr + (hr >= hs)  # skip the diagonal

    s, r = random_indices(n_events, NodeSelector("uniform", n_nodes), rng)
    habitual = rng.random(n_events) < p_pairs
    pick = rng.integers(0, n_pairs, size=n_events)
    s = np.where(habitual, hs[pick], s)
    r = np.where(habitual, hr[pick], r)
    return _from_indices(s, r, n_nodes)

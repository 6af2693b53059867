"""Cumulative entropy of temporal event sequences.

First-order (node), second-order (edge) and third-order (succession)
entropies computed incrementally, compared against timestamp-preserving
randomized ensembles via Z-scores.
"""

__version__ = "0.1.0"

from .events import (Event, EventFormat, EventSequence, ParseError, SegmentSpec,
                     ValidationReport, Violation, parse_events, read_events, segment,
                     validate, write_events)
from .engine import (CountState, EntropySnapshot, batch_entropy, batch_entropy_prefixes,
                     cumulative_entropies, entropy_first, entropy_second, entropy_series,
                     entropy_third, ingest_event, max_entropy, normalized_entropy, snapshot)
from .baseline import (EnsembleStats, NodeSelector, generate_random_sequence, run_ensemble,
                       stride_checkpoints)
from .stats import TrendFit, ZScoreSeries, linear_trend, zscore, zscore_series

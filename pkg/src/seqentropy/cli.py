"""Command line interface.

Subcommands::

    seqentropy analyze  --input events.csv --out series.csv
    seqentropy baseline --input events.csv --replicas 100 --seed 7 --out stats.csv
    seqentropy zscore   --input events.csv --replicas 100 --seed 7 --out z.csv
    seqentropy zscore   --real series.csv --stats stats.csv --out z.csv
    seqentropy validate --input events.csv
    seqentropy segment  --input events.csv --segments 0,86400,172800 --out parts/

Every file-producing run writes ``<out>.manifest.json`` (``manifest.json``
inside the directory for ``segment``) with the configuration, the master
seed and SHA-256 digests of inputs and outputs.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys

import numpy as np

from . import __version__
from .baseline import MEASURES, SELECTORS, run_ensemble, stride_checkpoints
from .engine import ROLES, entropy_series
from .events import (EventFormat, ParseError, SegmentSpec, read_events, segment,
                     validate, write_events)
from .stats import linear_trend, zscore

ANALYZE_COLUMNS = (
    ["segment", "event_index", "timestamp", "N"]
    + [f"S{o}" for o in (1, 2, 3)]
    + [f"S{o}_max" for o in (1, 2, 3)]
    + [f"S{o}_norm" for o in (1, 2, 3)]
    + [f"S{o}_degenerate" for o in (1, 2, 3)]
)
BASELINE_COLUMNS = ["segment", "event_index", "timestamp"] + [
    f"{m}_{stat}" for m in MEASURES for stat in ("mean", "std")]
ZSCORE_COLUMNS = ["segment", "event_index", "timestamp"] + [f"Z_{m}" for m in MEASURES]
TREND_COLUMNS = [f"Z_{m}_{suffix}" for m in MEASURES for suffix in ("trend", "trend_resid_std")]

# settings that do not change output bytes stay out of the manifest
_NOT_IN_MANIFEST = {"func", "workers"}


class CliError(Exception):
    pass


# ---------------------------------------------------------------------------
# output helpers
# ---------------------------------------------------------------------------

def _fmt(value):
    """Cell text: 9 significant digits for floats, ``null`` for missing/NaN."""
    if value is None:
        return "null"
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    value = float(value)
    if math.isnan(value):
        return "null"
    return format(value, ".9g")


def _json_value(value):
    text = _fmt(value)
    if text == "null":
        return None
    if isinstance(value, (bool, np.bool_, int, np.integer)):
        return int(text)
    return float(text)


def write_table(path, rows, columns, emit="csv"):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        if emit == "csv":
            fh.write(",".join(columns) + "\n")
            for row in rows:
                fh.write(",".join(_fmt(row.get(c)) for c in columns) + "\n")
        elif emit == "jsonl":
            for row in rows:
                obj = {c: _json_value(row.get(c)) for c in columns}
                fh.write(json.dumps(obj, separators=(",", ":")) + "\n")
        else:
            raise CliError(f"unknown output format {emit!r}")


def read_table(path):
    """Read a table written by :func:`write_table` (CSV or JSON lines)."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    lines = [ln for ln in text.split("\n") if ln.strip()]
    if not lines:
        return []
    if lines[0].lstrip().startswith("{"):
        return [json.loads(ln) for ln in lines]
    header = lines[0].split(",")
    rows = []
    for ln in lines[1:]:
        cells = ln.split(",")
        rows.append({c: _parse_cell(v) for c, v in zip(header, cells)})
    return rows


def _parse_cell(text):
    if text == "null":
        return None
    try:
        return int(text)
    except ValueError:
        return float(text)


def _sha256(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def write_manifest(path, args, inputs, outputs, seeded=True):
    config = {k: v for k, v in sorted(vars(args).items()) if k not in _NOT_IN_MANIFEST}
    manifest = {
        "tool": "seqentropy",
        "version": __version__,
        "command": args.command,
        "config": config,
        "master_seed": getattr(args, "seed", None) if seeded else None,
        "inputs": {p: _sha256(p) for p in inputs},
        "outputs": {p: _sha256(p) for p in outputs},
    }
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


# ---------------------------------------------------------------------------
# pipeline pieces
# ---------------------------------------------------------------------------

def _load(args, strict=True):
    fmt = EventFormat.from_string(args.format)
    if args.sort or args.symmetrize:
        fmt = EventFormat(**{**fmt.__dict__, "sort_if_unordered": fmt.sort_if_unordered or args.sort,
                             "symmetrize": fmt.symmetrize or args.symmetrize})
    seq = read_events(args.input, fmt, strict=strict)
    if strict and len(seq) == 0:
        raise CliError(f"{args.input}: no events")
    return seq


def _parts(args, seq):
    if args.segments:
        return list(enumerate(segment(seq, SegmentSpec.parse(args.segments))))
    return [(0, seq)]


def _analyze_rows(parts, role, stride):
    for idx, part in parts:
        if len(part) == 0:
            continue
        for snap in entropy_series(part, role, stride):
            row = snap.as_row()
            row["segment"] = idx
            yield row


def _ensembles(args, parts):
    out = []
    for idx, part in parts:
        if len(part) == 0:
            continue
        if part.n_nodes < 2:
            raise CliError(f"segment {idx}: need at least two distinct nodes for a baseline")
        cp = stride_checkpoints(len(part), args.stride)
        if len(cp) == 0:
            continue
        stats = run_ensemble(part, args.replicas, args.selector, cp, args.seed,
                             args.role, args.workers)
        out.append((idx, stats))
    return out


def _baseline_rows(ensembles):
    for idx, stats in ensembles:
        for row in stats.rows():
            row["segment"] = idx
            yield row


def _key(row):
    return int(row["segment"]), int(row["event_index"])


def _zscore_rows(real_rows, stat_rows, trend=False, trend_x="index"):
    real_rows, stat_rows = list(real_rows), list(stat_rows)
    if [_key(r) for r in real_rows] != [_key(r) for r in stat_rows]:
        raise CliError("checkpoints of the real series and the ensemble statistics do not match")
    rows = []
    for real, st in zip(real_rows, stat_rows):
        row = {"segment": _key(real)[0], "event_index": _key(real)[1],
               "timestamp": real["timestamp"]}
        for m in MEASURES:
            mu, sd = st[f"{m}_mean"], st[f"{m}_std"]
            row[f"Z_{m}"] = zscore(real[m], mu, sd)
        rows.append(row)
    if trend:
        _add_trends(rows, trend_x)
    return rows


def _add_trends(rows, trend_x):
    for seg in sorted({r["segment"] for r in rows}):
        part = [r for r in rows if r["segment"] == seg]
        x = [r["event_index"] if trend_x == "index" else r["timestamp"] for r in part]
        for m in MEASURES:
            y = [r[f"Z_{m}"] for r in part]
            try:
                fit = linear_trend(np.array(y, dtype=float), np.array(x, dtype=float))
            except ValueError:
                fit = None
            for r, xi in zip(part, x):
                r[f"Z_{m}_trend"] = None if fit is None else float(fit(xi))
                r[f"Z_{m}_trend_resid_std"] = None if fit is None else fit.residual_std


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_analyze(args):
    seq = _load(args)
    write_table(args.out, _analyze_rows(_parts(args, seq), args.role, args.stride),
                ANALYZE_COLUMNS, args.emit)
    write_manifest(args.out + ".manifest.json", args, [args.input], [args.out])
    return 0


def cmd_baseline(args):
    seq = _load(args)
    ensembles = _ensembles(args, _parts(args, seq))
    write_table(args.out, _baseline_rows(ensembles), BASELINE_COLUMNS, args.emit)
    write_manifest(args.out + ".manifest.json", args, [args.input], [args.out])
    return 0


def cmd_zscore(args):
    columns = ZSCORE_COLUMNS + (TREND_COLUMNS if args.trend else [])
    if args.input:
        if args.real or args.stats:
            raise CliError("give either --input (single-shot) or --real and --stats")
        seq = _load(args)
        parts = _parts(args, seq)
        real_rows = list(_analyze_rows(parts, args.role, args.stride))
        stat_rows = list(_baseline_rows(_ensembles(args, parts)))
        inputs = [args.input]
    else:
        if not (args.real and args.stats):
            raise CliError("split mode needs both --real and --stats")
        real_rows, stat_rows = read_table(args.real), read_table(args.stats)
        inputs = [args.real, args.stats]
    rows = _zscore_rows(real_rows, stat_rows, args.trend, args.trend_x)
    write_table(args.out, rows, columns, args.emit)
    write_manifest(args.out + ".manifest.json", args, inputs, [args.out],
                   seeded=bool(args.input))
    return 0


def cmd_validate(args):
    seq = _load(args, strict=False)
    report = validate(seq)
    print(f"{args.input}: M={len(seq)} N={seq.n_nodes}")
    for v in report:
        print(f"{v.kind}: {v.detail}")
    print("valid" if report.ok else f"{len(report)} violation(s)")
    return 0 if report.ok else 1


def cmd_segment(args):
    if not args.segments:
        raise CliError("--segments is required")
    seq = _load(args)
    os.makedirs(args.out, exist_ok=True)
    outputs = []
    for idx, part in enumerate(segment(seq, SegmentSpec.parse(args.segments))):
        path = os.path.join(args.out, f"segment_{idx}.csv")
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            write_events(part, fh)
        outputs.append(path)
        print(f"{path}: M={len(part)} N={part.n_nodes}")
    write_manifest(os.path.join(args.out, "manifest.json"), args, [args.input], outputs)
    return 0


# ---------------------------------------------------------------------------

def _positive(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def _replica_count(text):
    value = int(text)
    if value < 2:
        raise argparse.ArgumentTypeError("need at least 2 replicas")
    return value


def _seed(text):
    value = int(text)
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def build_parser():
    parser = argparse.ArgumentParser(
        prog="seqentropy",
        description="Cumulative entropy of temporal event sequences against randomized baselines.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_input=True):
        p.add_argument("--input", required=needs_input, help="delimited event file")
        p.add_argument("--format", default="csv",
                       help="preset (csv, tsv, sociopatterns) or key=value;... mapping")
        p.add_argument("--sort", action="store_true",
                       help="stable-sort events by timestamp when the file is unordered")
        p.add_argument("--symmetrize", action="store_true",
                       help="add the reverse of every contact")
        p.add_argument("--segments", help="comma-separated boundaries t0,t1,...")

    def output(p):
        p.add_argument("--out", required=True, help="output path")
        p.add_argument("--emit", choices=("csv", "jsonl"), default="csv")

    def series(p):
        p.add_argument("--role", choices=ROLES, default="sender",
                       help="node role for the first-order entropy")
        p.add_argument("--stride", type=_positive, default=1, help="checkpoint every n events")

    def ensemble(p):
        p.add_argument("--replicas", type=_replica_count, default=100)
        p.add_argument("--selector", choices=SELECTORS, default="uniform")
        p.add_argument("--seed", type=_seed, default=0, help="master seed")
        p.add_argument("--workers", type=_positive, default=1)

    p = sub.add_parser("analyze", help="entropy series of the real sequence")
    common(p); series(p); output(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("baseline", help="ensemble statistics of randomized replicas")
    common(p); series(p); ensemble(p); output(p)
    p.set_defaults(func=cmd_baseline)

    p = sub.add_parser("zscore", help="Z-scores of the real series against the baseline")
    common(p, needs_input=False); series(p); ensemble(p); output(p)
    p.add_argument("--real", help="output of analyze (split mode)")
    p.add_argument("--stats", help="output of baseline (split mode)")
    p.add_argument("--trend", action="store_true", help="add least-squares trend columns")
    p.add_argument("--trend-x", choices=("index", "timestamp"), default="index")
    p.set_defaults(func=cmd_zscore)

    p = sub.add_parser("validate", help="report ordering and self-loop violations")
    common(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("segment", help="split the input into per-interval files")
    common(p)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_segment)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CliError, ParseError, ValueError, OSError) as exc:
        print(f"seqentropy {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

"""Writers for the CSV, JSON and GraphML outputs.

Every file starts with a ``#`` metadata line (JSON has a ``meta`` key, GraphML
a ``meta`` graph attribute) recording package version, config hash and seed.
"""
from __future__ import annotations

import csv
import hashlib
import io
import json
from typing import IO, Mapping, Sequence

import networkx as nx
import numpy as np

from . import __version__


def config_hash(config: Mapping) -> str:
    blob = json.dumps(config, sort_keys=True, default=str, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def metadata(config: Mapping | None = None, seed=None, **extra) -> dict:
    meta = {"tool": "corrnet", "version": __version__,
            "config_hash": config_hash(config or {}), "seed": seed}
    meta.update(extra)
    return meta


def metadata_line(meta: Mapping) -> str:
    return "# " + " ".join(f"{k}={v}" for k, v in meta.items()) + "\n"


def write_csv(stream: IO[str], header: Sequence[str], rows, meta: Mapping | None = None):
    if meta is not None:
        stream.write(metadata_line(meta))
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)


def write_matrix(stream: IO[str], symbols: Sequence[str], matrix: np.ndarray,
                 meta: Mapping | None = None):
    """Symbol header row, then N rows of N values with 12 significant digits."""
    rows = ([f"{v:.12g}" for v in row] for row in np.asarray(matrix).tolist())
    write_csv(stream, list(symbols), rows, meta)


def read_matrix(stream: IO[str] | str) -> tuple[list[str], np.ndarray]:
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    lines = [ln for ln in stream if not ln.startswith("#") and ln.strip()]
    rows = list(csv.reader(lines))
    return rows[0], np.array(rows[1:], dtype=float)


def write_edge_list(stream: IO[str], edges, meta: Mapping | None = None):
    """``src,dst,distance`` rows from ``(a, b, d)`` triples."""
    write_csv(stream, ["src", "dst", "distance"],
              ([a, b, f"{d:.12g}"] for a, b, d in edges), meta)


def write_graphml(path_or_stream, nodes: Sequence[str], edges,
                  labels: Mapping[str, str] | None = None, meta: Mapping | None = None):
    g = nx.Graph()
    if meta is not None:
        g.graph["meta"] = json.dumps(dict(meta), sort_keys=True, default=str)
    for s in nodes:
        if labels is not None and s in labels:
            g.add_node(s, sector=labels[s])
        else:
            g.add_node(s)
    for a, b, d in edges:
        g.add_edge(a, b, distance=float(d))
    nx.write_graphml(g, path_or_stream)


def write_json(stream: IO[str], obj, meta: Mapping | None = None):
    if meta is not None:
        obj = {"meta": dict(meta), **obj}
    json.dump(obj, stream, indent=2, sort_keys=False)
    stream.write("\n")


def write_labels(stream: IO[str], labels: Mapping[str, str], meta: Mapping | None = None):
    write_csv(stream, ["symbol", "label"], sorted(labels.items()), meta)


def write_panel(stream: IO[str], panel, meta: Mapping | None = None):
    """Canonical wide CSV; prices use ``repr`` so they read back bit-exactly."""
    rows = ([d.isoformat()] + [repr(v) for v in row]
            for d, row in zip(panel.dates, panel.prices.tolist()))
    write_csv(stream, ["date", *panel.symbols], rows, meta)

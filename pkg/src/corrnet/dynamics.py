"""Windowed networks and single/multi-step link similarity over time."""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import AbstractSet, Sequence

import numpy as np

from .errors import EmptyGraph, InputError, InsufficientHistory, TooFewRows
from .filtration import FilteredGraph, RemovalMode, build_graph, filter_links
from .panel import PricePanel, distance_matrix

Edge = frozenset


def parse_scheme(scheme) -> int | str:
    """``"year"`` (calendar years) or a positive row count (``250`` / ``"fixed:250"``)."""
    if isinstance(scheme, int):
        length = scheme
    else:
        text = str(scheme).strip().lower()
        if text in ("year", "calendar-year", "annual"):
            return "year"
        text = text.removeprefix("fixed:")
        try:
            length = int(text)
        except ValueError:
            raise InputError(f"unknown window scheme {scheme!r}") from None
    if length < 3:
        raise InputError("fixed windows need at least 3 rows")
    return length


def window_panel(panel: PricePanel, scheme="year") -> list[tuple[str, PricePanel]]:
    """Split a panel into consecutive non-overlapping ``(label, panel)`` windows.

    Calendar-year windows are labelled by year; fixed-length windows by their
    first and last date, with a trailing partial window dropped.
    """
    scheme = parse_scheme(scheme)
    bounds = []
    if scheme == "year":
        years = [d.year for d in panel.dates]
        start = 0
        for t in range(1, len(years) + 1):
            if t == len(years) or years[t] != years[start]:
                bounds.append((str(years[start]), start, t))
                start = t
    else:
        for start in range(0, panel.n_rows - scheme + 1, scheme):
            stop = start + scheme
            label = f"{panel.dates[start].isoformat()}/{panel.dates[stop - 1].isoformat()}"
            bounds.append((label, start, stop))
    for label, start, stop in bounds:
        if stop - start < 3:
            raise TooFewRows(f"window {label} has {stop - start} rows; need at least 3")
    return [(label, panel.subset_rows(start, stop)) for label, start, stop in bounds]


@dataclass(frozen=True)
class WindowedNetworkSeries:
    labels: tuple[str, ...]
    graphs: tuple[FilteredGraph, ...]
    mode: RemovalMode
    q: float

    @property
    def edge_sets(self) -> list[set[Edge]]:
        return [g.edge_set() for g in self.graphs]

    @property
    def universe(self) -> tuple[str, ...]:
        seen = {}
        for g in self.graphs:
            for s in g.symbols:
                seen.setdefault(s, None)
        return tuple(seen)

    def __len__(self):
        return len(self.graphs)


def build_series(panel: PricePanel, mode: RemovalMode, q: float, scheme="year", *,
                 lag: int = 1, threads: int = 1) -> WindowedNetworkSeries:
    """One filtered network per window, each from that window's own correlations."""
    windows = window_panel(panel, scheme)

    def one(win):
        return filter_links(build_graph(distance_matrix(win, lag)), mode, q)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            graphs = list(pool.map(one, [w for _, w in windows]))
    else:
        graphs = [one(w) for _, w in windows]
    return WindowedNetworkSeries(tuple(l for l, _ in windows), tuple(graphs), mode, q)


def single_step_similarity(current: AbstractSet, previous: AbstractSet) -> float:
    """Fraction of the current edges that were also present one step earlier."""
    if not current:
        raise EmptyGraph("current edge set is empty")
    return len(set(current) & set(previous)) / len(current)


def _edge_sets(series):
    if isinstance(series, WindowedNetworkSeries):
        return series.edge_sets
    return [set(e) for e in series]


def multi_step_similarity(series, t: int, tau: int) -> float:
    """Fraction of edges of window ``t`` present in every window ``t - tau .. t``.

    ``series`` is a :class:`WindowedNetworkSeries` or a sequence of edge sets;
    ``t`` is a 0-based window index.
    """
    sets = _edge_sets(series)
    if tau < 1:
        raise InputError("tau must be >= 1")
    if not 0 <= t < len(sets):
        raise InputError(f"window index {t} out of range")
    if t - tau < 0:
        raise InsufficientHistory(f"window {t} has only {t} earlier windows; tau={tau}")
    current = sets[t]
    if not current:
        raise EmptyGraph(f"window {t} has no edges")
    alive = set(current)
    for back in range(1, tau + 1):
        alive &= sets[t - back]
    return len(alive) / len(current)


@dataclass(frozen=True)
class SimilarityReport:
    labels: tuple[str, ...]
    edge_counts: tuple[int, ...]
    single_step: tuple[float, ...]
    multi_step: np.ndarray
    mode: str
    q: float

    def rows(self) -> list[list[str]]:
        """CSV rows ``t_label,tau,similarity,mode,q``; the ``tau=0`` row holds ``|E(t)|``."""
        out = []
        q = f"{self.q:.10g}"
        for t, label in enumerate(self.labels):
            out.append([label, "0", str(self.edge_counts[t]), self.mode, q])
            for tau in range(1, self.multi_step.shape[1] + 1):
                if tau > t:
                    break
                v = self.multi_step[t, tau - 1]
                out.append([label, str(tau), "" if math.isnan(v) else f"{v:.12g}",
                            self.mode, q])
        return out


def similarity_report(series: WindowedNetworkSeries, tau_max: int = 1) -> SimilarityReport:
    if tau_max < 1:
        raise InputError("tau_max must be >= 1")
    sets = series.edge_sets
    n = len(sets)
    multi = np.full((n, tau_max), math.nan)
    for t in range(n):
        if not sets[t]:
            continue
        for tau in range(1, min(tau_max, t) + 1):
            multi[t, tau - 1] = multi_step_similarity(sets, t, tau)
    single = tuple(float(multi[t, 0]) for t in range(1, n))
    return SimilarityReport(series.labels, tuple(len(s) for s in sets), single, multi,
                            series.mode.label, series.q)

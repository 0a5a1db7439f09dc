"""Complete market graph, link removal by correlation strength, and cluster diagnostics.

Removal modes:

* ``WeakFirst``   -- drop the largest distances first (weakest correlations).
* ``StrongFirst`` -- drop the smallest distances first (strongest correlations).
* ``Random(seed)`` -- drop edges in a seeded uniform random order.

Removing a fraction ``q`` of the ``M`` edges always removes ``floor(q * M)`` of
them, and nodes left with no edges are not part of the filtered network.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from ._unionfind import UnionFind
from .errors import EmptyGraph, InputError, InvalidFraction
from .panel import DistanceMatrix

PRNG_NAME = f"numpy.random.PCG64/Generator.permutation (numpy {np.__version__})"


@dataclass(frozen=True)
class RemovalMode:
    kind: str
    seed: int | None = None

    def __post_init__(self):
        if self.kind not in ("weak", "strong", "random"):
            raise InputError(f"unknown removal mode {self.kind!r}")
        if self.kind == "random":
            if self.seed is None or not 0 <= int(self.seed) < 2**64:
                raise InputError("random removal needs a 64-bit seed")
        elif self.seed is not None:
            raise InputError(f"{self.kind} removal takes no seed")

    @property
    def label(self) -> str:
        return self.kind

    @classmethod
    def parse(cls, text: str, seed: int | None = None) -> "RemovalMode":
        text = text.strip().lower()
        aliases = {"weak": "weak", "weakfirst": "weak", "weak-first": "weak",
                   "strong": "strong", "strongfirst": "strong", "strong-first": "strong",
                   "random": "random"}
        if text not in aliases:
            raise InputError(f"unknown removal mode {text!r}")
        kind = aliases[text]
        return cls(kind, seed if kind == "random" else None)


WeakFirst = RemovalMode("weak")
StrongFirst = RemovalMode("strong")


def Random(seed: int) -> RemovalMode:
    return RemovalMode("random", int(seed))


def _edge_arrays(src, dst, weight):
    src = np.asarray(src, dtype=np.int64)
    dst = np.asarray(dst, dtype=np.int64)
    weight = np.asarray(weight, dtype=float)
    for a in (src, dst, weight):
        a.setflags(write=False)
    return src, dst, weight


def _pairs_to_indices(symbols, pairs):
    index = {s: k for k, s in enumerate(symbols)}
    out = []
    for a, b in pairs:
        a = index[a] if isinstance(a, str) else int(a)
        b = index[b] if isinstance(b, str) else int(b)
        if a == b:
            raise InputError("self-loops are not allowed")
        out.append((min(a, b), max(a, b)))
    if len(set(out)) != len(out):
        raise InputError("duplicate edges")
    return out


class MarketGraph:
    """Weighted undirected graph over ``symbols``; edges are stored with ``i < j``.

    :func:`build_graph` produces the complete graph from a distance matrix.
    :meth:`from_edges` accepts an arbitrary edge list, e.g. a random graph used
    as the base for a percolation experiment.
    """

    def __init__(self, symbols, src, dst, weight):
        self.symbols = tuple(symbols)
        self.src, self.dst, self.weight = _edge_arrays(src, dst, weight)

    @classmethod
    def from_edges(cls, symbols, pairs, weights=None):
        symbols = tuple(symbols)
        idx = _pairs_to_indices(symbols, pairs)
        if weights is None:
            weights = np.ones(len(idx))
        src = [a for a, _ in idx]
        dst = [b for _, b in idx]
        return cls(symbols, src, dst, weights)

    @property
    def n_nodes(self) -> int:
        return len(self.symbols)

    @property
    def n_edges(self) -> int:
        return len(self.src)

    @property
    def edges(self) -> list[tuple[int, int, float]]:
        return list(zip(self.src.tolist(), self.dst.tolist(), self.weight.tolist()))

    def __repr__(self):
        return f"MarketGraph(n_nodes={self.n_nodes}, n_edges={self.n_edges})"


class FilteredGraph:
    """Edges surviving the removal of a fraction ``q`` under ``mode``.

    ``connected_nodes`` holds the symbols with at least one surviving edge, in
    the parent's symbol order.
    """

    def __init__(self, symbols, src, dst, weight, q=None, mode=None):
        self.symbols = tuple(symbols)
        self.src, self.dst, self.weight = _edge_arrays(src, dst, weight)
        self.q = q
        self.mode = mode
        deg = np.bincount(self.src, minlength=len(self.symbols)) \
            + np.bincount(self.dst, minlength=len(self.symbols))
        deg.setflags(write=False)
        self._degrees = deg
        self.connected_indices = tuple(np.flatnonzero(deg).tolist())
        self.connected_nodes = tuple(self.symbols[i] for i in self.connected_indices)
        self._adj = None

    @classmethod
    def from_edges(cls, symbols, pairs, weights=None):
        """Ad-hoc graph (no parent filtration) from symbol or index pairs."""
        g = MarketGraph.from_edges(symbols, pairs, weights)
        return cls(g.symbols, g.src, g.dst, g.weight)

    @property
    def n_edges(self) -> int:
        return len(self.src)

    @property
    def n_connected(self) -> int:
        return len(self.connected_indices)

    def degrees(self) -> np.ndarray:
        return self._degrees

    def adjacency(self) -> list[set[int]]:
        if self._adj is None:
            adj = [set() for _ in self.symbols]
            for a, b in zip(self.src.tolist(), self.dst.tolist()):
                adj[a].add(b)
                adj[b].add(a)
            self._adj = adj
        return self._adj

    def edge_pairs(self) -> list[tuple[str, str]]:
        s = self.symbols
        return [(s[a], s[b]) for a, b in zip(self.src.tolist(), self.dst.tolist())]

    def edge_set(self) -> set[frozenset[str]]:
        return {frozenset(p) for p in self.edge_pairs()}

    def __repr__(self):
        mode = self.mode.label if self.mode else None
        return (f"FilteredGraph(q={self.q}, mode={mode}, n_edges={self.n_edges}, "
                f"n_connected={self.n_connected})")


# -- operations --------------------------------------------------------------

def build_graph(dist: DistanceMatrix) -> MarketGraph:
    """Complete graph with one edge per pair ``i < j``, ordered by ``i`` then ``j``."""
    n = len(dist.symbols)
    src, dst = np.triu_indices(n, 1)
    return MarketGraph(dist.symbols, src, dst, dist.d[src, dst])


def n_removed(q: float, m: int) -> int:
    """``floor(q * m)``, with the product rounded to 6 decimals first so that
    e.g. ``0.29 * 100`` counts as 29 rather than 28."""
    return int(math.floor(round(q * m, 6)))


def _check_q(q):
    if not (0.0 <= q <= 1.0):
        raise InvalidFraction(f"q must lie in [0, 1], got {q!r}")


def removal_order(graph: MarketGraph, mode: RemovalMode) -> np.ndarray:
    """Edge indices in the order they are removed.

    Ties in distance are broken by ``(i, j)`` ascending for both deterministic
    modes.
    """
    if mode.kind == "strong":
        return np.lexsort((graph.dst, graph.src, graph.weight))
    if mode.kind == "weak":
        return np.lexsort((graph.dst, graph.src, -graph.weight))
    rng = np.random.Generator(np.random.PCG64(mode.seed))
    return rng.permutation(graph.n_edges)


def filter_links(graph: MarketGraph, mode: RemovalMode, q: float,
                 order: np.ndarray | None = None) -> FilteredGraph:
    """Remove the first ``floor(q * M)`` edges of :func:`removal_order`.

    A precomputed ``order`` may be passed to avoid re-sorting across many ``q``.
    """
    _check_q(q)
    if order is None:
        order = removal_order(graph, mode)
    keep = np.sort(order[n_removed(q, graph.n_edges):])
    return FilteredGraph(graph.symbols, graph.src[keep], graph.dst[keep],
                         graph.weight[keep], q, mode)


def components(fg: FilteredGraph) -> list[tuple[str, ...]]:
    """Connected clusters of the connected nodes, largest first.

    Equal sizes are ordered by their smallest member symbol; members are sorted.
    """
    uf = UnionFind(len(fg.symbols))
    for a, b in zip(fg.src.tolist(), fg.dst.tolist()):
        uf.union(a, b)
    clusters = {}
    for i in fg.connected_indices:
        clusters.setdefault(uf.find(i), []).append(fg.symbols[i])
    out = [tuple(sorted(c)) for c in clusters.values()]
    out.sort(key=lambda c: (-len(c), c[0]))
    return out


def kappa(fg: FilteredGraph) -> float:
    """``<k^2> / <k>`` over connected nodes."""
    if fg.n_edges == 0:
        raise EmptyGraph("no edges survive; kappa is undefined")
    k = fg.degrees()[list(fg.connected_indices)].astype(float)
    return float((k * k).mean() / k.mean())


# -- scans -------------------------------------------------------------------

@dataclass(frozen=True)
class ScanRecord:
    mode: str
    q: float
    n_connected: int
    lcc_size: int
    slcc_size: int
    kappa: float
    clustering: float
    n_cliques: int | None = None
    max_clique: int | None = None
    rel_cliques: float | None = None
    rel_max: float | None = None


@dataclass
class ScanTable:
    records: list[ScanRecord]
    prng: str = PRNG_NAME
    meta: dict = field(default_factory=dict)

    BASE_COLUMNS = ("mode", "q", "n_connected", "lcc", "slcc", "kappa", "clustering")
    CLIQUE_COLUMNS = ("n_cliques", "max_clique", "rel_cliques", "rel_max")

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def select(self, mode: str) -> list[ScanRecord]:
        return [r for r in self.records if r.mode == mode]

    def rows(self, with_cliques: bool = False) -> list[list[str]]:
        def num(v, fmt="{:.12g}"):
            if v is None or (isinstance(v, float) and math.isnan(v)):
                return ""
            return fmt.format(v)

        out = []
        for r in self.records:
            row = [r.mode, num(r.q, "{:.10g}"), str(r.n_connected), str(r.lcc_size),
                   str(r.slcc_size), num(r.kappa), num(r.clustering)]
            if with_cliques:
                row += [num(r.n_cliques, "{}"), num(r.max_clique, "{}"),
                        num(r.rel_cliques), num(r.rel_max)]
            out.append(row)
        return out

    def header(self, with_cliques: bool = False) -> list[str]:
        cols = list(self.BASE_COLUMNS)
        if with_cliques:
            cols += self.CLIQUE_COLUMNS
        return cols


def _scan_one(graph: MarketGraph, mode: RemovalMode, q_grid: Sequence[float],
              with_clustering: bool) -> list[ScanRecord]:
    # Surviving edges at q are order[n_removed(q):], so sweep q downwards and
    # add edges back one at a time.
    n, m = graph.n_nodes, graph.n_edges
    order = removal_order(graph, mode)
    src, dst = graph.src.tolist(), graph.dst.tolist()
    uf = UnionFind(n)
    deg = np.zeros(n, dtype=np.int64)
    tri = np.zeros(n, dtype=np.int64)
    adj = np.zeros((n, n), dtype=bool) if with_clustering else None
    cursor = m
    records = {}
    for q in sorted(set(q_grid), reverse=True):
        target = n_removed(q, m)
        while cursor > target:
            cursor -= 1
            e = order[cursor]
            u, v = src[e], dst[e]
            uf.union(u, v)
            deg[u] += 1
            deg[v] += 1
            if with_clustering:
                common = adj[u] & adj[v]
                c = int(common.sum())
                if c:
                    tri += common
                    tri[u] += c
                    tri[v] += c
                adj[u, v] = adj[v, u] = True
        records[q] = _snapshot(mode.label, q, uf, deg, tri, with_clustering)
    return [records[q] for q in q_grid]


def _snapshot(label, q, uf, deg, tri, with_clustering):
    conn = deg > 0
    n_conn = int(conn.sum())
    sizes = uf.root_sizes()
    sizes = np.sort(sizes[sizes >= 2])[::-1]
    lcc = int(sizes[0]) if len(sizes) else 0
    slcc = int(sizes[1]) if len(sizes) > 1 else 0
    if n_conn == 0:
        return ScanRecord(label, q, 0, 0, 0, math.nan, math.nan)
    k = deg[conn].astype(float)
    kap = float((k * k).mean() / k.mean())
    clus = math.nan
    if with_clustering:
        kk = deg[conn]
        pairs = kk * (kk - 1) / 2.0
        ci = np.where(kk >= 2, tri[conn] / np.where(pairs > 0, pairs, 1.0), 0.0)
        clus = float(ci.mean())
    return ScanRecord(label, q, n_conn, lcc, slcc, kap, clus)


def scan(graph: MarketGraph, modes: Iterable[RemovalMode], q_grid: Sequence[float], *,
         clustering: bool = True, threads: int = 1) -> ScanTable:
    """One :class:`ScanRecord` per ``(mode, q)``, ordered by mode then ``q``.

    Each mode is computed incrementally; the records equal what
    :func:`filter_links` followed by :func:`components`, :func:`kappa` and the
    clustering coefficient would give at every grid point.
    """
    q_grid = [float(q) for q in q_grid]
    for q in q_grid:
        _check_q(q)
    if any(b < a for a, b in zip(q_grid, q_grid[1:])):
        raise InputError("q grid must be sorted ascending")
    modes = list(modes)
    if threads > 1 and len(modes) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda md: _scan_one(graph, md, q_grid, clustering), modes))
    else:
        parts = [_scan_one(graph, md, q_grid, clustering) for md in modes]
    return ScanTable([r for part in parts for r in part])


def parse_q_grid(text: str) -> list[float]:
    """Parse ``start:end:step`` (end included when reachable) or a comma list."""
    text = text.strip()
    if ":" in text:
        try:
            start, end, step = (float(x) for x in text.split(":"))
        except ValueError:
            raise InputError(f"bad q grid {text!r}; expected start:end:step") from None
        if step <= 0:
            raise InputError("q grid step must be positive")
        if end < start:
            raise InputError(f"q grid {text!r} is not ascending")
        count = int(math.floor((end - start) / step + 1e-9)) + 1
        grid = [round(start + i * step, 12) for i in range(count)]
    else:
        try:
            grid = [float(x) for x in text.split(",") if x.strip()]
        except ValueError:
            raise InputError(f"bad q grid {text!r}") from None
        if any(b < a for a, b in zip(grid, grid[1:])):
            raise InputError(f"q grid {text!r} is not sorted ascending")
    for q in grid:
        _check_q(q)
    return grid

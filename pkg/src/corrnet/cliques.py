"""Clustering coefficient, maximal clique enumeration and relative clique metrics."""
from __future__ import annotations

import hashlib
import time
from dataclasses import dataclass, field

from .errors import BudgetExceeded, EmptyGraph, InputError
from .filtration import FilteredGraph


@dataclass(frozen=True)
class ResourceLimits:
    """Bounds for exact clique enumeration. ``max_seconds=None`` disables the clock."""

    max_steps: int = 10**7
    max_seconds: float | None = None


@dataclass(frozen=True)
class CliqueSet:
    cliques: tuple[tuple[str, ...], ...]
    fingerprint: str
    stats: dict = field(default_factory=dict, compare=False)

    def __len__(self):
        return len(self.cliques)

    def __iter__(self):
        return iter(self.cliques)

    def as_sets(self) -> set[frozenset[str]]:
        return {frozenset(c) for c in self.cliques}


@dataclass(frozen=True)
class CliqueMetrics:
    n_cliques: int
    max_clique_size: int
    n_nodes: int
    relative_count: float
    relative_max: float
    clustering: float


def graph_fingerprint(fg: FilteredGraph) -> str:
    h = hashlib.sha256()
    h.update("\x1f".join(fg.symbols).encode())
    for a, b in zip(fg.src.tolist(), fg.dst.tolist()):
        h.update(f"|{a},{b}".encode())
    return h.hexdigest()[:16]


def clustering_coefficient(fg: FilteredGraph) -> float:
    """Mean local clustering over connected nodes; degree-1 nodes count as 0."""
    if fg.n_edges == 0:
        raise EmptyGraph("no edges survive; clustering is undefined")
    adj = fg.adjacency()
    total = 0.0
    for i in fg.connected_indices:
        nbrs = adj[i]
        k = len(nbrs)
        if k < 2:
            continue
        links = sum(len(adj[u] & nbrs) for u in nbrs) // 2
        total += links / (k * (k - 1) / 2)
    return total / fg.n_connected


def _bits(indices):
    m = 0
    for i in indices:
        m |= 1 << i
    return m


def _members(mask):
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def maximal_cliques(fg: FilteredGraph, limits: ResourceLimits | None = None) -> CliqueSet:
    """All maximal cliques of the connected part of ``fg``, exactly.

    Bron-Kerbosch with Tomita pivoting over integer bitsets, driven by an
    explicit stack. Every search-tree node costs one step; running past
    ``limits`` raises :class:`BudgetExceeded`.

    Output order: larger cliques first, then lexicographic by sorted symbols.
    """
    limits = limits or ResourceLimits()
    adj = fg.adjacency()
    nbr = [_bits(a) for a in adj]
    found = []
    steps = 0
    started = time.perf_counter()

    def pivot_candidates(p, x):
        best, best_count = 0, -1
        for u in _members(p | x):
            c = (p & nbr[u]).bit_count()
            if c > best_count:
                best, best_count = u, c
        return p & ~nbr[best]

    def over_budget():
        if steps > limits.max_steps:
            return True
        return (limits.max_seconds is not None and steps % 4096 == 0
                and time.perf_counter() - started > limits.max_seconds)

    p0 = _bits(fg.connected_indices)
    stack = []
    if p0:
        stack.append([[], p0, 0, pivot_candidates(p0, 0)])
    while stack:
        frame = stack[-1]
        r, p, x, cand = frame
        if not cand:
            stack.pop()
            continue
        low = cand & -cand
        v = low.bit_length() - 1
        frame[3] = cand ^ low
        frame[1] = p & ~low
        frame[2] = x | low
        steps += 1
        if over_budget():
            raise BudgetExceeded({"steps": steps, "cliques_found": len(found),
                                  "depth": len(stack),
                                  "elapsed_s": round(time.perf_counter() - started, 3)})
        p2, x2 = p & nbr[v], x & nbr[v]
        if not p2:
            if not x2:
                found.append(r + [v])
            continue
        stack.append([r + [v], p2, x2, pivot_candidates(p2, x2)])

    syms = fg.symbols
    cliques = [tuple(sorted(syms[i] for i in c)) for c in found]
    cliques.sort(key=lambda c: (-len(c), c))
    return CliqueSet(tuple(cliques), graph_fingerprint(fg),
                     {"steps": steps, "elapsed_s": round(time.perf_counter() - started, 6)})


def clique_metrics(fg: FilteredGraph, cliques: CliqueSet | None = None,
                   limits: ResourceLimits | None = None) -> CliqueMetrics:
    """Maximal-clique count and largest clique size, absolute and per connected node."""
    if fg.n_edges == 0:
        raise EmptyGraph("no edges survive; clique metrics are undefined")
    if cliques is None:
        cliques = maximal_cliques(fg, limits)
    elif cliques.fingerprint != graph_fingerprint(fg):
        raise InputError("clique set was computed from a different graph")
    n_nodes = fg.n_connected
    n_cl = len(cliques)
    max_cl = max(len(c) for c in cliques)
    return CliqueMetrics(n_cl, max_cl, n_nodes, n_cl / n_nodes, max_cl / n_nodes,
                         clustering_coefficient(fg))


def cliques_to_json(cliques: CliqueSet) -> list[list[str]]:
    return [list(c) for c in cliques]

"""Minimum spanning tree over pairwise distances (Kruskal)."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from ._unionfind import UnionFind
from .errors import InputError
from .filtration import FilteredGraph, MarketGraph
from .panel import DistanceMatrix


@dataclass(frozen=True)
class SpanningTree:
    nodes: tuple[str, ...]
    edges: tuple[tuple[str, str, float], ...]
    total_weight: float

    def edge_set(self) -> set[frozenset[str]]:
        return {frozenset((a, b)) for a, b, _ in self.edges}


def minimum_spanning_tree(dist: DistanceMatrix | MarketGraph,
                          node_subset: Iterable[str] | None = None) -> SpanningTree:
    """Kruskal's algorithm with edges taken in ascending ``(d, i, j)`` order.

    With ``node_subset`` the tree spans only those symbols, using their full
    pairwise distances (for a :class:`MarketGraph`, the edges among them).
    ``total_weight`` is an exactly rounded sum, independent of edge order.
    """
    if isinstance(dist, DistanceMatrix):
        n = len(dist.symbols)
        src, dst = np.triu_indices(n, 1)
        graph = MarketGraph(dist.symbols, src, dst, dist.d[src, dst])
    else:
        graph = dist
    symbols = graph.symbols

    if node_subset is None:
        keep = np.ones(len(symbols), dtype=bool)
    else:
        wanted = set(node_subset)
        unknown = wanted.difference(symbols)
        if unknown:
            raise InputError("unknown symbols: " + ", ".join(sorted(unknown)))
        keep = np.array([s in wanted for s in symbols])
    nodes = [i for i in range(len(symbols)) if keep[i]]
    if len(nodes) < 2:
        raise InputError("a spanning tree needs at least 2 nodes")

    mask = keep[graph.src] & keep[graph.dst]
    src, dst, w = graph.src[mask], graph.dst[mask], graph.weight[mask]
    order = np.lexsort((dst, src, w))

    uf = UnionFind(len(symbols))
    tree = []
    for e in order.tolist():
        a, b = int(src[e]), int(dst[e])
        if uf.union(a, b):
            tree.append((symbols[a], symbols[b], float(w[e])))
            if len(tree) == len(nodes) - 1:
                break
    if len(tree) != len(nodes) - 1:
        raise InputError("graph restricted to the requested nodes is not connected")
    return SpanningTree(tuple(symbols[i] for i in nodes), tuple(tree),
                        math.fsum(d for _, _, d in tree))


def mst_of_connected(dist: DistanceMatrix, fg: FilteredGraph) -> SpanningTree:
    """Tree over the nodes that keep at least one link in ``fg``."""
    return minimum_spanning_tree(dist, fg.connected_nodes)

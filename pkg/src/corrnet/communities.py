"""k-clique percolation communities and overlap reporting.

A community is the node union of k-cliques that can be chained through pairs
sharing ``k - 1`` nodes. It is computed from maximal cliques: a maximal clique
of size ``s >= k`` stands for all of its k-subsets, and two maximal cliques
belong to the same community iff they share at least ``k - 1`` nodes (directly
or through a chain of such cliques).
"""
from __future__ import annotations

import numbers
from collections import Counter
from dataclasses import dataclass
from typing import Mapping

from ._unionfind import UnionFind
from .cliques import ResourceLimits, maximal_cliques
from .errors import InvalidK, MissingLabel
from .filtration import FilteredGraph


@dataclass(frozen=True)
class CommunityCover:
    k: int
    communities: tuple[tuple[str, ...], ...]
    q: float | None = None

    @property
    def membership(self) -> dict[str, list[int]]:
        out: dict[str, list[int]] = {}
        for idx, comm in enumerate(self.communities):
            for s in comm:
                out.setdefault(s, []).append(idx)
        return out

    def __len__(self):
        return len(self.communities)


@dataclass(frozen=True)
class OverlapReport:
    multi_members: dict[str, list[int]]

    def __contains__(self, symbol):
        return symbol in self.multi_members

    def __len__(self):
        return len(self.multi_members)


def detect_communities(fg: FilteredGraph, k: int,
                       limits: ResourceLimits | None = None) -> CommunityCover:
    if isinstance(k, bool) or not isinstance(k, numbers.Integral) or k < 3:
        raise InvalidK(f"k must be an integer >= 3, got {k!r}")
    k = int(k)
    cliques = [frozenset(c) for c in maximal_cliques(fg, limits) if len(c) >= k]

    # Only cliques sharing a node can overlap, so compare within node buckets.
    by_node: dict[str, list[int]] = {}
    for ci, c in enumerate(cliques):
        for s in c:
            by_node.setdefault(s, []).append(ci)
    uf = UnionFind(len(cliques))
    for members in by_node.values():
        for x, a in enumerate(members):
            for b in members[x + 1:]:
                if uf.find(a) != uf.find(b) and len(cliques[a] & cliques[b]) >= k - 1:
                    uf.union(a, b)

    comms = set()
    for group in uf.groups():
        comms.add(tuple(sorted(frozenset().union(*(cliques[g] for g in group)))))
    ordered = sorted(comms, key=lambda c: (-len(c), c))
    return CommunityCover(k, tuple(ordered), fg.q)


def overlap_report(cover: CommunityCover) -> OverlapReport:
    """Symbols that belong to two or more communities."""
    multi = {s: ids for s, ids in sorted(cover.membership.items()) if len(ids) >= 2}
    return OverlapReport(multi)


def label_purity(cover: CommunityCover, labels: Mapping[str, str]) -> list[float]:
    """Share of the most common label within each community."""
    out = []
    for comm in cover.communities:
        missing = [s for s in comm if s not in labels]
        if missing:
            raise MissingLabel("no sector label for: " + ", ".join(missing))
        counts = Counter(labels[s] for s in comm)
        out.append(max(counts.values()) / len(comm))
    return out


def dominant_labels(cover: CommunityCover, labels: Mapping[str, str]) -> list[str]:
    """Most common label per community (ties go to the smallest label)."""
    out = []
    for comm in cover.communities:
        counts = Counter(labels[s] for s in comm)
        top = max(counts.values())
        out.append(min(lab for lab, c in counts.items() if c == top))
    return out


def cover_to_json(cover: CommunityCover, labels: Mapping[str, str] | None = None) -> dict:
    purity = label_purity(cover, labels) if labels is not None else None
    comms = []
    for idx, comm in enumerate(cover.communities):
        entry = {"id": idx, "symbols": list(comm)}
        if purity is not None:
            entry["purity"] = purity[idx]
        comms.append(entry)
    overlaps = [{"symbol": s, "community_ids": ids}
                for s, ids in overlap_report(cover).multi_members.items()]
    return {"k": cover.k, "q": cover.q, "communities": comms, "overlaps": overlaps}

import io
import math

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import as_filtered, random_graph
from corrnet import errors
from corrnet.cliques import clustering_coefficient
from corrnet.filtration import (
    FilteredGraph,
    MarketGraph,
    Random,
    RemovalMode,
    StrongFirst,
    WeakFirst,
    build_graph,
    components,
    filter_links,
    kappa,
    n_removed,
    parse_q_grid,
    removal_order,
    scan,
)
from corrnet.io import write_edge_list, write_graphml
from corrnet.panel import DistanceMatrix
from oracles import bfs_components

SYM = ("A", "B", "C")


def triangle():
    # AB=0.5, BC=1.0, CA=1.5
    d = np.array([[0, 0.5, 1.5], [0.5, 0, 1.0], [1.5, 1.0, 0]])
    return build_graph(DistanceMatrix(SYM, d))


def random_distance(rng, n):
    a = rng.uniform(0, 2, (n, n))
    d = np.triu(a, 1) + np.triu(a, 1).T
    return DistanceMatrix([f"X{i:03d}" for i in range(n)], d)


def named(graph, order):
    return [graph.symbols[graph.src[e]] + graph.symbols[graph.dst[e]] for e in order]


# -- build_graph ---------------------------------------------------------------

@pytest.mark.parametrize("n, m", [(2, 1), (3, 3), (10, 45), (1062, 563_391)])
def test_edge_count(n, m):
    d = np.ones((n, n)) - np.eye(n)
    g = build_graph(DistanceMatrix([f"s{i}" for i in range(n)], d))
    assert g.n_edges == m
    assert (g.src < g.dst).all()


def test_two_nodes_single_edge():
    g = build_graph(DistanceMatrix(["A", "B"], [[0, 0.7], [0.7, 0]]))
    assert g.edges == [(0, 1, 0.7)]


def test_edge_order_is_i_then_j():
    g = build_graph(DistanceMatrix("ABCD", np.ones((4, 4)) - np.eye(4)))
    assert [(a, b) for a, b, _ in g.edges] == [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]


# -- removal_order ----------------------------------------------------------------

def test_weak_first_order():
    g = triangle()
    assert named(g, removal_order(g, WeakFirst)) == ["AC", "BC", "AB"]


def test_strong_first_order():
    g = triangle()
    assert named(g, removal_order(g, StrongFirst)) == ["AB", "BC", "AC"]


@pytest.mark.parametrize("mode", [StrongFirst, WeakFirst])
def test_ties_broken_lexicographically(mode):
    g = build_graph(DistanceMatrix("ABCD", np.ones((4, 4)) - np.eye(4)))
    assert removal_order(g, mode).tolist() == list(range(6))


def test_random_order_reproducible(rng):
    g = build_graph(random_distance(rng, 15))
    a = removal_order(g, Random(7))
    assert (a == removal_order(g, Random(7))).all()
    assert not (a == removal_order(g, Random(8))).all()
    assert sorted(a.tolist()) == list(range(g.n_edges))


def test_mode_validation():
    with pytest.raises(errors.InputError):
        RemovalMode("random")
    with pytest.raises(errors.InputError):
        RemovalMode("weak", 3)
    with pytest.raises(errors.InputError):
        RemovalMode.parse("sideways")
    assert RemovalMode.parse("Strong-First") == StrongFirst
    assert RemovalMode.parse("random", 5) == Random(5)
    assert Random(2**64 - 1).seed == 2**64 - 1


# -- filter_links -------------------------------------------------------------

def test_weak_first_third_keeps_two_strongest():
    fg = filter_links(triangle(), WeakFirst, 1 / 3)
    assert set(fg.edge_pairs()) == {("A", "B"), ("B", "C")}
    assert fg.connected_nodes == ("A", "B", "C")


def test_q_zero_and_one(rng):
    g = build_graph(random_distance(rng, 8))
    for mode in (WeakFirst, StrongFirst, Random(1)):
        assert filter_links(g, mode, 0.0).n_edges == g.n_edges
        empty = filter_links(g, mode, 1.0)
        assert empty.n_edges == 0 and empty.connected_nodes == ()


def test_q_out_of_range():
    with pytest.raises(errors.InvalidFraction):
        filter_links(triangle(), WeakFirst, 1.2)
    with pytest.raises(errors.InvalidFraction):
        filter_links(triangle(), WeakFirst, -0.1)


def test_floor_count_is_robust_to_float_products():
    assert n_removed(0.29, 100) == 29
    assert n_removed(0.995, 19900) == 19800
    assert n_removed(1 / 3, 3) == 1
    assert n_removed(0.5, 3) == 1


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 25), st.floats(0, 1), st.floats(0, 1),
       st.sampled_from(["weak", "strong", "random"]), st.integers(0, 2**64 - 1))
def test_count_and_nesting(n, q1, q2, kind, seed):
    rng = np.random.default_rng(seed % 1000)
    g = build_graph(random_distance(rng, n))
    mode = RemovalMode(kind, seed if kind == "random" else None)
    q1, q2 = sorted((q1, q2))
    a, b = filter_links(g, mode, q1), filter_links(g, mode, q2)
    m = g.n_edges
    assert a.n_edges == m - math.floor(round(q1 * m, 6))
    assert b.edge_set() <= a.edge_set()
    if n_removed(q2, m) > n_removed(q1, m):
        assert b.n_edges < a.n_edges
    deg = a.degrees()
    assert set(a.connected_nodes) == {a.symbols[i] for i in range(n) if deg[i] > 0}


# -- components / kappa --------------------------------------------------------------

def test_two_disjoint_triangles():
    fg = as_filtered(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
    assert components(fg) == [("v00", "v01", "v02"), ("v03", "v04", "v05")]


def test_path_plus_isolated_node():
    fg = FilteredGraph.from_edges("ABCD", [("A", "B"), ("B", "C")])
    assert components(fg) == [("A", "B", "C")]
    assert "D" not in fg.connected_nodes


def test_components_match_bfs_oracle():
    rng = np.random.default_rng(2024)
    for _ in range(100):
        n = int(rng.integers(2, 13))
        edges = random_graph(rng, n, 0.3)
        fg = as_filtered(n, edges)
        got = {frozenset(int(s[1:]) for s in c) for c in components(fg)}
        assert got == bfs_components(n, edges)
        sizes = [len(c) for c in components(fg)]
        assert sizes == sorted(sizes, reverse=True)
        assert sum(sizes) == fg.n_connected


@pytest.mark.parametrize("edges, expected", [
    ([(0, 1), (1, 2), (0, 2)], 2.0),
    ([(0, 1), (1, 2)], 1.5),
    ([(0, 1), (0, 2), (0, 3)], 2.0),
])
def test_kappa_small_graphs(edges, expected):
    assert kappa(as_filtered(5, edges)) == pytest.approx(expected, rel=1e-15)


@pytest.mark.parametrize("n", [3, 4, 7, 30])
def test_kappa_cycle_is_two(n):
    assert kappa(as_filtered(n, [(i, (i + 1) % n) for i in range(n)])) == 2.0


def test_kappa_empty():
    with pytest.raises(errors.EmptyGraph):
        kappa(as_filtered(3, []))


# -- scan ------------------------------------------------------------------------

def test_scan_endpoints(rng):
    g = build_graph(random_distance(rng, 12))
    for mode in (WeakFirst, StrongFirst, Random(3)):
        t = scan(g, [mode], [0.0, 1.0])
        first, last = t.records
        assert first.lcc_size == 12 and first.clustering == 1.0
        assert last.lcc_size == 0 and last.n_connected == 0 and math.isnan(last.kappa)


def test_scan_equals_independent_filtering(rng):
    g = build_graph(random_distance(rng, 30))
    grid = parse_q_grid("0:1:0.02")
    modes = [WeakFirst, StrongFirst, Random(11)]
    table = scan(g, modes, grid, threads=2)
    assert len(table) == len(modes) * len(grid)
    assert [r.mode for r in table.records[:len(grid)]] == ["weak"] * len(grid)
    for rec in table:
        mode = next(m for m in modes if m.label == rec.mode)
        fg = filter_links(g, mode, rec.q)
        comps = components(fg)
        assert rec.n_connected == fg.n_connected
        assert rec.lcc_size == (len(comps[0]) if comps else 0)
        assert rec.slcc_size == (len(comps[1]) if len(comps) > 1 else 0)
        assert rec.lcc_size >= rec.slcc_size
        assert rec.lcc_size + rec.slcc_size <= rec.n_connected
        if fg.n_edges:
            assert rec.kappa == pytest.approx(kappa(fg), rel=1e-12)
            assert rec.clustering == pytest.approx(clustering_coefficient(fg), abs=1e-12)


def test_scan_rejects_unsorted_grid(rng):
    g = build_graph(random_distance(rng, 5))
    with pytest.raises(errors.InputError):
        scan(g, [WeakFirst], [0.5, 0.1])


def test_scan_on_non_complete_base_graph():
    rng = np.random.default_rng(5)
    edges = random_graph(rng, 40, 0.2)
    base = MarketGraph.from_edges([f"n{i}" for i in range(40)], edges)
    t = scan(base, [Random(9)], [0.0, 0.5])
    ref = nx.Graph(edges)
    assert t.records[0].lcc_size == max(len(c) for c in nx.connected_components(ref))


# -- q grid ------------------------------------------------------------------------

def test_q_grid_parsing():
    assert len(parse_q_grid("0:0.999:0.001")) == 1000
    assert parse_q_grid("0:1:0.25") == [0, 0.25, 0.5, 0.75, 1.0]
    assert parse_q_grid("0:0.9:0.4") == [0, 0.4, 0.8]
    assert parse_q_grid("0.1,0.5,0.9") == [0.1, 0.5, 0.9]
    for bad in ("0.9:0.5:0.1", "0.5,0.1", "0:1:0", "a:b:c", "0:1.5:0.5"):
        with pytest.raises(errors.InputError):
            parse_q_grid(bad)


# -- export ------------------------------------------------------------------------

def test_edge_list_and_graphml(tmp_path):
    fg = filter_links(triangle(), WeakFirst, 1 / 3)
    edges = [(fg.symbols[a], fg.symbols[b], d)
             for a, b, d in zip(fg.src.tolist(), fg.dst.tolist(), fg.weight.tolist())]
    buf = io.StringIO()
    write_edge_list(buf, edges)
    assert buf.getvalue().splitlines() == ["src,dst,distance", "A,B,0.5", "B,C,1"]
    path = tmp_path / "g.graphml"
    write_graphml(path, fg.connected_nodes, edges, {"A": "x", "B": "y", "C": "x"},
                  {"seed": 0})
    g = nx.read_graphml(path)
    assert g.nodes["A"]["sector"] == "x"
    assert g.edges["A", "B"]["distance"] == 0.5
    assert "meta" in g.graph

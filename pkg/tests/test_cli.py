import csv
import json

import networkx as nx
import pytest

from corrnet.cli import main


@pytest.fixture(scope="module")
def market(tmp_path_factory):
    d = tmp_path_factory.mktemp("market")
    prices, labels = d / "prices.csv", d / "labels.csv"
    assert main(["synth", "--n-stocks", "40", "--n-sectors", "4", "--days", "300",
                 "--gamma", "1.0", "--hub", "S000:0,1", "--seed", "5",
                 "--out", str(prices), "--labels-out", str(labels)]) == 0
    return prices, labels


def read_rows(path):
    with open(path) as fh:
        return [r for r in csv.reader(fh) if r and not r[0].startswith("#")]


def test_synth_output(market):
    prices, labels = market
    first = prices.read_text().splitlines()[0]
    assert first.startswith("# tool=corrnet") and "config_hash=" in first and "seed=5" in first
    rows = read_rows(prices)
    assert rows[0][:3] == ["date", "S000", "S001"]
    assert len(rows) == 302
    assert read_rows(labels)[1] == ["S000", "SEC00"]


def test_returns_and_corr(market, tmp_path):
    prices, _ = market
    out, dist = tmp_path / "r.csv", tmp_path / "d.csv"
    assert main(["returns", "-i", str(prices), "-o", str(out)]) == 0
    assert len(read_rows(out)) == 301
    corr = tmp_path / "c.csv"
    assert main(["corr", "-i", str(prices), "-o", str(corr), "--distance-out", str(dist)]) == 0
    rows = read_rows(corr)
    assert len(rows) == 41 and all(len(r) == 40 for r in rows)
    assert rows[1][0] == "1"
    assert read_rows(dist)[1][0] == "0"


def test_net_edge_list_and_graphml(market, tmp_path):
    prices, labels = market
    out, gml = tmp_path / "e.csv", tmp_path / "g.graphml"
    assert main(["net", "-i", str(prices), "--labels", str(labels), "--mode", "weak",
                 "--q", "0.9", "-o", str(out), "--graphml", str(gml)]) == 0
    rows = read_rows(out)
    assert rows[0] == ["src", "dst", "distance"]
    assert len(rows) - 1 == 780 - int(0.9 * 780)
    g = nx.read_graphml(gml)
    assert g.number_of_edges() == len(rows) - 1
    assert all("sector" in g.nodes[n] for n in g.nodes)


def test_scan_rows_and_columns(market, tmp_path):
    prices, _ = market
    out = tmp_path / "s.csv"
    assert main(["scan", "-i", str(prices), "--modes", "weak,strong,random",
                 "--q-grid", "0:0.999:0.001", "--cliques", "-o", str(out)]) == 0
    rows = read_rows(out)
    assert rows[0] == ["mode", "q", "n_connected", "lcc", "slcc", "kappa", "clustering",
                       "n_cliques", "max_clique", "rel_cliques", "rel_max"]
    assert len(rows) - 1 == 3000
    assert rows[1][:7] == ["weak", "0", "40", "40", "0", "39", "1"]
    late = [r for r in rows[1:] if float(r[1]) >= 0.99 and r[2] != "0"]
    assert late and all(r[7] != "" for r in late)


def test_scan_unsorted_grid_exit_2(market, tmp_path, capsys):
    prices, _ = market
    assert main(["scan", "-i", str(prices), "--q-grid", "0.9:0.5:0.1",
                 "-o", str(tmp_path / "x.csv")]) == 2
    assert "not ascending" in capsys.readouterr().err


def test_scan_budget_exit_3(market, tmp_path, capsys):
    prices, _ = market
    code = main(["scan", "-i", str(prices), "--modes", "strong", "--q-grid", "0.5",
                 "--cliques", "--clique-min-q", "0", "--max-steps", "10",
                 "-o", str(tmp_path / "x.csv")])
    assert code == 3
    assert "budget" in capsys.readouterr().err


def test_cliques_json(market, tmp_path):
    prices, _ = market
    out = tmp_path / "c.json"
    assert main(["cliques", "-i", str(prices), "--q", "0.95", "-o", str(out)]) == 0
    obj = json.loads(out.read_text())
    assert obj["meta"]["tool"] == "corrnet"
    assert obj["cliques"] and all(isinstance(c, list) for c in obj["cliques"])
    assert obj["metrics"]["n_cliques"] == len(obj["cliques"])


def test_communities_json(market, tmp_path):
    prices, labels = market
    out = tmp_path / "k.json"
    assert main(["communities", "-i", str(prices), "--labels", str(labels),
                 "--q", "0.85", "--k", "4", "-o", str(out)]) == 0
    obj = json.loads(out.read_text())
    assert obj["k"] == 4 and obj["q"] == 0.85
    assert obj["communities"] and "purity" in obj["communities"][0]
    assert set(obj) >= {"communities", "overlaps"}


def test_communities_bad_k_and_empty(market, tmp_path):
    prices, _ = market
    assert main(["communities", "-i", str(prices), "--k", "2",
                 "-o", str(tmp_path / "x.json")]) == 2
    out = tmp_path / "empty.json"
    assert main(["communities", "-i", str(prices), "--q", "1", "-o", str(out)]) == 0
    assert json.loads(out.read_text())["communities"] == []


def test_mst_full_and_subset(market, tmp_path):
    prices, labels = market
    out = tmp_path / "t.csv"
    assert main(["mst", "-i", str(prices), "-o", str(out)]) == 0
    assert len(read_rows(out)) - 1 == 39
    out2, gml = tmp_path / "t2.csv", tmp_path / "t2.graphml"
    assert main(["mst", "-i", str(prices), "--q", "0.98", "--mode", "weak",
                 "--labels", str(labels), "-o", str(out2), "--graphml", str(gml)]) == 0
    g = nx.read_graphml(gml)
    assert nx.is_tree(g) and g.number_of_nodes() == len(read_rows(out2))


def test_dynamics_csv_and_warning(market, tmp_path, capsys):
    prices, _ = market
    out = tmp_path / "dyn.csv"
    assert main(["dynamics", "-i", str(prices), "--q", "0.9", "--window", "fixed:100",
                 "--tau-max", "5", "-o", str(out)]) == 0
    assert "tau_max" in capsys.readouterr().err
    rows = read_rows(out)
    assert rows[0] == ["t_label", "tau", "similarity", "mode", "q"]
    taus = [int(r[1]) for r in rows[1:]]
    assert taus == [0, 0, 1, 0, 1, 2]


def test_missing_input_file(tmp_path):
    assert main(["corr", "-i", str(tmp_path / "nope.csv")]) == 2


def test_bad_q_is_usage_error(market):
    prices, _ = market
    assert main(["net", "-i", str(prices), "--q", "1.5"]) == 2

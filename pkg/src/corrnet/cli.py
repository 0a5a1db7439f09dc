"""Command-line interface: ``corrnet <subcommand> ...``.

Exit codes: 0 success, 2 bad input, 3 clique budget exceeded. Data goes to
files or stdout; diagnostics go to stderr.
"""
from __future__ import annotations

import argparse
import contextlib
import dataclasses
import math
import os
import sys
from datetime import date

from . import io as cio
from .cliques import ResourceLimits, clique_metrics, cliques_to_json, maximal_cliques
from .communities import cover_to_json, detect_communities
from .dynamics import build_series, similarity_report
from .errors import BudgetExceeded, InputError
from .filtration import (
    PRNG_NAME,
    RemovalMode,
    build_graph,
    filter_links,
    parse_q_grid,
    removal_order,
    scan,
)
from .mst import minimum_spanning_tree
from .panel import correlation, load_labels, load_panel, log_returns, to_distance
from .synth import MarketSpec, generate_panel, sector_labels

THREADS_ENV = "CORRNET_THREADS"
_NOT_HASHED = {"func", "threads", "out", "labels_out", "distance_out", "graphml"}


@contextlib.contextmanager
def _open_out(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            yield fh


def _default_threads():
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def _meta(args, **extra):
    config = {k: v for k, v in vars(args).items() if k not in _NOT_HASHED}
    return cio.metadata(config, getattr(args, "seed", None), **extra)


def _read_panel(args):
    labels = None
    if getattr(args, "labels", None):
        with open(args.labels, encoding="utf-8") as fh:
            labels = load_labels(fh)
    if args.input == "-":
        return load_panel(sys.stdin, drop_incomplete_rows=args.drop_incomplete_rows,
                          sector_labels=labels)
    with open(args.input, encoding="utf-8") as fh:
        return load_panel(fh, drop_incomplete_rows=args.drop_incomplete_rows,
                          sector_labels=labels)


def _mode(args, text=None):
    return RemovalMode.parse(text or args.mode, args.seed)


def _filtered(args, panel=None):
    panel = panel or _read_panel(args)
    dist = to_distance(correlation(log_returns(panel, args.lag)))
    fg = filter_links(build_graph(dist), _mode(args), args.q)
    return panel, dist, fg


def _limits(args):
    return ResourceLimits(max_steps=args.max_steps, max_seconds=args.max_seconds)


# -- subcommands -------------------------------------------------------------

def cmd_synth(args):
    hubs = []
    for text in args.hub or ():
        try:
            sym, pair = text.split(":")
            a, b = (int(x) for x in pair.split(","))
        except ValueError:
            raise InputError(f"bad --hub {text!r}; expected SYMBOL:A,B") from None
        hubs.append((sym, (a, b)))
    spec = MarketSpec(args.n_stocks, args.n_sectors, args.days, args.beta, args.gamma,
                      args.sigma, tuple(hubs), args.seed, date.fromisoformat(args.start))
    panel = generate_panel(spec)
    meta = _meta(args, prng=PRNG_NAME)
    with _open_out(args.out) as fh:
        cio.write_panel(fh, panel, meta)
    if args.labels_out:
        with _open_out(args.labels_out) as fh:
            cio.write_labels(fh, sector_labels(spec), meta)


def cmd_returns(args):
    rm = log_returns(_read_panel(args), args.lag)
    rows = ([d.isoformat()] + [repr(v) for v in row]
            for d, row in zip(rm.dates, rm.returns.tolist()))
    with _open_out(args.out) as fh:
        cio.write_csv(fh, ["date", *rm.symbols], rows, _meta(args))


def cmd_corr(args):
    corr = correlation(log_returns(_read_panel(args), args.lag))
    meta = _meta(args)
    with _open_out(args.out) as fh:
        cio.write_matrix(fh, corr.symbols, corr.rho, meta)
    if args.distance_out:
        with _open_out(args.distance_out) as fh:
            cio.write_matrix(fh, corr.symbols, to_distance(corr).d, meta)


def _fg_edges(fg):
    s = fg.symbols
    return [(s[a], s[b], d) for a, b, d in
            zip(fg.src.tolist(), fg.dst.tolist(), fg.weight.tolist())]


def cmd_net(args):
    panel, _, fg = _filtered(args)
    meta = _meta(args, prng=PRNG_NAME)
    edges = _fg_edges(fg)
    with _open_out(args.out) as fh:
        cio.write_edge_list(fh, edges, meta)
    if args.graphml:
        cio.write_graphml(args.graphml, fg.connected_nodes, edges, panel.sector_labels, meta)


def cmd_scan(args):
    grid = parse_q_grid(args.q_grid)
    panel = _read_panel(args)
    graph = build_graph(to_distance(correlation(log_returns(panel, args.lag))))
    modes = [_mode(args, m) for m in args.modes.split(",") if m.strip()]
    table = scan(graph, modes, grid, threads=args.threads)
    if args.cliques:
        limits = _limits(args)
        orders = {m.label: removal_order(graph, m) for m in modes}
        mode_of = {m.label: m for m in modes}
        records = []
        for r in table.records:
            if r.q >= args.clique_min_q and r.n_connected > 0:
                fg = filter_links(graph, mode_of[r.mode], r.q, orders[r.mode])
                cm = clique_metrics(fg, maximal_cliques(fg, limits))
                r = dataclasses.replace(r, n_cliques=cm.n_cliques,
                                        max_clique=cm.max_clique_size,
                                        rel_cliques=cm.relative_count,
                                        rel_max=cm.relative_max)
            records.append(r)
        table.records = records
    with _open_out(args.out) as fh:
        cio.write_csv(fh, table.header(args.cliques), table.rows(args.cliques),
                      _meta(args, prng=PRNG_NAME))


def cmd_cliques(args):
    _, _, fg = _filtered(args)
    cs = maximal_cliques(fg, _limits(args))
    out = {"q": args.q, "mode": fg.mode.label, "cliques": cliques_to_json(cs)}
    if fg.n_edges:
        cm = clique_metrics(fg, cs)
        out["metrics"] = {"n_cliques": cm.n_cliques, "max_clique": cm.max_clique_size,
                          "n_nodes": cm.n_nodes, "rel_cliques": cm.relative_count,
                          "rel_max": cm.relative_max, "clustering": cm.clustering}
    with _open_out(args.out) as fh:
        cio.write_json(fh, out, _meta(args, prng=PRNG_NAME))


def cmd_communities(args):
    panel, _, fg = _filtered(args)
    cover = detect_communities(fg, args.k, _limits(args))
    with _open_out(args.out) as fh:
        cio.write_json(fh, cover_to_json(cover, panel.sector_labels),
                       _meta(args, prng=PRNG_NAME))


def cmd_mst(args):
    panel = _read_panel(args)
    dist = to_distance(correlation(log_returns(panel, args.lag)))
    subset = None
    if args.q is not None:
        subset = filter_links(build_graph(dist), _mode(args), args.q).connected_nodes
    tree = minimum_spanning_tree(dist, subset)
    meta = _meta(args, total_weight=f"{tree.total_weight:.12g}")
    with _open_out(args.out) as fh:
        cio.write_edge_list(fh, tree.edges, meta)
    if args.graphml:
        cio.write_graphml(args.graphml, tree.nodes, tree.edges, panel.sector_labels, meta)


def cmd_dynamics(args):
    panel = _read_panel(args)
    series = build_series(panel, _mode(args), args.q, args.window, lag=args.lag,
                          threads=args.threads)
    if args.tau_max > len(series) - 1:
        print(f"warning: tau_max={args.tau_max} exceeds the {len(series)} windows; "
              "only valid tau are written", file=sys.stderr)
    report = similarity_report(series, args.tau_max)
    with _open_out(args.out) as fh:
        cio.write_csv(fh, ["t_label", "tau", "similarity", "mode", "q"], report.rows(),
                      _meta(args, prng=PRNG_NAME))


# -- parser ------------------------------------------------------------------

def _fraction(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0.0 <= v <= 1.0 or math.isnan(v):
        raise argparse.ArgumentTypeError(f"q must lie in [0, 1], got {text}")
    return v


def _seed(text):
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in 64 bits")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="corrnet", description=__doc__.splitlines()[0])
    p.add_argument("--threads", type=int, default=None,
                   help=f"worker threads (default: ${THREADS_ENV} or CPU count)")
    sub = p.add_subparsers(dest="command", required=True)

    def panel_args(sp):
        sp.add_argument("--input", "-i", required=True, help="wide price CSV ('-' for stdin)")
        sp.add_argument("--drop-incomplete-rows", action="store_true")
        sp.add_argument("--lag", type=int, default=1, help="return lag in rows (default 1)")
        sp.add_argument("--labels", help="symbol,label CSV of sector labels")
        sp.add_argument("--out", "-o", default="-")
        sp.add_argument("--seed", type=_seed, default=0, help="seed for random removal")

    def filter_args(sp, q=None, mode="weak", required=True):
        sp.add_argument("--mode", default=mode, help="weak, strong or random")
        sp.add_argument("--q", type=_fraction, default=q, required=required and q is None,
                        help="fraction of links to remove")

    def limit_args(sp):
        sp.add_argument("--max-steps", type=int, default=ResourceLimits.max_steps)
        sp.add_argument("--max-seconds", type=float, default=None)

    sp = sub.add_parser("synth", help="generate a synthetic factor-model market")
    sp.add_argument("--n-stocks", type=int, default=200)
    sp.add_argument("--n-sectors", type=int, default=10)
    sp.add_argument("--days", type=int, default=500)
    sp.add_argument("--beta", type=float, default=0.25)
    sp.add_argument("--gamma", type=float, default=0.6)
    sp.add_argument("--sigma", type=float, default=1.0)
    sp.add_argument("--hub", action="append", metavar="SYMBOL:A,B",
                    help="rewire SYMBOL into sectors A and B (repeatable)")
    sp.add_argument("--seed", type=_seed, default=0)
    sp.add_argument("--start", default="2000-01-03")
    sp.add_argument("--out", "-o", default="-")
    sp.add_argument("--labels-out")
    sp.set_defaults(func=cmd_synth)

    sp = sub.add_parser("returns", help="log returns")
    panel_args(sp)
    sp.set_defaults(func=cmd_returns)

    sp = sub.add_parser("corr", help="correlation (and distance) matrix")
    panel_args(sp)
    sp.add_argument("--distance-out")
    sp.set_defaults(func=cmd_corr)

    sp = sub.add_parser("net", help="filtered network as edge list / GraphML")
    panel_args(sp)
    filter_args(sp)
    sp.add_argument("--graphml")
    sp.set_defaults(func=cmd_net)

    sp = sub.add_parser("scan", help="cluster/clique metrics over a q grid")
    panel_args(sp)
    sp.add_argument("--modes", default="weak,strong,random")
    sp.add_argument("--q-grid", default="0:0.999:0.001", help="start:end:step or a,b,c")
    sp.add_argument("--cliques", action="store_true", help="add clique columns")
    sp.add_argument("--clique-min-q", type=_fraction, default=0.99,
                    help="clique columns are filled only for q at or above this")
    limit_args(sp)
    sp.set_defaults(func=cmd_scan)

    sp = sub.add_parser("cliques", help="maximal cliques of a filtered network")
    panel_args(sp)
    filter_args(sp)
    limit_args(sp)
    sp.set_defaults(func=cmd_cliques)

    sp = sub.add_parser("communities", help="k-clique percolation communities")
    panel_args(sp)
    filter_args(sp, q=0.995)
    sp.add_argument("--k", type=int, default=4)
    limit_args(sp)
    sp.set_defaults(func=cmd_communities)

    sp = sub.add_parser("mst", help="minimum spanning tree")
    panel_args(sp)
    filter_args(sp, required=False)
    sp.add_argument("--graphml")
    sp.set_defaults(func=cmd_mst)

    sp = sub.add_parser("dynamics", help="single/multi-step link similarity over windows")
    panel_args(sp)
    filter_args(sp, q=0.995)
    sp.add_argument("--tau-max", type=int, default=1)
    sp.add_argument("--window", default="year", help="'year' or fixed:N rows")
    sp.set_defaults(func=cmd_dynamics)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.threads is None:
        args.threads = _default_threads()
    try:
        args.func(args)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (InputError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())

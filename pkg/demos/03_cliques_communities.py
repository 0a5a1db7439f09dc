"""
Cliques and overlapping communities
===================================

Enumerate maximal cliques of a sparse network and percolate k-cliques into
communities, then compare them with the sector labels.
"""

# %%
from corrnet import (
    WeakFirst, build_graph, clique_metrics, correlation, detect_communities, filter_links,
    generate_panel, label_purity, log_returns, maximal_cliques, overlap_report, to_distance,
)
from corrnet.communities import dominant_labels
from corrnet.synth import MarketSpec, default_hub, sector_labels

spec = MarketSpec(hub_stocks=(default_hub(),), seed=0)
labels = sector_labels(spec)
graph = build_graph(to_distance(correlation(log_returns(generate_panel(spec)))))

# %%
fg = filter_links(graph, WeakFirst, 0.95)
cliques = maximal_cliques(fg)
m = clique_metrics(fg, cliques)
print(m.n_cliques, "maximal cliques, largest has", m.max_clique_size, "nodes")
print("relative count", round(m.relative_count, 3), "clustering", round(m.clustering, 3))
print("largest:", sorted(cliques.cliques[0]))

# %%
# k = 4 communities. At q = 0.9 the hub S000 belongs to two of them.
cover = detect_communities(filter_links(graph, WeakFirst, 0.9), 4)
purity = label_purity(cover, labels)
for cid, (comm, lab, p) in enumerate(zip(cover.communities, dominant_labels(cover, labels),
                                         purity)):
    print(cid, lab, len(comm), "members, purity", round(p, 2))
print("in several communities:", overlap_report(cover).multi_members)

# %%
# At q = 0.995 few links remain and most sectors no longer hold a 4-clique.
sparse = detect_communities(filter_links(graph, WeakFirst, 0.995), 4)
print(len(sparse.communities), "communities at q = 0.995")

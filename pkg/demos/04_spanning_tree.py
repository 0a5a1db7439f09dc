"""
Minimum spanning tree
=====================

The tree that links every stock with the smallest total distance, and the
same tree restricted to nodes that survive a filtration.
"""

# %%
from collections import Counter

from corrnet import WeakFirst, build_graph, correlation, filter_links, generate_panel, log_returns
from corrnet import minimum_spanning_tree, to_distance
from corrnet.mst import mst_of_connected
from corrnet.synth import MarketSpec, sector_labels

spec = MarketSpec(n_stocks=60, n_sectors=6, seed=3)
labels = sector_labels(spec)
dist = to_distance(correlation(log_returns(generate_panel(spec))))

# %%
tree = minimum_spanning_tree(dist)
print(len(tree.edges), "edges, total distance", round(tree.total_weight, 4))

# Most tree edges join stocks of the same sector.
kinds = Counter(labels[a] == labels[b] for a, b, _ in tree.edges)
print("intra-sector edges", kinds[True], "inter-sector edges", kinds[False])

# %%
# Hubs of the tree: nodes with the most tree neighbours.
deg = Counter()
for a, b, _ in tree.edges:
    deg[a] += 1
    deg[b] += 1
print(deg.most_common(5))

# %%
# Tree over the nodes still connected at q = 0.98, using all their distances.
fg = filter_links(build_graph(dist), WeakFirst, 0.98)
sub = mst_of_connected(dist, fg)
print(len(sub.nodes), "nodes,", round(sub.total_weight, 4))

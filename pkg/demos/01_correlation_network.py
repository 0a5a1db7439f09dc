"""
From prices to a distance network
=================================

Generate a small sector-structured market, turn prices into log returns,
correlate them and map correlations to distances.
"""

# %%
import numpy as np

from corrnet import build_graph, correlation, generate_panel, log_returns, to_distance
from corrnet.synth import MarketSpec, sector_labels

spec = MarketSpec(n_stocks=40, n_sectors=4, days=500, seed=1)
panel = generate_panel(spec)
print(panel.prices.shape)        # days + 1 price rows, one column per stock
print(panel.symbols[:5], panel.dates[:2])

# %%
# Lag-1 log returns and the Pearson correlation matrix.
returns = log_returns(panel)
corr = correlation(returns)
rho = corr.rho
print(rho.shape, rho[0, :4].round(3))

# %%
# Same-sector pairs should sit near the model value, cross-sector pairs lower.
sector = np.arange(spec.n_stocks) % spec.n_sectors
iu = np.triu_indices(spec.n_stocks, 1)
same = sector[iu[0]] == sector[iu[1]]
print("intra-sector mean rho", rho[iu][same].mean().round(3),
      "expected", round(spec.expected_correlation(True), 3))
print("inter-sector mean rho", rho[iu][~same].mean().round(3),
      "expected", round(spec.expected_correlation(False), 3))

# %%
# Distances live in [0, 2]; d = 0 for identical series, 2 for mirrored ones.
dist = to_distance(corr)
print(dist.d.min(), dist.d.max().round(3))

# %%
# The complete weighted graph holds one edge per unordered pair.
graph = build_graph(dist)
print(len(graph.src), spec.n_stocks * (spec.n_stocks - 1) // 2)
labels = sector_labels(spec)
print(labels["S000"], labels["S001"])

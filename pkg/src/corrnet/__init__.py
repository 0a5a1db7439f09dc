"""Correlation-based market networks.

Build a complete weighted network from price series, strip links by
correlation strength, and measure what is left: clusters, cliques, k-clique
communities, spanning trees and the stability of links over time.
"""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    BudgetExceeded,
    CorrnetError,
    EmptyGraph,
    InputError,
    InvalidK,
    ZeroVarianceColumn,
)
from .panel import (  # noqa: E402
    CorrelationMatrix,
    DistanceMatrix,
    PricePanel,
    ReturnMatrix,
    correlation,
    distance_matrix,
    load_labels,
    load_panel,
    log_returns,
    to_distance,
)
from .filtration import (  # noqa: E402
    FilteredGraph,
    MarketGraph,
    Random,
    RemovalMode,
    ScanRecord,
    ScanTable,
    StrongFirst,
    WeakFirst,
    build_graph,
    components,
    filter_links,
    kappa,
    parse_q_grid,
    removal_order,
    scan,
)
from .cliques import (  # noqa: E402
    CliqueMetrics,
    CliqueSet,
    ResourceLimits,
    clique_metrics,
    clustering_coefficient,
    maximal_cliques,
)
from .communities import (  # noqa: E402
    CommunityCover,
    OverlapReport,
    detect_communities,
    label_purity,
    overlap_report,
)
from .mst import SpanningTree, minimum_spanning_tree  # noqa: E402
from .dynamics import (  # noqa: E402
    WindowedNetworkSeries,
    build_series,
    multi_step_similarity,
    similarity_report,
    single_step_similarity,
    window_panel,
)
from .synth import MarketSpec, generate_panel  # noqa: E402

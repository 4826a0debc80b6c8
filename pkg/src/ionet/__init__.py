"""Input-output transaction networks from inter-industry payment ledgers."""

from .centrality import InfluenceVector, ccdf, influence_vector, top_k
from .concordance import (
    ConcordanceTable,
    SectorFilter,
    apply_filter,
    default_filters,
    default_table,
    load_concordance,
    map_sic,
    split_raw_clean,
)
from .diffs import log10_histogram, proportional_diff, quantiles, scaled_pct_diff
from .distcorr import DistanceMatrix, growth_corr_by_distance, shortest_paths
from .ingest import (
    ExternalIOT,
    MacroSeries,
    TransactionRecord,
    parse_external_iot,
    parse_ledger,
    parse_macro_series,
    write_ledger,
)
from .iot import (
    FlowMatrix,
    build_matrices,
    external_to_flow,
    read_matrix_csv,
    to_shares,
    truncate,
    truncate_by_quantile,
    write_matrix_csv,
)
from .netstats import NetworkStatsReport, derive_edge_stats, network_stats
from .periods import Window, covid_window
from .plfit import (
    PowerLawFit,
    bootstrap_pvalue,
    fit_power_law,
    fit_xmin,
    ks_distance,
    mle_gamma,
    pareto_sample,
)
from .series import (
    TimeSeries,
    aggregate_ledger,
    average_value,
    benchmark_table,
    correlate,
    edge_correlation,
    index_to_base,
    node_correlation,
    yoy_growth,
)
from .synth import (
    calibrate_ledger,
    gen_economy,
    oracle_network_stats,
    oracle_neumann_influence,
)

__version__ = "0.1.0"

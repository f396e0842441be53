"""Python access to the defectbench C++ core."""

from ._defectbench import (
    ArgumentError,
    ConfigError,
    DataError,
    Error,
    MetricMatrix,
    __version__,
    auc,
    average_ranks,
    bayesian_rope_test,
    critical_distance,
    friedman_test,
    h_measure,
    ingest_metric_matrix,
    nemenyi_q,
    pearson_correlation,
    run_experiment,
    wilcoxon_signed_rank,
)

__all__ = [
    "ArgumentError",
    "ConfigError",
    "DataError",
    "Error",
    "MetricMatrix",
    "__version__",
    "auc",
    "average_ranks",
    "bayesian_rope_test",
    "critical_distance",
    "friedman_test",
    "h_measure",
    "ingest_metric_matrix",
    "nemenyi_q",
    "pearson_correlation",
    "run_experiment",
    "wilcoxon_signed_rank",
]

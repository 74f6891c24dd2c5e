"""Chart rendering for experiment result CSVs."""

from .plots import (
    EXPERIMENT_AXES,
    POLICY_LABELS,
    POLICY_STYLE,
    SchemaError,
    SeriesPoint,
    aggregate,
    check_opt_dominance,
    load_rows,
    plot_experiment,
    plot_summary_table,
)

__version__ = "0.1.0"

"""Indirect reciprocity in two-group populations."""

from ._core import (
    ENUMERATION_HEADER,
    RL_RUNS_HEADER,
    Params,
    SimConfig,
    SingularSystemError,
    __version__,
    enumeration_csv,
    evaluate,
    famous_grid,
    phase_cell,
    run_batch,
    seed_fraction_sweep,
    stable_count,
    stationary_reputations,
)

__all__ = [
    "ENUMERATION_HEADER",
    "RL_RUNS_HEADER",
    "Params",
    "SimConfig",
    "SingularSystemError",
    "__version__",
    "enumeration_csv",
    "evaluate",
    "famous_grid",
    "phase_cell",
    "run_batch",
    "seed_fraction_sweep",
    "stable_count",
    "stationary_reputations",
]

"""Agent-based limit order book market with a quoting dealer."""

from ._core import (
    OrderBook,
    Side,
    ValidationError,
    __version__,
    baselines,
    config,
    correlation,
    default_skew,
    ir_sizes,
    moments,
    optimal_spread,
    probsim,
    reservation_price,
    run,
    run_batch,
    run_seed,
    skew_curve,
    spearman,
    sweep,
)

__all__ = [
    "OrderBook",
    "Side",
    "ValidationError",
    "__version__",
    "baselines",
    "config",
    "correlation",
    "default_skew",
    "ir_sizes",
    "moments",
    "optimal_spread",
    "probsim",
    "reservation_price",
    "run",
    "run_batch",
    "run_seed",
    "skew_curve",
    "spearman",
    "sweep",
]

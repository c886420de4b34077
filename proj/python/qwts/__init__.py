"""Quantum-walk time-series forecasting.

Thin re-export of the compiled ``_core`` extension.
"""

from ._core import (
    DomainError,
    Distribution,
    OracleCapError,
    WalkFamily,
    WalkSpec,
    build_coin,
    build_coin_angle,
    build_initial_state,
    e2_closed,
    e3_closed,
    en_series,
    estimate_next,
    evaluate_v,
    minimize_v,
    oracle_distribution,
    path_sum,
    rolling_forecast,
    simulate,
    v1_closed,
)

__all__ = [
    "DomainError",
    "Distribution",
    "OracleCapError",
    "WalkFamily",
    "WalkSpec",
    "build_coin",
    "build_coin_angle",
    "build_initial_state",
    "e2_closed",
    "e3_closed",
    "en_series",
    "estimate_next",
    "evaluate_v",
    "minimize_v",
    "oracle_distribution",
    "path_sum",
    "rolling_forecast",
    "simulate",
    "v1_closed",
]

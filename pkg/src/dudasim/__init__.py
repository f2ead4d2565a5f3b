"""Two-way latency of coupled vs. decoupled uplink/downlink access in TDD
cellular networks.

The package quantifies the latency of a two-way transaction (UL data plus
DL ACK) under two serving arrangements: the coupled baseline, where a
single half-duplex base station alternates directions in fixed slots, and
the decoupled scheme, where a cooperating pair of base stations splits the
two directions so the terminal never waits for the frame to turn around.

Layers: closed-form latency model (`latency`), stochastic-geometry success
probabilities (`coverage` on top of `quadrature`), spatial realizations
(`deployment`), Monte Carlo simulation (`montecarlo`), and the sweep /
validation / CLI front end (`sweep`, `validation`, `cli`).
"""

from .params import (
    LinkSuccess,
    SlotTiming,
    SystemParams,
    db_to_linear,
    dbm_to_watts,
    linear_to_db,
    validate,
    watts_to_dbm,
)
from .latency import (
    LatencyBreakdown,
    latency_duca,
    latency_duda,
    latency_gap,
    n_shot_success,
    protocol_delay_expected,
    protocol_delay_sample,
    retransmission_delay,
)
from .quadrature import (
    QuadratureConvergenceError,
    QuadratureSpec,
    integrate_semi_infinite,
    interference_tail_integral,
)
from .coverage import (
    InterfererDensities,
    SuccessProbabilityResult,
    dl_success_probability,
    laplace_ul_from_dl_bs,
    laplace_ul_from_ul_ue,
    nearest_distance_pdf,
    second_nearest_distance_pdf,
    ul_success_probability,
)
from .deployment import (
    Deployment,
    RngStream,
    assign_directions_and_ues,
    delaunay_adjacency,
    generate_deployment,
    pair_bs,
    sample_ppp,
    snapshot_csv,
)
from .montecarlo import (
    LatencyStats,
    TrialConfig,
    run_campaign,
    run_synthetic_campaign,
    run_two_way_trial,
    samples_csv,
    sinr,
)
from .config import ConfigBundle, ConfigError, SweepSpec, parse_config
from .sweep import run_sweep, rows_to_csv
from .validation import run_validation

__version__ = "0.1.0"

__all__ = [
    "LinkSuccess", "SlotTiming", "SystemParams",
    "db_to_linear", "dbm_to_watts", "linear_to_db", "watts_to_dbm", "validate",
    "LatencyBreakdown", "latency_duca", "latency_duda", "latency_gap",
    "n_shot_success", "protocol_delay_expected", "protocol_delay_sample",
    "retransmission_delay",
    "QuadratureConvergenceError", "QuadratureSpec",
    "integrate_semi_infinite", "interference_tail_integral",
    "InterfererDensities", "SuccessProbabilityResult",
    "dl_success_probability", "laplace_ul_from_dl_bs", "laplace_ul_from_ul_ue",
    "nearest_distance_pdf", "second_nearest_distance_pdf", "ul_success_probability",
    "Deployment", "RngStream", "assign_directions_and_ues", "delaunay_adjacency",
    "generate_deployment", "pair_bs", "sample_ppp", "snapshot_csv",
    "LatencyStats", "TrialConfig", "run_campaign", "run_synthetic_campaign",
    "run_two_way_trial", "samples_csv", "sinr",
    "ConfigBundle", "ConfigError", "SweepSpec", "parse_config",
    "run_sweep", "rows_to_csv", "run_validation",
]

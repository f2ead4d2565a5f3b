"""Parameter sweeps producing diff-able CSV tables.

One row per sweep point per scheme per mode.  Analytic rows evaluate the
stochastic-geometry success probabilities and feed them into the closed
forms; simulate rows run Monte Carlo campaigns.  For ``rho_product``
sweeps the success probabilities are set directly to (sqrt(p), sqrt(p))
and the geometry layer is bypassed, in analytic mode via the formulas and
in simulate mode via Bernoulli-attempt campaigns.

Numbers are printed with 9 significant digits and a period decimal
separator so outputs regress byte-for-byte.  The wall-clock column is
opt-in (``emit_timing``) because enabling it breaks byte-identical reruns.
"""

from __future__ import annotations

import math
import sys
import time
from dataclasses import dataclass, replace
from typing import List, Optional

import numpy as np

from .config import ConfigBundle, SweepSpec
from .coverage import dl_success_probability, ul_success_probability
from .latency import latency_duca, latency_duda
from .montecarlo import TrialConfig, run_campaign, run_synthetic_campaign
from .params import LinkSuccess, SlotTiming, SystemParams, db_to_linear


@dataclass
class SweepRow:
    variable: str
    value: float
    scheme: str
    mode: str
    latency_mean: float
    latency_ci95: float
    rho_u: float
    rho_d: float
    censored_fraction: float
    wall_time_ms: float = 0.0


CSV_HEADER = "variable,value,scheme,mode,latency_mean,latency_ci95,rho_u,rho_d,censored_fraction"


def _fmt(x: float) -> str:
    if isinstance(x, float) and math.isnan(x):
        return "nan"
    return f"{x:.9g}"


def rows_to_csv(rows: List[SweepRow], emit_timing: bool = False) -> str:
    header = CSV_HEADER + (",wall_time_ms" if emit_timing else "")
    lines = [header]
    for r in rows:
        cells = [
            r.variable,
            _fmt(r.value),
            r.scheme,
            r.mode,
            _fmt(r.latency_mean),
            _fmt(r.latency_ci95),
            _fmt(r.rho_u),
            _fmt(r.rho_d),
            _fmt(r.censored_fraction),
        ]
        if emit_timing:
            cells.append(_fmt(r.wall_time_ms))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def _point_seed(seed: int, point: int) -> int:
    # shared across schemes so both see the same point sets (common
    # randomness keeps the scheme comparison low-variance)
    ss = np.random.SeedSequence([seed, point])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def _apply_point(
    spec: SweepSpec, value: float, params: SystemParams, timing: SlotTiming
):
    """Return (params, timing, forced_link) at one sweep point."""
    if spec.variable == "s_u":
        return params, replace(timing, s_u=value), None
    if spec.variable == "rho_product":
        rho = math.sqrt(value)
        return params, timing, LinkSuccess(rho, rho)
    if spec.variable == "delta":
        return replace(params, delta=value), timing, None
    if spec.variable == "lambda_b":
        return replace(params, lambda_b=value), timing, None
    if spec.variable == "beta_u_db":
        return replace(params, beta_u=db_to_linear(value)), timing, None
    if spec.variable == "beta_d_db":
        return replace(params, beta_d=db_to_linear(value)), timing, None
    raise ValueError(f"unknown sweep variable {spec.variable!r}")


def _analytic_row(
    spec: SweepSpec, value: float, scheme: str,
    timing: SlotTiming, link: LinkSuccess,
) -> SweepRow:
    breakdown = latency_duda(timing, link) if scheme == "duda" else latency_duca(timing, link)
    return SweepRow(
        variable=spec.variable, value=value, scheme=scheme, mode="analytic",
        latency_mean=breakdown.total, latency_ci95=0.0,
        rho_u=link.rho_u, rho_d=link.rho_d, censored_fraction=0.0,
    )


def _simulate_row(
    spec: SweepSpec, value: float, scheme: str, params: SystemParams,
    timing: SlotTiming, forced: Optional[LinkSuccess], trial: TrialConfig,
    point: int,
) -> SweepRow:
    seed = _point_seed(trial.seed, point)
    if forced is not None:
        stats = run_synthetic_campaign(
            forced.rho_u, forced.rho_d, timing, scheme,
            trial.iterations, seed, trial.max_attempts,
        )
    else:
        cfg = replace(trial, params=params, timing=timing, scheme=scheme, seed=seed)
        stats = run_campaign(cfg)
    return SweepRow(
        variable=spec.variable, value=value, scheme=scheme, mode="simulate",
        latency_mean=stats.mean, latency_ci95=stats.ci95_half_width,
        rho_u=stats.empirical_rho_u, rho_d=stats.empirical_rho_d,
        censored_fraction=stats.censored_fraction,
    )


def run_sweep(spec: SweepSpec, bundle: ConfigBundle) -> List[SweepRow]:
    """Evaluate the sweep; failures are reported per row (a warning goes to
    stderr and the row carries NaNs) without aborting the remaining rows."""
    values = np.linspace(spec.start, spec.stop, spec.steps)
    modes = ("analytic", "simulate") if spec.mode == "both" else (spec.mode,)
    rows: List[SweepRow] = []
    analytic_cache: dict = {}
    for point, value in enumerate(values):
        value = float(value)
        params, timing, forced = _apply_point(spec, value, bundle.params, bundle.timing)
        if forced is None and bundle.forced_link is not None:
            forced = bundle.forced_link

        def analytic_link() -> LinkSuccess:
            # the success probabilities depend on params only, not timing
            if forced is not None:
                return forced
            key = (params.lambda_b, params.delta, params.alpha, params.beta_u, params.beta_d)
            if key not in analytic_cache:
                analytic_cache[key] = LinkSuccess(
                    ul_success_probability(params, include_noise=bundle.include_noise).value,
                    dl_success_probability(params, include_noise=bundle.include_noise).value,
                )
            return analytic_cache[key]

        for scheme in spec.schemes:
            for mode in modes:
                t0 = time.perf_counter()
                try:
                    if mode == "analytic":
                        row = _analytic_row(spec, value, scheme, timing, analytic_link())
                    else:
                        row = _simulate_row(
                            spec, value, scheme, params, timing, forced,
                            bundle.trial, point,
                        )
                except Exception as exc:  # propagate per-row, keep sweeping
                    print(
                        f"sweep point {spec.variable}={value:.6g} {scheme}/{mode} failed: {exc}",
                        file=sys.stderr,
                    )
                    row = SweepRow(
                        spec.variable, value, scheme, mode,
                        float("nan"), float("nan"), float("nan"), float("nan"),
                        float("nan"),
                    )
                row.wall_time_ms = (time.perf_counter() - t0) * 1000.0
                rows.append(row)
    return rows

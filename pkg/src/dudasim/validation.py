"""Composite self-checks: quadrature closed forms, spatial statistics,
latency-identity grids, and analytic-vs-Monte-Carlo cross-validation.

Each check reports its measured quantity against its threshold so a
failure is quantified, not just flagged.  At the default parameters the
analytic DL success probability is known to sit well above the simulated
one (the DL expression is an approximation by construction), so the
cross-validation checks report honest failures there; see the README.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import List, Optional

import numpy as np
from scipy import stats as sps

from .config import ConfigBundle
from .coverage import (
    dl_success_probability,
    nearest_distance_cdf,
    second_nearest_distance_cdf,
    ul_success_probability,
)
from .deployment import RngStream, sample_ppp
from .latency import latency_duca, latency_duda, latency_gap
from .montecarlo import run_campaign
from .params import LinkSuccess, SlotTiming
from .quadrature import interference_tail_integral


@dataclass
class ValidationCheck:
    name: str
    passed: bool
    measured: float
    threshold: float
    detail: str = ""
    skipped: bool = False

    def line(self) -> str:
        status = "SKIP" if self.skipped else ("PASS" if self.passed else "FAIL")
        extra = f" ({self.detail})" if self.detail else ""
        return f"{status:4s} {self.name}: measured={self.measured:.6g} threshold={self.threshold:.6g}{extra}"


@dataclass
class ValidationReport:
    checks: List[ValidationCheck]

    @property
    def passed(self) -> bool:
        return all(c.passed or c.skipped for c in self.checks)

    def text(self) -> str:
        lines = [c.line() for c in self.checks]
        lines.append("overall: " + ("PASS" if self.passed else "FAIL"))
        return "\n".join(lines) + "\n"


def _closed_form_tail(kappa: float, beta: float, r: float, a: float) -> float:
    # alpha = 4 arctan form, written cancellation-free
    c = kappa * beta * r**4
    sc = math.sqrt(c)
    angle = math.pi / 2.0 if a == 0.0 else math.atan2(sc, a * a)
    return 0.5 * sc * angle


def check_quadrature_closed_form(alpha: float, n_tuples: int, seed: int) -> ValidationCheck:
    if alpha != 4.0:
        return ValidationCheck(
            "quadrature_alpha4_closed_form", True, 0.0, 1e-8,
            detail=f"alpha={alpha:g} != 4", skipped=True,
        )
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_tuples):
        kappa, beta, r, a = 10.0 ** rng.uniform(-3, 3, size=4)
        got = interference_tail_integral(kappa, beta, r, 4.0, a).value
        want = _closed_form_tail(kappa, beta, r, a)
        worst = max(worst, abs(got - want) / abs(want))
    return ValidationCheck("quadrature_alpha4_closed_form", worst <= 1e-8, worst, 1e-8)


def check_ppp_counts(lambda_b: float, half_width: float, draws: int, seed: int) -> ValidationCheck:
    realized = np.array([
        len(sample_ppp(lambda_b, half_width, RngStream(seed, i).generator()))
        for i in range(draws)
    ])
    pval = _poisson_chi_square(realized, lambda_b * (2 * half_width) ** 2)
    return ValidationCheck(
        "ppp_count_chi_square", pval > 0.01, pval, 0.01, detail="p-value"
    )


def _poisson_chi_square(counts: np.ndarray, mean: float) -> float:
    """Chi-square goodness of fit of observed counts against Poisson(mean),
    with tails pooled so every bin expects at least 5."""
    n = len(counts)
    lo = int(sps.poisson.ppf(0.001, mean))
    hi = int(sps.poisson.ppf(0.999, mean))
    edges = list(range(lo, hi + 1))
    probs = []
    obs = []
    # left tail, interior bins, right tail
    probs.append(sps.poisson.cdf(lo - 1, mean))
    obs.append(np.sum(counts < lo))
    for k in edges:
        probs.append(sps.poisson.pmf(k, mean))
        obs.append(np.sum(counts == k))
    probs.append(sps.poisson.sf(hi, mean))
    obs.append(np.sum(counts > hi))
    probs = np.array(probs)
    obs = np.array(obs, dtype=float)
    # pool adjacent bins until expected >= 5
    exp = probs * n
    pooled_obs, pooled_exp = [], []
    acc_o = acc_e = 0.0
    for o, e in zip(obs, exp):
        acc_o += o
        acc_e += e
        if acc_e >= 5.0:
            pooled_obs.append(acc_o)
            pooled_exp.append(acc_e)
            acc_o = acc_e = 0.0
    if acc_e > 0:
        if pooled_exp:
            pooled_obs[-1] += acc_o
            pooled_exp[-1] += acc_e
        else:
            pooled_obs.append(acc_o)
            pooled_exp.append(acc_e)
    pooled_obs = np.array(pooled_obs)
    pooled_exp = np.array(pooled_exp) * (n / np.sum(pooled_exp))
    stat = float(np.sum((pooled_obs - pooled_exp) ** 2 / pooled_exp))
    dof = len(pooled_obs) - 1
    return float(sps.chi2.sf(stat, dof))


def spatial_distance_samples(
    lambda_b: float, half_width: float, draws: int, seed: int
) -> tuple[np.ndarray, np.ndarray]:
    """Nearest and second-nearest distances from the origin across
    independent PPP realizations, sampled in bulk."""
    gen = np.random.default_rng([seed, 0xD1])
    side = 2.0 * half_width
    counts = gen.poisson(lambda_b * side * side, size=draws)
    nearest = np.empty(draws)
    second = np.empty(draws)
    for i, n in enumerate(counts):
        n = int(n)
        while n < 2:  # essentially unreachable at the default intensity
            n = int(gen.poisson(lambda_b * side * side))
        pts = gen.uniform(-half_width, half_width, size=(n, 2))
        d2 = pts[:, 0] ** 2 + pts[:, 1] ** 2
        two = np.partition(d2, 1)[:2]
        nearest[i] = math.sqrt(two.min())
        second[i] = math.sqrt(two.max())
    return nearest, second


def check_distance_laws(
    lambda_b: float, half_width: float, draws: int, seed: int
) -> List[ValidationCheck]:
    nearest, second = spatial_distance_samples(lambda_b, half_width, draws, seed)
    p1 = sps.kstest(nearest, lambda r: nearest_distance_cdf(r, lambda_b)).pvalue
    p2 = sps.kstest(second, lambda d: second_nearest_distance_cdf(d, lambda_b)).pvalue
    return [
        ValidationCheck("nearest_distance_ks", p1 > 0.01, float(p1), 0.01, detail="p-value"),
        ValidationCheck("second_nearest_distance_ks", p2 > 0.01, float(p2), 0.01, detail="p-value"),
    ]


def check_gap_identity(n_points: int, seed: int) -> ValidationCheck:
    rng = np.random.default_rng(seed)
    worst_rel = 0.0
    all_positive = True
    for _ in range(n_points):
        t = rng.uniform(0.2, 3.0)
        s_u = rng.uniform(1e-6, 1.0) * t
        s_d = rng.uniform(1e-6, 1.0) * t
        p = rng.uniform(0.01, 1.0)
        rho = math.sqrt(p)
        timing = SlotTiming(t_d=t, t_u=t, s_u=s_u, s_d=s_d)
        link = LinkSuccess(rho, rho)
        gap = latency_gap(timing, link)
        direct = latency_duca(timing, link).total - latency_duda(timing, link).total
        all_positive &= gap > 0
        worst_rel = max(worst_rel, abs(gap - direct) / abs(direct))
    ok = all_positive and worst_rel <= 1e-12
    return ValidationCheck(
        "latency_gap_identity", ok, worst_rel, 1e-12,
        detail="max relative mismatch; positivity " + ("held" if all_positive else "VIOLATED"),
    )


def check_analytic_vs_simulation(bundle: ConfigBundle, stats) -> List[ValidationCheck]:
    rho_u = ul_success_probability(bundle.params, include_noise=bundle.include_noise).value
    rho_d = dl_success_probability(bundle.params, include_noise=bundle.include_noise).value
    du = abs(rho_u - stats.empirical_rho_u)
    dd = abs(rho_d - stats.empirical_rho_d)
    return [
        ValidationCheck(
            "analytic_vs_mc_rho_u", du <= 0.03, du, 0.03,
            detail=f"analytic={rho_u:.4f} empirical={stats.empirical_rho_u:.4f}",
        ),
        ValidationCheck(
            "analytic_vs_mc_rho_d", dd <= 0.05, dd, 0.05,
            detail=f"analytic={rho_d:.4f} empirical={stats.empirical_rho_d:.4f}",
        ),
    ]


def check_self_consistency(bundle: ConfigBundle, campaign_stats: dict) -> List[ValidationCheck]:
    out = []
    for scheme, stats in campaign_stats.items():
        link = LinkSuccess(stats.empirical_rho_u, stats.empirical_rho_d)
        form = (
            latency_duda(bundle.timing, link)
            if scheme == "duda"
            else latency_duca(bundle.timing, link)
        ).total
        se = _consistency_se(stats, bundle.timing, scheme)
        diff = abs(stats.mean - form)
        out.append(
            ValidationCheck(
                f"latency_self_consistency_{scheme}", diff <= 3 * se, diff, 3 * se,
                detail=f"sampled={stats.mean:.3f} closed_form={form:.3f}",
            )
        )
    return out


def _consistency_se(stats, timing: SlotTiming, scheme: str) -> float:
    """Standard error of (sampled mean - closed form at estimated rhos),
    combining the sample-mean SE with the delta-method SE of the plug-in
    closed form (the two are positively correlated, so the sum is
    conservative)."""
    n = len(stats.samples)
    se_mean = float(np.std(stats.samples, ddof=1) / math.sqrt(n))
    ru, rd = stats.empirical_rho_u, stats.empirical_rho_d
    cycle = timing.s_u + timing.w if scheme == "duda" else timing.t_d + timing.t_u
    # d(form)/d(rho) = -cycle / (ru^2 * rd) and -cycle / (ru * rd^2)
    var_u = ru * (1 - ru) / n
    var_d = rd * (1 - rd) / n
    se_form = cycle / (ru * rd) * math.sqrt(var_u / ru**2 + var_d / rd**2)
    return math.sqrt(se_mean**2 + se_form**2)


def run_validation(
    bundle: ConfigBundle,
    mc_iterations: Optional[int] = None,
    spatial_draws: int = 20000,
    gap_points: int = 10000,
    quadrature_tuples: int = 2000,
    seed: Optional[int] = None,
) -> ValidationReport:
    """Run the full invariant suite; every check reports its measured delta."""
    seed = bundle.trial.seed if seed is None else seed
    iters = mc_iterations if mc_iterations is not None else min(bundle.trial.iterations, 4000)
    checks: List[ValidationCheck] = []
    checks.append(check_quadrature_closed_form(bundle.params.alpha, quadrature_tuples, seed))
    checks.append(
        check_ppp_counts(bundle.params.lambda_b, bundle.trial.window_half_width, spatial_draws, seed)
    )
    checks.extend(
        check_distance_laws(bundle.params.lambda_b, bundle.trial.window_half_width, spatial_draws, seed)
    )
    checks.append(check_gap_identity(gap_points, seed))
    campaigns = {
        scheme: run_campaign(replace(bundle.trial, iterations=iters, scheme=scheme, seed=seed))
        for scheme in ("duda", "duca")
    }
    checks.extend(check_analytic_vs_simulation(bundle, campaigns["duda"]))
    checks.extend(check_self_consistency(bundle, campaigns))
    return ValidationReport(checks)

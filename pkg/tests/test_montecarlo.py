import math
from dataclasses import replace

import numpy as np
import pytest

from dudasim.deployment import Deployment, RngStream, generate_deployment
from dudasim.latency import latency_duca, latency_duda
from dudasim.montecarlo import (
    TrialConfig,
    run_campaign,
    run_synthetic_campaign,
    run_two_way_trial,
    samples_csv,
    sinr,
)
from dudasim.params import LinkSuccess, SlotTiming, SystemParams

TABLE = SystemParams()


class ScriptedRng:
    """Deterministic stand-in for a Generator: yields scripted exponentials,
    uniforms mid-range, and zero integers."""

    def __init__(self, exponentials):
        self._exp = list(exponentials)

    def exponential(self, size=None):
        if size is None:
            return self._exp.pop(0)
        return np.array([self._exp.pop(0) for _ in range(size)])

    def uniform(self, low=0.0, high=1.0, size=None):
        if size is None:
            return 0.5 * (low + high)
        return np.full(size, 0.5 * (low + high))

    def integers(self, n):
        return 0


def isolated_pair_deployment(scheme="duda"):
    """Two cooperating stations, no interferers: the probe pair alone."""
    if scheme == "duda":
        return Deployment(
            window_half_width=75.0,
            bs_positions=np.array([[5.0, 0.0], [12.0, 0.0]]),
            adjacency=[],
            pairs=np.array([[0, 1]]),
            unpaired=np.array([], dtype=int),
            pair_active_dl=np.array([False]),
            unpaired_active_dl=np.array([], dtype=bool),
            active_ues=np.array([[0.0, 0.0]]),
            scheme="duda",
            typical_mode="dl",
            typical_ue=np.zeros(2),
            typical_ul_bs=0,
            typical_dl_bs=1,
            typical_pair_index=0,
        )
    return Deployment(
        window_half_width=75.0,
        bs_positions=np.array([[5.0, 0.0]]),
        adjacency=[],
        pairs=np.empty((0, 2), dtype=int),
        unpaired=np.array([0]),
        pair_active_dl=np.array([], dtype=bool),
        unpaired_active_dl=np.array([False]),
        active_ues=np.array([[0.0, 0.0]]),
        scheme="duca",
        typical_mode="dl",
        typical_ue=np.zeros(2),
        typical_ul_bs=0,
        typical_dl_bs=0,
        typical_pair_index=-1,
    )


class TestSinr:
    def test_constructed_equality(self):
        # noise set equal to the received signal power -> SINR exactly 1
        rx = 0.2 * 1.0 * 5.0 ** (-4.0)
        assert sinr(0.2, 5.0, 1.0, [], 4.0, rx) == pytest.approx(1.0, rel=1e-12)

    def test_symmetric_interferer(self):
        val = sinr(0.2, 5.0, 1.0, [(0.2, 5.0, 1.0)], 4.0, 0.0)
        assert val == pytest.approx(1.0, rel=1e-12)

    def test_hand_example(self):
        # 0.1 W at sqrt(50) m against a 10 W interferer at 30 m, alpha 4
        val = sinr(0.1, math.sqrt(50.0), 1.0, [(10.0, 30.0, 1.0)], 4.0, 0.0)
        assert val == pytest.approx(3.24, rel=1e-12)

    def test_rejects_zero_distance(self):
        with pytest.raises(ValueError):
            sinr(1.0, 0.0, 1.0, [], 4.0, 1e-12)
        with pytest.raises(ValueError):
            sinr(1.0, 1.0, -0.5, [], 4.0, 1e-12)


class TestTrial:
    def test_guaranteed_first_attempt(self):
        # zero-ish thresholds: success on attempt 1, latency s_u + s_d
        cfg = TrialConfig(
            params=replace(TABLE, beta_u=1e-15, beta_d=1e-15),
            timing=SlotTiming(),
            iterations=1,
            scheme="duda",
        )
        dep, _ = generate_deployment(TABLE.lambda_b, TABLE.delta, 75.0, RngStream(1, 0))
        res = run_two_way_trial(dep, cfg, np.random.default_rng(2))
        assert res.attempts == 1
        assert not res.censored
        assert res.latency == pytest.approx(1.0)

    def test_scripted_alternating_pattern(self):
        # fail (UL fading 0), then succeed: attempts = 2,
        # latency = (s_u + w) + s_u + s_d
        cfg = TrialConfig(timing=SlotTiming(), scheme="duda", iterations=1)
        dep = isolated_pair_deployment()
        rng = ScriptedRng([0.0, 1.0, 1.0, 1.0])
        res = run_two_way_trial(dep, cfg, rng)
        assert res.attempts == 2
        assert not res.first_attempt_ul
        assert res.first_attempt_dl
        assert res.latency == pytest.approx((0.5 + 1.0) + 0.5 + 0.5)

    def test_scripted_duca_latency_uses_frame_offset(self):
        cfg = TrialConfig(timing=SlotTiming(), scheme="duca", iterations=1)
        dep = isolated_pair_deployment("duca")
        rng = ScriptedRng([0.0, 1.0, 1.0, 1.0])
        res = run_two_way_trial(dep, cfg, rng)
        assert res.attempts == 2
        # ScriptedRng draws the frame offset at midpoint: t = 1.0
        t = 1.0
        lp = (1.0 - t) * 0.5 + (3.0 - t) * 0.25
        assert res.latency == pytest.approx(lp + (2 - 1) * 2.0 + 1.0 + 0.5)

    def test_censoring_at_cap(self):
        cfg = TrialConfig(timing=SlotTiming(), scheme="duda", iterations=1, max_attempts=3)
        dep = isolated_pair_deployment()
        rng = ScriptedRng([0.0, 1.0] * 3)
        res = run_two_way_trial(dep, cfg, rng)
        assert res.attempts == 3
        assert res.censored

    def test_scheme_mismatch_rejected(self):
        cfg = TrialConfig(scheme="duca", iterations=1)
        with pytest.raises(ValueError):
            run_two_way_trial(isolated_pair_deployment("duda"), cfg, np.random.default_rng(0))

    def test_frozen_fading_repeats_first_outcome(self):
        # fading_redraw off: a failed first attempt can never recover
        cfg = TrialConfig(
            timing=SlotTiming(), scheme="duda", iterations=1,
            fading_redraw=False, max_attempts=7,
        )
        dep = isolated_pair_deployment()
        res = run_two_way_trial(dep, cfg, ScriptedRng([0.0, 1.0]))
        assert res.attempts == 7
        assert res.censored


class TestCampaign:
    def test_single_iteration_reproducible(self):
        cfg = TrialConfig(iterations=1, seed=77, scheme="duda")
        a = run_campaign(cfg)
        b = run_campaign(cfg)
        assert a.samples[0] == b.samples[0]
        assert a.attempts[0] == b.attempts[0]
        assert a.empirical_rho_u == b.empirical_rho_u

    def test_full_campaign_deterministic(self):
        cfg = TrialConfig(iterations=200, seed=5, scheme="duda")
        a = run_campaign(cfg)
        b = run_campaign(cfg)
        assert np.array_equal(a.samples, b.samples)
        assert np.array_equal(a.attempts, b.attempts)
        assert samples_csv(a) == samples_csv(b)

    def test_stats_fields(self):
        cfg = TrialConfig(iterations=300, seed=8, scheme="duda")
        st = run_campaign(cfg)
        assert st.mean == pytest.approx(float(np.mean(st.samples)))
        assert st.censored_count <= cfg.iterations
        assert 0.0 <= st.empirical_rho_u <= 1.0
        assert 0.0 <= st.empirical_rho_d <= 1.0
        assert len(st.samples) == cfg.iterations
        assert st.censored_count == 0  # independent attempts at these rates

    @pytest.mark.slow
    def test_geometric_attempt_distribution(self):
        cfg = TrialConfig(iterations=5000, seed=13, scheme="duda")
        st = run_campaign(cfg)
        n = cfg.iterations
        p_hat = st.empirical_rho_u * st.empirical_rho_d
        se_u = math.sqrt(st.empirical_rho_u * (1 - st.empirical_rho_u) / n)
        se_d = math.sqrt(st.empirical_rho_d * (1 - st.empirical_rho_d) / n)
        for k in range(1, 6):
            surv = float(np.mean(st.attempts > k))
            want = (1.0 - p_hat) ** k
            se_surv = math.sqrt(max(surv * (1 - surv), 1e-9) / n)
            # delta-method noise of the plug-in (1-p)^k
            dp = k * (1 - p_hat) ** (k - 1)
            se_want = dp * math.sqrt(
                (st.empirical_rho_d * se_u) ** 2 + (st.empirical_rho_u * se_d) ** 2
            )
            assert abs(surv - want) < 3 * math.sqrt(se_surv**2 + se_want**2)

    @pytest.mark.slow
    def test_self_consistency_both_schemes(self):
        timing = SlotTiming()
        for scheme in ("duda", "duca"):
            cfg = TrialConfig(timing=timing, iterations=4000, seed=21, scheme=scheme)
            st = run_campaign(cfg)
            link = LinkSuccess(st.empirical_rho_u, st.empirical_rho_d)
            form = (
                latency_duda(timing, link) if scheme == "duda" else latency_duca(timing, link)
            ).total
            n = cfg.iterations
            se_mean = float(np.std(st.samples, ddof=1)) / math.sqrt(n)
            cycle = timing.s_u + timing.w if scheme == "duda" else timing.t_d + timing.t_u
            ru, rd = link.rho_u, link.rho_d
            se_form = cycle / (ru * rd) * math.sqrt(
                (1 - ru) / (ru * n) + (1 - rd) / (rd * n)
            )
            tol = 3 * math.hypot(se_mean, se_form)
            assert abs(st.mean - form) < tol, f"{scheme}: {st.mean} vs {form} (tol {tol})"

    def test_fixed_attempt_model_is_heavy_tailed(self):
        cfg = TrialConfig(
            iterations=400, seed=31, scheme="duda", attempt_model="fixed", max_attempts=50
        )
        st = run_campaign(cfg)
        # a frozen geometry leaves some trials with near-zero conditional
        # success probability; the cap bites visibly
        assert st.censored_count > 10
        ind = run_campaign(replace(cfg, attempt_model="independent"))
        assert ind.censored_count == 0
        assert st.attempts.mean() > ind.attempts.mean()

    def test_fixed_model_matches_trial_op(self):
        cfg = TrialConfig(iterations=50, seed=41, scheme="duda", attempt_model="fixed")
        st = run_campaign(cfg)
        dep, _ = generate_deployment(
            TABLE.lambda_b, TABLE.delta, cfg.window_half_width, RngStream(cfg.seed, 0)
        )
        res = run_two_way_trial(dep, cfg, np.random.default_rng([cfg.seed, 0, 0xA77E]))
        assert res.attempts == st.attempts[0]
        assert res.latency == pytest.approx(st.samples[0])

    def test_direction_redraw_toggle_runs(self):
        cfg = TrialConfig(
            iterations=100, seed=43, scheme="duda",
            attempt_model="fixed", direction_redraw=True, max_attempts=30,
        )
        st = run_campaign(cfg)
        assert len(st.samples) == 100

    def test_generation_abandons_hopeless_intensity(self):
        with pytest.raises(RuntimeError):
            generate_deployment(1e-9, 0.5, 10.0, RngStream(0, 0))


class TestSyntheticCampaign:
    def test_perfect_links(self):
        st = run_synthetic_campaign(1.0, 1.0, SlotTiming(), "duda", 200, seed=3)
        assert np.all(st.attempts == 1)
        assert np.allclose(st.samples, 1.0)
        assert st.empirical_rho_u == 1.0

    def test_geometric_mean_attempts(self):
        rho = 0.7
        st = run_synthetic_campaign(rho, rho, SlotTiming(), "duda", 20000, seed=5)
        p = rho * rho
        se = math.sqrt((1 - p) / p**2 / 20000)
        assert abs(st.attempts.mean() - 1 / p) < 3 * se

    def test_duca_mean_matches_closed_form(self):
        timing = SlotTiming()
        link = LinkSuccess(0.8, 0.9)
        st = run_synthetic_campaign(0.8, 0.9, timing, "duca", 20000, seed=7)
        se = float(np.std(st.samples, ddof=1)) / math.sqrt(20000)
        # true probabilities are known here, no plug-in noise
        assert abs(st.mean - latency_duca(timing, link).total) < 3.5 * se


class TestCsvSink:
    def test_schema_and_determinism(self):
        st = run_synthetic_campaign(0.9, 0.9, SlotTiming(), "duda", 20, seed=11)
        text = samples_csv(st)
        lines = text.strip().split("\n")
        assert lines[0] == "iteration,scheme,attempts,latency,censored"
        assert len(lines) == 21
        cells = lines[1].split(",")
        assert cells[1] == "duda"
        int(cells[0]), int(cells[2]), float(cells[3]), int(cells[4])

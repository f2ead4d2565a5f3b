"""Command-line front end.

Subcommands: ``analytic`` (closed forms at the analytic success
probabilities), ``simulate`` (Monte Carlo campaigns), ``sweep`` (parameter
sweeps to CSV), ``validate`` (the invariant suite), ``snapshot`` (one
deployment realization as CSV for plotting).

Flags mirror configuration keys and override the --config file, which in
turn overrides the built-in defaults.  Exit codes: 0 success, 1 validation
failure, 2 configuration error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path
from typing import Dict, List, Optional

from .config import ConfigBundle, ConfigError, parse_config
from .coverage import dl_success_probability, ul_success_probability
from .deployment import RngStream, generate_deployment, snapshot_csv
from .latency import latency_duca, latency_duda
from .montecarlo import run_campaign, run_synthetic_campaign, samples_csv
from .params import LinkSuccess
from .sweep import SweepRow, rows_to_csv, run_sweep
from .validation import run_validation

EXIT_OK = 0
EXIT_VALIDATION_FAILURE = 1
EXIT_CONFIG_ERROR = 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dudasim",
        description="Two-way latency of coupled vs. decoupled TDD access: "
        "closed forms, success probabilities, Monte Carlo.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("analytic", "closed-form latencies at analytic success probabilities"),
        ("simulate", "Monte Carlo campaigns at the configured parameters"),
        ("sweep", "parameter sweep to CSV"),
        ("validate", "run the invariant suite"),
        ("snapshot", "emit one deployment realization as CSV"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", type=Path, help="key=value configuration file")
        p.add_argument("--seed", type=int, help="campaign seed")
        p.add_argument("--iterations", type=int, help="Monte Carlo iterations")
        p.add_argument("--scheme", choices=("duda", "duca", "both"), help="scheme selection")
        p.add_argument("--mode", choices=("analytic", "simulate", "both"), help="sweep mode")
        p.add_argument(
            "--sweep", metavar="VAR:START:STOP:STEPS", help="sweep specification"
        )
        p.add_argument("--out", type=Path, help="output CSV path (default stdout)")
        p.add_argument("--noise", choices=("on", "off"), help="include thermal noise")
        p.add_argument(
            "--timing", action="store_true",
            help="append a wall_time_ms column (breaks byte-identical reruns)",
        )
        if name == "simulate":
            p.add_argument(
                "--samples-out", type=Path, help="write raw per-trial samples CSV"
            )
    return parser


def _overrides(args: argparse.Namespace) -> Dict[str, str]:
    over: Dict[str, str] = {}
    if args.seed is not None:
        over["seed"] = str(args.seed)
    if args.iterations is not None:
        over["iterations"] = str(args.iterations)
    if args.scheme is not None:
        over["scheme"] = args.scheme
    if args.mode is not None:
        over["mode"] = args.mode
    if args.noise is not None:
        over["noise"] = args.noise
    if args.sweep is not None:
        parts = args.sweep.split(":")
        if len(parts) != 4:
            raise ConfigError("--sweep expects VAR:START:STOP:STEPS")
        over["sweep_variable"] = parts[0]
        over["sweep_start"] = parts[1]
        over["sweep_stop"] = parts[2]
        over["sweep_steps"] = parts[3]
    return over


def _load_bundle(args: argparse.Namespace) -> ConfigBundle:
    text = ""
    if args.config is not None:
        try:
            text = args.config.read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config file: {exc}")
    bundle = parse_config(text, _overrides(args))
    if args.timing:
        bundle = replace(bundle, emit_timing=True)
    return bundle


def _emit(text: str, out: Optional[Path]) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)


def _cmd_analytic(args, bundle: ConfigBundle) -> int:
    link = bundle.forced_link
    if link is None:
        link = LinkSuccess(
            ul_success_probability(bundle.params, include_noise=bundle.include_noise).value,
            dl_success_probability(bundle.params, include_noise=bundle.include_noise).value,
        )
    lines = ["scheme,rho_u,rho_d,protocol,retransmission,fundamental,total"]
    for scheme in bundle.sweep.schemes:
        b = latency_duda(bundle.timing, link) if scheme == "duda" else latency_duca(bundle.timing, link)
        lines.append(
            f"{scheme},{link.rho_u:.9g},{link.rho_d:.9g},"
            f"{b.protocol:.9g},{b.retransmission:.9g},{b.fundamental:.9g},{b.total:.9g}"
        )
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def _cmd_simulate(args, bundle: ConfigBundle) -> int:
    rows: List[SweepRow] = []
    raw_parts: List[str] = []
    for scheme in bundle.sweep.schemes:
        cfg = replace(bundle.trial, scheme=scheme)
        if bundle.forced_link is not None:
            stats = run_synthetic_campaign(
                bundle.forced_link.rho_u, bundle.forced_link.rho_d,
                bundle.timing, scheme, cfg.iterations, cfg.seed, cfg.max_attempts,
            )
        else:
            stats = run_campaign(cfg)
        rows.append(
            SweepRow(
                variable="s_u", value=bundle.timing.s_u, scheme=scheme, mode="simulate",
                latency_mean=stats.mean, latency_ci95=stats.ci95_half_width,
                rho_u=stats.empirical_rho_u, rho_d=stats.empirical_rho_d,
                censored_fraction=stats.censored_fraction,
            )
        )
        if getattr(args, "samples_out", None) is not None:
            raw_parts.append(samples_csv(stats))
    _emit(rows_to_csv(rows, bundle.emit_timing), args.out)
    if raw_parts and args.samples_out is not None:
        header, *_ = raw_parts[0].splitlines()
        body = [header]
        for part in raw_parts:
            body.extend(part.splitlines()[1:])
        args.samples_out.write_text("\n".join(body) + "\n")
    return EXIT_OK


def _cmd_sweep(args, bundle: ConfigBundle) -> int:
    rows = run_sweep(bundle.sweep, bundle)
    _emit(rows_to_csv(rows, bundle.emit_timing), args.out)
    return EXIT_OK


def _cmd_validate(args, bundle: ConfigBundle) -> int:
    report = run_validation(bundle)
    _emit(report.text(), args.out)
    return EXIT_OK if report.passed else EXIT_VALIDATION_FAILURE


def _cmd_snapshot(args, bundle: ConfigBundle) -> int:
    scheme = bundle.sweep.schemes[0]
    dep, _ = generate_deployment(
        bundle.params.lambda_b,
        bundle.params.delta,
        bundle.trial.window_half_width,
        RngStream(bundle.trial.seed, 0),
        scheme=scheme,
        typical_mode=bundle.trial.typical_mode,
    )
    _emit(snapshot_csv(dep), args.out)
    return EXIT_OK


_COMMANDS = {
    "analytic": _cmd_analytic,
    "simulate": _cmd_simulate,
    "sweep": _cmd_sweep,
    "validate": _cmd_validate,
    "snapshot": _cmd_snapshot,
}


def main(argv: Optional[List[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        bundle = _load_bundle(args)
        return _COMMANDS[args.command](args, bundle)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR


if __name__ == "__main__":
    sys.exit(main())

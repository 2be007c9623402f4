"""Command-line front end.

Subcommands map one-to-one onto the analysis pipeline::

    waveflow simulate    --scenario FILE --out DIR   trace-distance sweeps
    waveflow intensity   --scenario FILE --out DIR   guide-population maps
    waveflow blp         --scenario FILE --out DIR   backflow measure
    waveflow extremal    --scenario FILE --out DIR   best/worst-case pairs
    waveflow swap-search --scenario FILE --out DIR   transfer-config search

Every run validates its inputs before computing, writes CSV (12
significant digits, LF endings) plus a manifest JSON, and renders a PNG
figure next to the data. Exit codes: 0 success, 2 invalid config or
scenario, 3 numeric failure, 4 I/O error.
"""

from __future__ import annotations

import argparse
import re
import sys
from dataclasses import asdict
from pathlib import Path

from . import __version__
from .analysis import blp_measure, extremal_pairs, search_swap_config
from .configio import Scenario, format_array_config, load_scenario, load_search_bounds
from .dynamics import Propagator, intensity_profile, simulate_pair
from .errors import (
    ConfigInvalid,
    ConvergenceFailure,
    DimensionMismatch,
    EmptyCurve,
    InvalidGamma,
    NonDiagonalConfig,
    NonHermitianInput,
    NonMonotoneTimeGrid,
    NonOrthogonalEnvPair,
    NonPhysicalBloch,
)
from .output import ManifestWriter, config_hash, fmt, write_csv, write_json
from .plots import plot_blp, plot_distance_curves, plot_extremal, plot_intensity
from .presets import named_configs
from .quantum import guide_ket

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_IO = 4

_CONFIG_ERRORS = (
    ConfigInvalid,
    NonDiagonalConfig,
    DimensionMismatch,
    NonPhysicalBloch,
    NonOrthogonalEnvPair,
    EmptyCurve,
    NonMonotoneTimeGrid,
)
_NUMERIC_ERRORS = (ConvergenceFailure, NonHermitianInput, InvalidGamma)


def _safe_name(label: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.-]+", "_", label)


def _resolve_out(scenario_out, cli_out) -> Path:
    out = Path(cli_out) if cli_out else scenario_out
    if out is None:
        raise ConfigInvalid("no output directory: set --out or 'out' in the scenario")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _scenario_sidecar(scenario: Scenario) -> dict:
    return {
        "config_hash": config_hash(scenario.config),
        "array": scenario.config_label,
        "input": scenario.input_spec,
        "grid": {"t_min": scenario.t_min, "t_max": scenario.t_max, "steps": scenario.steps},
        "pairs": [
            {
                "label": p.label,
                "theta1": p.state1.theta, "phi1": p.state1.phi,
                "theta2": p.state2.theta, "phi2": p.state2.phi,
            }
            for p in scenario.pairs
        ],
    }


def cmd_simulate(args) -> int:
    scenario = load_scenario(args.scenario, presets=named_configs())
    out = _resolve_out(scenario.out_dir, args.out)
    manifest = ManifestWriter(out, "simulate", {"scenario": str(args.scenario)})
    ts = scenario.t_grid()
    header = ["t", "D_S", "D_E", "re_gamma", "im_gamma", "abs_gamma", "pair"]
    curves = {}
    for pair in scenario.pairs:
        records = simulate_pair(scenario.config, scenario.input_ket, pair, ts)
        rows = [
            [fmt(r.t), fmt(r.d_s), fmt(r.d_e),
             fmt(r.gamma.real), fmt(r.gamma.imag), fmt(abs(r.gamma)), r.pair_label]
            for r in records
        ]
        manifest.record(write_csv(out / f"simulate_{_safe_name(pair.label)}.csv", header, rows))
        curves[pair.label] = records
    manifest.record(Path(plot_distance_curves(curves, out / "simulate.png")))
    manifest.write(extra=_scenario_sidecar(scenario))
    return EXIT_OK


def cmd_intensity(args) -> int:
    scenario = load_scenario(args.scenario, presets=named_configs())
    out = _resolve_out(scenario.out_dir, args.out)
    manifest = ManifestWriter(
        out, "intensity", {"scenario": str(args.scenario), "pol": args.pol}
    )
    ts = scenario.t_grid()
    pols = ("H", "V") if args.pol == "both" else (args.pol,)
    header = ["t"] + [f"guide_{m}" for m in range(1, scenario.config.num_guides + 1)]
    for pol in pols:
        profile = intensity_profile(scenario.config, scenario.input_ket, pol, ts)
        rows = [[fmt(t)] + [fmt(p) for p in row] for t, row in zip(ts, profile)]
        manifest.record(write_csv(out / f"intensity_{pol}.csv", header, rows))
        manifest.record(Path(plot_intensity(ts, profile, pol, out / f"intensity_{pol}.png")))
    manifest.write(extra=_scenario_sidecar(scenario))
    return EXIT_OK


def cmd_blp(args) -> int:
    scenario = load_scenario(args.scenario, presets=named_configs())
    out = _resolve_out(scenario.out_dir, args.out)
    manifest = ManifestWriter(out, "blp", {"scenario": str(args.scenario)})
    ts = scenario.t_grid()
    curves, results = {}, {}
    for pair in scenario.pairs:
        records = simulate_pair(scenario.config, scenario.input_ket, pair, ts)
        result = blp_measure([r.t for r in records], [r.d_s for r in records], pair.label)
        payload = {
            "pair": pair.label,
            "measure": result.measure,
            "witness_intervals": [[t0, t1] for t0, t1 in result.witness_intervals],
            "num_intervals": len(result.witness_intervals),
        }
        manifest.record(write_json(out / f"blp_{_safe_name(pair.label)}.json", payload))
        curves[pair.label], results[pair.label] = records, result
    manifest.record(Path(plot_blp(curves, results, out / "blp.png")))
    manifest.write(extra=_scenario_sidecar(scenario))
    return EXIT_OK


_EXTREMAL_HEADER = (
    ["t", "best_S", "worst_S", "best_E", "worst_E"]
    + [f"{which}_{c}" for which in ("best_S", "worst_S", "best_E", "worst_E") for c in ("nx", "ny", "nz")]
)


def _extremal_rows(curves):
    rows = []
    for i in range(curves.t.size):
        row = [
            fmt(curves.t[i]),
            fmt(curves.best_s[i]), fmt(curves.worst_s[i]),
            fmt(curves.best_e[i]), fmt(curves.worst_e[i]),
        ]
        for dirs in (curves.best_s_dir, curves.worst_s_dir, curves.best_e_dir, curves.worst_e_dir):
            row.extend(fmt(c) for c in dirs[i])
        rows.append(row)
    return rows


def cmd_extremal(args) -> int:
    scenario = load_scenario(args.scenario, presets=named_configs())
    out = _resolve_out(scenario.out_dir, args.out)
    manifest = ManifestWriter(out, "extremal", {"scenario": str(args.scenario)})
    ts = scenario.t_grid()
    propagator = Propagator.from_config(scenario.config)
    curves = extremal_pairs(propagator, scenario.input_ket, ts)
    manifest.record(write_csv(out / "extremal.csv", _EXTREMAL_HEADER, _extremal_rows(curves)))
    manifest.record(Path(plot_extremal(curves, out / "extremal.png")))
    manifest.write(extra=_scenario_sidecar(scenario))
    return EXIT_OK


def cmd_swap_search(args) -> int:
    bounds = load_search_bounds(args.scenario)
    out = _resolve_out(None, args.out)
    manifest = ManifestWriter(
        out,
        "swap-search",
        {
            "scenario": str(args.scenario),
            "seed": args.seed,
            "budget": args.budget,
            "threshold": args.threshold,
        },
    )
    result = search_swap_config(
        bounds, budget=args.budget, seed=args.seed, threshold=args.threshold
    )
    comment = (
        f"found by waveflow swap-search, seed {args.seed}, budget {args.budget}\n"
        f"worst-case environment trace distance {result.report.worst_case_d_e:.6f} "
        f"at t = {result.report.t_best:.6f}"
    )
    config_text = format_array_config(result.config, comment=comment)
    config_path = out / "swap_config.cfg"
    config_path.write_text(config_text, encoding="utf-8")
    manifest.record(config_path)

    propagator = Propagator.from_config(result.config)
    phi_index = bounds.input_guide or (bounds.num_guides + 1) // 2
    curves = extremal_pairs(propagator, guide_ket(bounds.num_guides, phi_index), result.t_grid)
    manifest.record(write_csv(out / "swap_extremal.csv", _EXTREMAL_HEADER, _extremal_rows(curves)))
    manifest.record(
        Path(plot_extremal(curves, out / "swap.png", t_marker=result.report.t_best))
    )
    payload = {
        **asdict(result.report),
        "transfer_score": result.transfer_score,
        "evaluations": result.evaluations,
        "budget": result.budget,
        "budget_exhausted": result.budget_exhausted,
        "seed": result.seed,
        "config_file": config_path.name,
        "config_hash": config_hash(result.config),
        "input": f"guide {phi_index}",
    }
    manifest.record(write_json(out / "swap_report.json", payload))
    manifest.write()
    if result.budget_exhausted:
        print(
            f"budget exhausted after {result.evaluations} evaluations; "
            f"best worst-case D_E = {result.report.worst_case_d_e:.6f}",
            file=sys.stderr,
        )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="waveflow",
        description="Open-system information flow in coupled waveguide arrays.",
    )
    parser.add_argument("--version", action="version", version=f"waveflow {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--scenario", required=True, type=Path, help="scenario config file")
        p.add_argument("--out", type=Path, default=None, help="output directory")

    p_sim = sub.add_parser("simulate", help="trace-distance sweeps per test pair")
    add_common(p_sim)
    p_sim.set_defaults(func=cmd_simulate)

    p_int = sub.add_parser("intensity", help="guide-population maps per polarization")
    add_common(p_int)
    p_int.add_argument("--pol", choices=("H", "V", "both"), default="both")
    p_int.set_defaults(func=cmd_intensity)

    p_blp = sub.add_parser("blp", help="trace-distance backflow measure per pair")
    add_common(p_blp)
    p_blp.set_defaults(func=cmd_blp)

    p_ext = sub.add_parser("extremal", help="best/worst-case pairs over the Bloch sphere")
    add_common(p_ext)
    p_ext.set_defaults(func=cmd_extremal)

    p_swap = sub.add_parser("swap-search", help="search for a full state-transfer array")
    p_swap.add_argument("--scenario", required=True, type=Path, help="bounds config file")
    p_swap.add_argument("--out", type=Path, default=None, help="output directory")
    p_swap.add_argument("--seed", type=int, default=0)
    p_swap.add_argument("--budget", type=int, default=5000)
    p_swap.add_argument("--threshold", type=float, default=0.95)
    p_swap.set_defaults(func=cmd_swap_search)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _NUMERIC_ERRORS as exc:
        print(f"waveflow: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except _CONFIG_ERRORS as exc:
        print(f"waveflow: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        path = getattr(exc, "filename", None)
        where = f" ({path})" if path else ""
        print(f"waveflow: I/O error{where}: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())

"""Batch command-line frontend.

Subcommands: simulate, optimize, sensitivity, scenario, redistribute,
synth.  Runs are config-file first (a JSON file with per-command
sections); the common flags --preset/--seed/--out override config keys.
Every output file carries a metadata header with the artifact version,
seed, preset, and a hash of the effective configuration, and a re-run
with the same config and seed is byte-identical.

Exit codes: 0 success, 2 config error, 3 data error, 4 numeric failure.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__
from .errors import ConfigError, DataError, EvaluationError
from .sd_core import POLICY_FIELDS, ModelCoefficients, PolicyVector, simulate
from .moea import EAConfig, evolve
from .gsa import (
    OUTPUT_NAMES,
    MorrisResult,
    ParameterSpace,
    analyze_model,
    full_space,
    uncertainty_space,
)
from .scenario import DEFAULT_SCENARIOS, AllocationPolicy, compare_scenarios
from .flow import (
    IslandParams,
    SiteState,
    constant_schedule,
    iceland_redistribution_schedule,
    iceland_sites,
    redistribute,
)
from .dataio import (
    get_preset,
    initial_state,
    interpolate_missing,
    load_table,
    synth_dataset,
    validate_ranges,
    write_series,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_NUMERIC = 4


def _load_config(path) -> dict:
    if path is None:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}")
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path}: invalid JSON at line {e.lineno}: {e.msg}")


def _effective_config(args, command: str) -> dict:
    """Merge the file config with CLI overrides for one command."""
    raw = _load_config(args.config)
    cfg = dict(raw.get("common", {}))
    cfg.update(raw.get(command, {}))
    if args.preset is not None:
        cfg["preset"] = args.preset
    if args.seed is not None:
        cfg["seed"] = args.seed
    if args.out is not None:
        cfg["out"] = args.out
    cfg.setdefault("out", "out")
    if cfg.get("seed") is not None and int(cfg["seed"]) < 0:
        raise ConfigError("seed must be a non-negative integer")
    return cfg


def _config_hash(cfg: dict) -> str:
    hashed = {k: v for k, v in cfg.items() if k != "out"}  # path never affects results
    blob = json.dumps(hashed, sort_keys=True, default=str).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def _meta(cfg: dict, command: str) -> dict:
    return {
        "artifact": f"touropt {__version__}",
        "command": command,
        "preset": cfg.get("preset", ""),
        "seed": cfg.get("seed", ""),
        "config_hash": _config_hash(cfg),
    }


def _meta_lines(meta: dict) -> list:
    return [f"{k}: {v}" for k, v in meta.items()]


def _write_csv(path: Path, meta: dict, header, rows) -> None:
    with path.open("w", newline="", encoding="utf-8") as fh:
        for line in _meta_lines(meta):
            fh.write(f"# {line}\n")
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)


def _write_json(path: Path, meta: dict, payload: dict) -> None:
    doc = {"meta": meta}
    doc.update(payload)
    with path.open("w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _resolve_base(cfg: dict):
    """Dataset + coefficients + bounds + reference policy from the config.

    Exactly one of ``preset`` / ``dataset`` must be given; a dataset path
    still needs a preset-like region for coefficients, so ``preset`` then
    names the coefficient set while the series come from the file.
    """
    preset_name = cfg.get("preset")
    dataset = cfg.get("dataset")
    if preset_name is None and dataset is None:
        raise ConfigError("config needs a 'preset' or a 'dataset' path")
    preset = get_preset(preset_name) if preset_name else get_preset("juneau")
    seed = int(cfg.get("seed", 0))
    if dataset is not None and preset_name is not None and cfg.get("synthetic"):
        raise ConfigError("give either 'dataset' or synthetic 'preset' data, not both")
    if dataset is not None:
        table = load_table(dataset, cfg.get("column_map"))
        exog = interpolate_missing(table, cfg.get("column_defaults"))
    else:
        exog = synth_dataset(preset, seed)
    coeffs = preset.coefficients
    if cfg.get("coefficients"):
        unknown = set(cfg["coefficients"]) - set(ModelCoefficients.__dataclass_fields__)
        if unknown:
            raise ConfigError(f"unknown coefficients {sorted(unknown)}")
        coeffs = replace(coeffs, **{k: float(v) for k, v in cfg["coefficients"].items()})
        coeffs.validate()
    init = initial_state(preset, exog, seed)
    return preset, exog, coeffs, init


def _resolve_policy(cfg: dict, preset) -> PolicyVector:
    choice = cfg.get("policy")
    if choice is None:
        return preset.reference_policy
    if isinstance(choice, dict):
        unknown = set(choice) - set(POLICY_FIELDS)
        if unknown:
            raise ConfigError(f"unknown policy fields {sorted(unknown)}")
        return replace(preset.reference_policy,
                       **{k: float(v) for k, v in choice.items()})
    if isinstance(choice, (list, tuple)) and len(choice) == len(POLICY_FIELDS):
        return PolicyVector.from_array(choice)
    raise ConfigError("policy must be a field map or a 7-element list")


def _require_seed(cfg: dict, command: str) -> int:
    if cfg.get("seed") is None:
        raise ConfigError(f"{command} requires a seed (--seed or config)")
    return int(cfg["seed"])


def cmd_simulate(args) -> int:
    cfg = _effective_config(args, "simulate")
    preset, exog, coeffs, init = _resolve_base(cfg)
    policy = _resolve_policy(cfg, preset)
    out = Path(cfg["out"])
    out.mkdir(parents=True, exist_ok=True)
    traj, objs = simulate(policy, exog, coeffs, init)
    meta = _meta(cfg, "simulate")
    rows = []
    for i, year in enumerate(traj.years):
        st = traj.states[i]
        trans = i - 1  # diagnostics belong to the transition into this year
        diag = [traj.r_tourism[trans], traj.r_gov_total[trans],
                traj.exp_env[trans], traj.exp_gov_total[trans],
                traj.r_net[trans], traj.f_price[trans], traj.f_glacier[trans],
                traj.f_attraction[trans]] if i > 0 else [""] * 8
        rows.append([int(year), repr(st.visitors), repr(st.env_index),
                     repr(st.satisfaction), repr(st.net_revenue_cum)]
                    + [repr(v) if v != "" else "" for v in diag])
    _write_csv(out / "trajectory.csv", meta,
               ["year", "visitors", "env_index", "satisfaction",
                "net_revenue_cum", "r_tourism", "r_gov_total", "exp_env",
                "exp_gov_total", "r_net", "f_price", "f_glacier",
                "f_attraction"], rows)
    _write_json(out / "objectives.json", meta,
                {"f1": objs.revenue, "f2": objs.environment,
                 "f3": objs.satisfaction})
    print(f"simulate: wrote {out / 'trajectory.csv'} and {out / 'objectives.json'}")
    return EXIT_OK


def cmd_optimize(args) -> int:
    cfg = _effective_config(args, "optimize")
    seed = _require_seed(cfg, "optimize")
    preset, exog, coeffs, init = _resolve_base(cfg)
    ea_cfg = cfg.get("ea", {})
    config = EAConfig(
        population_size=int(ea_cfg.get("population_size", preset.ea_population)),
        generations=int(ea_cfg.get("generations", preset.ea_generations)),
        eta_c=float(ea_cfg.get("eta_c", 15.0)),
        eta_m=float(ea_cfg.get("eta_m", 20.0)),
        mutation_prob=ea_cfg.get("mutation_prob"),
        crossover_prob=float(ea_cfg.get("crossover_prob", 0.9)),
        seed=seed,
        hv_window=int(ea_cfg.get("hv_window", 10)),
        hv_rel_tol=float(ea_cfg.get("hv_rel_tol", 1e-4)),
    )

    def problem(genome):
        policy = PolicyVector.from_array(genome)
        _, objs = simulate(policy, exog, coeffs, init)
        return objs

    result = evolve(problem, preset.bounds.lows(), preset.bounds.highs(), config)
    front = result.front
    if not front.check_nondominated():
        raise EvaluationError("front verification failed: dominated pair present")
    out = Path(cfg["out"])
    out.mkdir(parents=True, exist_ok=True)
    meta = _meta(cfg, "optimize")
    order = np.argsort([-ind.objectives[0] for ind in front.individuals], kind="stable")
    rows = []
    for i in order:
        ind = front.individuals[int(i)]
        rows.append([repr(float(g)) for g in ind.genome]
                    + [repr(float(v)) for v in ind.objectives])
    _write_csv(out / "pareto_front.csv", meta,
               list(POLICY_FIELDS) + list(OUTPUT_NAMES), rows)
    _write_csv(out / "hypervolume.csv", meta, ["generation", "hypervolume"],
               [[g, repr(float(hv))] for g, hv in enumerate(result.hypervolume_log)])
    objs = front.objective_array()[order]
    _write_json(out / "pareto_bubble.json", meta, {
        "x": [float(v) for v in objs[:, 0]],
        "y": [float(v) for v in objs[:, 1]],
        "color": [float(v) for v in objs[:, 2]],
        "x_label": "f1",
        "y_label": "f2",
        "color_label": "f3",
    })
    print(f"optimize: {len(rows)} front members, "
          f"{result.generations_run} generations, wrote 3 files to {out}")
    return EXIT_OK


def _resolve_space(cfg: dict, preset, policy) -> ParameterSpace:
    choice = cfg.get("space", "full")
    if isinstance(choice, dict):
        return ParameterSpace.from_dict(
            {k: (float(v[0]), float(v[1])) for k, v in choice.items()})
    if choice == "full":
        return full_space(preset.bounds, preset.coefficients)
    if choice == "policy":
        return ParameterSpace.from_dict(
            {f: tuple(getattr(preset.bounds, f)) for f in POLICY_FIELDS})
    if choice == "policy_uncertainty":
        return uncertainty_space(policy, preset.bounds,
                                 rel=float(cfg.get("uncertainty_rel", 0.2)))
    raise ConfigError(f"unknown space {choice!r}")


def cmd_sensitivity(args) -> int:
    cfg = _effective_config(args, "sensitivity")
    seed = _require_seed(cfg, "sensitivity")
    method = cfg.get("method", "morris")
    if method not in ("morris", "sobol"):
        raise ConfigError(f"unknown method {method!r}; use morris or sobol")
    output = cfg.get("output", "all")
    if output not in OUTPUT_NAMES + ("all",):
        raise ConfigError(f"output must be f1, f2, f3 or all, not {output!r}")
    preset, exog, coeffs, init = _resolve_base(cfg)
    policy = _resolve_policy(cfg, preset)
    space = _resolve_space(cfg, preset, policy)
    report = analyze_model(
        space, exog, coeffs, policy, init, method=method, output=output,
        morris_r=int(cfg.get("morris_r", 20)),
        morris_levels=int(cfg.get("morris_levels", 4)),
        sobol_n=int(cfg.get("sobol_n", 512)),
        n_boot=int(cfg.get("bootstrap", 200)),
        seed=seed,
    )
    out = Path(cfg["out"])
    out.mkdir(parents=True, exist_ok=True)
    meta = _meta(cfg, "sensitivity")
    for name, table in sorted(report.tables.items()):
        if isinstance(table, MorrisResult):
            _write_csv(out / f"morris_{name}.csv", meta,
                       ["parameter", "mu_star", "sigma"],
                       [[p, repr(m), repr(s)] for p, m, s in table.ranked()])
        else:
            # ci_low/ci_high bracket the total-effect index used for ranking
            _write_csv(out / f"sobol_{name}.csv", meta,
                       ["parameter", "s1", "st", "ci_low", "ci_high"],
                       [[p, repr(s1), repr(st), repr(st - ct), repr(st + ct)]
                        for p, s1, st, _, ct in table.ranked()])
    _write_json(out / "sensitivity_matrix.json", meta, {
        "method": report.method,
        "sampler": "pseudorandom",
        "outputs": list(report.outputs),
        "rows": report.matrix_records(),
    })
    print(f"sensitivity: {method} over {len(space)} parameters, wrote "
          f"{len(report.tables)} table(s) and the matrix to {out}")
    return EXIT_OK


def cmd_scenario(args) -> int:
    cfg = _effective_config(args, "scenario")
    preset, exog, coeffs, init = _resolve_base(cfg)
    policy = _resolve_policy(cfg, preset)
    choice = cfg.get("scenarios", "default")
    if choice == "default":
        allocs = list(DEFAULT_SCENARIOS)
    elif isinstance(choice, list) and choice:
        try:
            allocs = [AllocationPolicy(s["name"], float(s["theta_env"]),
                                       float(s["theta_infra"]),
                                       float(s["theta_community"]),
                                       float(s["theta_marketing"])) for s in choice]
        except (KeyError, TypeError, ValueError) as e:
            raise ConfigError(f"bad scenario entry: {e}")
    else:
        raise ConfigError("scenarios must be 'default' or a non-empty list")
    comparison = compare_scenarios(allocs, policy, exog, coeffs, init,
                                   preset.feedback)
    out = Path(cfg["out"])
    out.mkdir(parents=True, exist_ok=True)
    meta = _meta(cfg, "scenario")
    _write_csv(out / "scenario_timeseries.csv", meta,
               ["scenario", "year", "variable", "value"],
               [[name, year, var, repr(float(val))]
                for name, year, var, val in comparison["rows"]])
    _write_json(out / "scenario_summary.json", meta,
                {"scenarios": comparison["summary"]})
    print(f"scenario: compared {len(allocs)} scenarios, wrote 2 files to {out}")
    return EXIT_OK


def _resolve_sites(cfg: dict):
    choice = cfg.get("sites", "iceland7")
    if choice == "iceland7":
        return iceland_sites()
    if isinstance(choice, list) and choice:
        try:
            return [SiteState(**{k: (v if k == "name" else float(v))
                                 for k, v in s.items()}) for s in choice]
        except TypeError as e:
            raise ConfigError(f"bad site entry: {e}")
    raise ConfigError("sites must be 'iceland7' or a non-empty list")


def cmd_redistribute(args) -> int:
    cfg = _effective_config(args, "redistribute")
    sites = _resolve_sites(cfg)
    y0, y1 = cfg.get("years", [2024, 2033])
    years = list(range(int(y0), int(y1) + 1))
    if not years:
        raise ConfigError("empty year range")
    params = IslandParams(**{k: float(v)
                             for k, v in cfg.get("island_params", {}).items()})
    sched_choice = cfg.get("schedule", "redistribution")
    if sched_choice == "redistribution":
        schedule = iceland_redistribution_schedule(sites, years)
    elif sched_choice == "constant":
        schedule = constant_schedule(sites, years)
    elif isinstance(sched_choice, dict):
        schedule = sched_choice
    else:
        raise ConfigError("schedule must be 'redistribution', 'constant', or a map")
    result = redistribute(sites, params, schedule, years)
    out = Path(cfg["out"])
    out.mkdir(parents=True, exist_ok=True)
    meta = _meta(cfg, "redistribute")
    rows = []
    for i, name in enumerate(result.site_names):
        share_total = result.visitors[:, :].sum(axis=0)
        for t, year in enumerate(result.years):
            rows.append([name, year, repr(float(result.visitors[i, t])),
                         repr(float(result.env[i, t])),
                         repr(float(result.sat[i, t])),
                         repr(float(result.visitors[i, t] / share_total[t]))])
    _write_csv(out / "flow_sites.csv", meta,
               ["site", "year", "visitors", "env_index", "satisfaction", "share"],
               rows)
    _write_json(out / "flow_final.json", meta, {
        "final_year": result.years[-1],
        "shares": result.final_shares(),
        "visitors": {name: float(result.visitors[i, -1])
                     for i, name in enumerate(result.site_names)},
    })
    print(f"redistribute: {len(sites)} sites over {len(years)} years, "
          f"wrote 2 files to {out}")
    return EXIT_OK


def cmd_synth(args) -> int:
    cfg = _effective_config(args, "synth")
    if cfg.get("preset") is None:
        raise ConfigError("synth requires a preset")
    preset = get_preset(cfg["preset"])
    seed = int(cfg.get("seed", 0))
    series = synth_dataset(preset, seed)
    warnings = validate_ranges(series, preset.envelope)
    out = Path(cfg["out"])
    out.mkdir(parents=True, exist_ok=True)
    meta = _meta(cfg, "synth")
    write_series(series, out / "dataset.csv", header_lines=_meta_lines(meta))
    for w in warnings:
        print(f"warning: {w}", file=sys.stderr)
    print(f"synth: wrote {out / 'dataset.csv'} ({len(series)} years, "
          f"{len(warnings)} warnings)")
    return EXIT_OK


COMMANDS = {
    "simulate": cmd_simulate,
    "optimize": cmd_optimize,
    "sensitivity": cmd_sensitivity,
    "scenario": cmd_scenario,
    "redistribute": cmd_redistribute,
    "synth": cmd_synth,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="touropt",
        description="Batch runner for the tourism policy model.")
    parser.add_argument("--version", action="version",
                        version=f"touropt {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="JSON config file with per-command sections")
        p.add_argument("--out", help="output directory (default: out)")
        p.add_argument("--seed", type=int, help="random seed")
        p.add_argument("--preset", choices=["juneau", "iceland"],
                       help="region preset")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except DataError as e:
        print(f"data error: {e}", file=sys.stderr)
        return EXIT_DATA
    except (EvaluationError, ValueError, ArithmeticError) as e:
        print(f"numeric failure: {e}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

A scenario is an INI file::

    [inputs]
    weather = weather.csv          ; paths are relative to this file
    traffic = traffic.csv
    turbine_w500 = w500.csv        ; optional, sidecar .ini next to it
    turbine_w1000 = w1000.csv
    start_hour = 0                 ; optional reduced horizon
    hours = 8760

    [scenario]
    env = suburban
    a_eff = 0.9
    provision_level = 0.9          ; optional, needs traffic samples

    [radio]      f_c, B, B_tot, N0, P_t
    [airframe]   any airframe field, e.g. v_hov_max
    [prices]     pv, w500, w1000, cell, uav, budget
    [search]     d_lb, d_ub, step, max_pv, max_w500, max_w1000, max_cells, workers

Command-line flags override the file. Exit codes: 0 feasible,
2 coverage-infeasible, 3 budget-infeasible, 4 input error.
"""
from __future__ import annotations

import argparse
import configparser
import csv
import dataclasses
import hashlib
import io
import json
import math
import sys
import warnings
from pathlib import Path

from .channel import ENVIRONMENTS, RadioParams
from .errors import SizingError
from .harvest import default_turbine_curves, load_turbine_curve
from .ingest import HOURS_PER_YEAR, load_traffic_profile, parse_weather_csv, provision_quantile
from .sizing import (Prices, Scenario, SearchBounds, eeac, gss_candidates, gss_optimize, scenario_mel, solve_many,
                     sweep_radii)
from .storage import GroundBattery, simulate_horizon
from .uav_power import AirframeParams

EXIT_OK = 0
EXIT_COVERAGE = 2
EXIT_BUDGET = 3
EXIT_INPUT = 4

_RADIO_KEYS = ("f_c", "B", "B_tot", "N0", "P_t")
_PRICE_KEYS = {"pv": "pv_eur", "w500": "w500_eur", "w1000": "w1000_eur", "cell": "cell_eur",
               "uav": "uav_eur", "budget": "budget_eur"}
_BOUND_KEYS = ("max_pv", "max_w500", "max_w1000", "max_cells")


class InputError(Exception):
    """Bad command line or scenario file."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


@dataclasses.dataclass
class RunConfig:
    """Fully resolved settings of one run (file contents plus flag overrides)."""

    base: Path
    weather: Path | None = None
    traffic: Path | None = None
    turbine_w500: Path | None = None
    turbine_w1000: Path | None = None
    start_hour: int = 0
    hours: int = HOURS_PER_YEAR
    env: str = "suburban"
    provision_level: float | None = None
    radio: dict = dataclasses.field(default_factory=dict)
    airframe: dict = dataclasses.field(default_factory=dict)
    prices: dict = dataclasses.field(default_factory=dict)
    d_lb: float = 0.0
    d_ub: float = math.inf
    step: float = 1.0
    bounds: dict = dataclasses.field(default_factory=dict)
    workers: int = 1

    def radio_params(self) -> RadioParams:
        return RadioParams(**self.radio)

    def airframe_params(self) -> AirframeParams:
        return AirframeParams(**self.airframe)

    def price_table(self) -> Prices:
        return Prices(**self.prices)

    def search_bounds(self) -> SearchBounds:
        return SearchBounds(**self.bounds)


def _num(sec, key, cast=float):
    try:
        return cast(sec[key])
    except ValueError:
        raise InputError(f"[{sec.name}] {key} = {sec[key]!r} is not a valid {cast.__name__}") from None


def read_config(path) -> RunConfig:
    path = Path(path)
    cp = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    cp.optionxform = str
    try:
        with open(path) as fh:
            cp.read_file(fh)
    except FileNotFoundError:
        raise InputError(f"scenario file not found: {path}") from None
    except configparser.Error as exc:
        raise InputError(f"{path}: {exc}") from None
    cfg = RunConfig(base=path.resolve().parent)
    if cp.has_section("inputs"):
        s = cp["inputs"]
        for key in ("weather", "traffic", "turbine_w500", "turbine_w1000"):
            if key in s:
                setattr(cfg, key, (cfg.base / s[key]).resolve())
        if "start_hour" in s:
            cfg.start_hour = _num(s, "start_hour", int)
        if "hours" in s:
            cfg.hours = _num(s, "hours", int)
    if cp.has_section("scenario"):
        s = cp["scenario"]
        cfg.env = s.get("env", cfg.env).strip().lower()
        if "a_eff" in s:
            cfg.radio["A_eff"] = _num(s, "a_eff")
        if "provision_level" in s:
            cfg.provision_level = _num(s, "provision_level")
    if cp.has_section("radio"):
        for key, _ in cp.items("radio"):
            if key not in _RADIO_KEYS:
                raise InputError(f"[radio] unknown key {key!r}")
            cfg.radio[key] = _num(cp["radio"], key)
    if cp.has_section("airframe"):
        names = {f.name: f.type for f in dataclasses.fields(AirframeParams)}
        for key, _ in cp.items("airframe"):
            if key not in names:
                raise InputError(f"[airframe] unknown key {key!r}")
            if key == "relative_density":
                cfg.airframe[key] = cp["airframe"].getboolean(key)
            else:
                cfg.airframe[key] = _num(cp["airframe"], key, int if key == "N_R" else float)
    if cp.has_section("prices"):
        for key, _ in cp.items("prices"):
            if key not in _PRICE_KEYS:
                raise InputError(f"[prices] unknown key {key!r}")
            cfg.prices[_PRICE_KEYS[key]] = _num(cp["prices"], key)
    if cp.has_section("search"):
        s = cp["search"]
        for key, _ in cp.items("search"):
            if key in ("d_lb", "d_ub", "step"):
                setattr(cfg, key, _num(s, key))
            elif key in _BOUND_KEYS:
                cfg.bounds[key] = _num(s, key, int)
            elif key == "workers":
                cfg.workers = _num(s, key, int)
            else:
                raise InputError(f"[search] unknown key {key!r}")
    return cfg


def apply_flags(cfg: RunConfig, args) -> RunConfig:
    if args.budget is not None:
        cfg.prices["budget_eur"] = args.budget
    if args.aeff is not None:
        cfg.radio["A_eff"] = args.aeff
    if args.env is not None:
        cfg.env = args.env
    if args.dlb is not None:
        cfg.d_lb = args.dlb
    if args.dub is not None:
        cfg.d_ub = args.dub
    if args.step is not None:
        cfg.step = args.step
    if args.provision_level is not None:
        cfg.provision_level = args.provision_level
    return cfg


def _sha256(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def build_scenario(cfg: RunConfig) -> Scenario:
    if cfg.env not in ENVIRONMENTS:
        raise InputError(f"unknown environment {cfg.env!r}; choose from {sorted(ENVIRONMENTS)}")
    if cfg.weather is None or cfg.traffic is None:
        raise InputError("scenario needs [inputs] weather and traffic")
    trace = parse_weather_csv(cfg.weather)
    if cfg.start_hour % 24 or cfg.start_hour < 0 or cfg.hours < 24:
        raise InputError("start_hour must be a non-negative multiple of 24 and hours at least 24")
    if (cfg.start_hour, cfg.hours) != (0, len(trace)):
        trace = trace.window(cfg.start_hour, cfg.hours)
        if len(trace) != cfg.hours:
            raise InputError(f"window of {cfg.hours} h from hour {cfg.start_hour} runs past the trace")
    traffic = load_traffic_profile(cfg.traffic)
    if cfg.provision_level is not None:
        traffic = provision_quantile(traffic, cfg.provision_level)
    curves = default_turbine_curves()
    for kind, p in (("W500", cfg.turbine_w500), ("W1000", cfg.turbine_w1000)):
        if p is not None:
            curves[kind] = load_turbine_curve(p, kind=kind)
    return Scenario(trace=trace, traffic=traffic, env=ENVIRONMENTS[cfg.env], radio=cfg.radio_params(),
                    airframe=cfg.airframe_params(), curves=curves, prices=cfg.price_table())


def resolved(cfg: RunConfig) -> dict:
    """JSON-ready echo of every setting, with input file digests."""
    files = {}
    for key in ("weather", "traffic", "turbine_w500", "turbine_w1000"):
        p = getattr(cfg, key)
        files[key] = None if p is None else {"path": str(p), "sha256": _sha256(p) if p.exists() else None}
    return {
        "inputs": files,
        "start_hour": cfg.start_hour,
        "hours": cfg.hours,
        "env": dataclasses.asdict(ENVIRONMENTS[cfg.env]) if cfg.env in ENVIRONMENTS else cfg.env,
        "provision_level": cfg.provision_level,
        "radio": dataclasses.asdict(cfg.radio_params()),
        "airframe": dataclasses.asdict(cfg.airframe_params()),
        "prices": dataclasses.asdict(cfg.price_table()),
        "search": {"d_lb": cfg.d_lb, "d_ub": _finite_or_none(cfg.d_ub), "step": cfg.step,
                   **dataclasses.asdict(cfg.search_bounds())},
    }


def _finite_or_none(x):
    return x if math.isfinite(x) else None


def record_dict(rec) -> dict:
    c = rec.config
    return {
        "D_max_m": c.D_max,
        "n_pv": c.n_pv, "n_w500": c.n_w500, "n_w1000": c.n_w1000, "n_cell": c.n_cell, "n_uav": c.n_uav,
        "cost_eur": {"F_PV": c.ledger.F_PV, "F_WT": c.ledger.F_WT, "F_E": c.ledger.F_E,
                     "F_UAV": c.ledger.F_UAV, "F": c.ledger.F},
        "objective_m2_per_eur": rec.objective,
        "eeac_m2_per_wh": rec.eeac,
        "min_reserve_wh": rec.min_reserve_wh,
        "binding": rec.binding,
        "binding_hour": rec.binding_hour,
    }


def _dump_json(obj, path: Path) -> None:
    path.write_text(json.dumps(obj, sort_keys=True, indent=2, allow_nan=False) + "\n")


def _write_rows(path: Path | None, header, rows) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    if path is None:
        sys.stdout.write(buf.getvalue())
    else:
        path.write_text(buf.getvalue())


def _prepare(args):
    cfg = apply_flags(read_config(args.scenario), args)
    scn = build_scenario(cfg)
    out = Path(args.out) if args.out else None
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
    return cfg, scn, out


def cmd_size(args) -> int:
    cfg, scn, out = _prepare(args)
    res = gss_optimize(scn, cfg.d_lb, cfg.d_ub, cfg.step, None, cfg.search_bounds(), cfg.workers)
    report = {
        "status": res.status,
        "message": res.message,
        "best": None if res.best is None else record_dict(res.best),
        "ranked": [record_dict(r) for r in res.records],
        "swept_radii_m": [float(d) for d in res.d_values],
        "candidate_radii_m": [float(res.d_values[i]) for i in res.candidates],
        "scenario": resolved(cfg),
    }
    out = out or Path(".")
    if args.format == "csv":
        _write_rows(out / "ranked.csv", ["D_max_m", "objective_m2_per_eur", "F_eur", "n_pv", "n_w500", "n_w1000",
                                         "n_cell", "n_uav"],
                    [[r.config.D_max, r.objective, r.config.F, r.config.n_pv, r.config.n_w500, r.config.n_w1000,
                      r.config.n_cell, r.config.n_uav] for r in res.records])
    else:
        _dump_json(report, out / "report.json")
    if res.best is not None:
        c = res.best.config
        load = scenario_mel(scn, c.D_max)
        gen = scn.generation(c.n_pv, c.n_w500, c.n_w1000)
        h = simulate_horizon(load, gen, GroundBattery(c.n_cell, scn.cell_capacity, eps_conv=scn.eps_battery), scn.delta_t)
        times = [str(t) for t in scn.trace.time]
        _write_rows(out / "battery.csv", ["time", "generation_w", "load_wh", "stored_wh"],
                    zip(times, gen.tolist(), load.energy_wh.tolist(), h.trajectory.tolist()))
        _write_rows(out / "swarm_size.csv", ["time", "k_h"], zip(times, load.k_h.tolist()))
    if res.status == "coverage-infeasible":
        print(f"coverage-infeasible: {res.message}", file=sys.stderr)
        return EXIT_COVERAGE
    if res.status == "budget-infeasible":
        print(f"budget-infeasible: {res.message}", file=sys.stderr)
        return EXIT_BUDGET
    return EXIT_OK


SWEEP_HEADER = ["D_max_m", "eeac_m2_per_wh", "candidate", "F_eur", "objective_m2_per_eur",
                "n_pv", "n_w500", "n_w1000", "n_cell", "n_uav"]


def cmd_sweep(args) -> int:
    cfg, scn, out = _prepare(args)
    loads = sweep_radii(scn, cfg.d_lb, cfg.d_ub, cfg.step)
    ee = [eeac(l.D_max, l) for l in loads]
    cand = set(gss_candidates(ee, [l.D_max for l in loads]))
    solved = solve_many(scn, loads, None, cfg.search_bounds(), cfg.workers)
    rows = []
    for i, (load, rec) in enumerate(zip(loads, solved)):
        if rec is None:
            rows.append([load.D_max, ee[i], int(i in cand), "", "", "", "", "", "", load.n_uav])
        else:
            c = rec.config
            rows.append([c.D_max, ee[i], int(i in cand), c.F, rec.objective, c.n_pv, c.n_w500, c.n_w1000,
                         c.n_cell, c.n_uav])
    if args.format == "json":
        path = None if out is None else out / "sweep.json"
        data = {"columns": SWEEP_HEADER, "rows": rows, "scenario": resolved(cfg)}
        if path is None:
            sys.stdout.write(json.dumps(data, sort_keys=True, indent=2) + "\n")
        else:
            _dump_json(data, path)
    else:
        _write_rows(None if out is None else out / "sweep.csv", SWEEP_HEADER, rows)
    if not loads:
        print("no radius in the sweep range can be covered by any swarm", file=sys.stderr)
        return EXIT_COVERAGE
    if all(r is None for r in solved):
        print("no radius in the sweep range fits the budget", file=sys.stderr)
        return EXIT_BUDGET
    return EXIT_OK


def validate_findings(cfg: RunConfig) -> list[str]:
    findings = []
    for key in ("weather", "traffic", "turbine_w500", "turbine_w1000"):
        p = getattr(cfg, key)
        if p is None:
            if key in ("weather", "traffic"):
                findings.append(f"{key}: not given")
        elif not p.exists():
            findings.append(f"{key}: file not found: {p}")
        else:
            try:
                with warnings.catch_warnings(record=True) as caught:
                    warnings.simplefilter("always")
                    if key == "weather":
                        parse_weather_csv(p)
                    elif key == "traffic":
                        prof = load_traffic_profile(p)
                        if cfg.provision_level is not None:
                            provision_quantile(prof, cfg.provision_level)
                    else:
                        load_turbine_curve(p)
                findings.extend(f"{key}: {w.message}" for w in caught)
            except (SizingError, OSError) as exc:
                findings.append(f"{key}: {exc}")
    if cfg.env not in ENVIRONMENTS:
        findings.append(f"env: unknown environment {cfg.env!r}")
    for label, build in (("radio", cfg.radio_params), ("airframe", cfg.airframe_params),
                         ("prices", cfg.price_table), ("search", cfg.search_bounds)):
        try:
            obj = build()
        except (SizingError, TypeError, ValueError) as exc:
            findings.append(f"{label}: {exc}")
            continue
        if label == "radio" and not obj.reuse_ok:
            findings.append(f"radio: B_tot = {obj.B_tot:g} Hz is below 3 B = {3 * obj.B:g} Hz; frequency reuse fails")
        if label == "prices" and any(v < 0 for v in dataclasses.asdict(obj).values()):
            findings.append("prices: negative price or budget")
        if label == "search" and any(v is not None and v < 0 for v in dataclasses.asdict(obj).values()):
            findings.append("search: negative count bound")
    if cfg.step <= 0 or cfg.d_lb < 0 or cfg.d_ub < cfg.d_lb:
        findings.append(f"search: need step > 0 and 0 <= d_lb <= d_ub (got {cfg.step}, {cfg.d_lb}, {cfg.d_ub})")
    if cfg.provision_level is not None and not 0 < cfg.provision_level < 1:
        findings.append(f"provision_level: {cfg.provision_level} outside (0, 1)")
    if cfg.start_hour % 24 or cfg.start_hour < 0 or cfg.hours < 24:
        findings.append("inputs: start_hour must be a non-negative multiple of 24 and hours at least 24")
    return findings


def cmd_validate(args) -> int:
    try:
        cfg = apply_flags(read_config(args.scenario), args)
    except InputError as exc:
        print(f"finding: {exc}")
        return EXIT_OK
    findings = validate_findings(cfg)
    for f in findings:
        print(f"finding: {f}")
    if not findings:
        print("ok")
    try:
        echo = resolved(cfg)
    except (SizingError, TypeError, ValueError):
        echo = {"radio": cfg.radio, "airframe": cfg.airframe, "prices": cfg.prices, "bounds": cfg.bounds}
    print(json.dumps(echo, sort_keys=True, indent=2, default=str))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--scenario", required=True, help="scenario INI file")
    common.add_argument("--budget", type=float, help="total budget (EUR)")
    common.add_argument("--aeff", type=float, help="antenna efficiency in (0, 1]")
    common.add_argument("--env", choices=sorted(ENVIRONMENTS))
    common.add_argument("--dlb", type=float, help="smallest radius (m)")
    common.add_argument("--dub", type=float, help="largest radius (m)")
    common.add_argument("--step", type=float, help="radius step (m)")
    common.add_argument("--provision-level", type=float, help="traffic quantile in (0, 1)")
    common.add_argument("--out", help="output directory")
    common.add_argument("--format", choices=("json", "csv"), help="json for size, csv for sweep by default")
    p = _Parser(prog="uavsizing", description="Size a renewable-powered UAV relay site.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("size", parents=[common], help="best system and ranked alternatives")
    sub.add_parser("sweep", parents=[common], help="per-radius efficiency and cost table")
    sub.add_parser("validate", parents=[common], help="check inputs and echo parameters")
    return p


_COMMANDS = {"size": cmd_size, "sweep": cmd_sweep, "validate": cmd_validate}


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        return _COMMANDS[args.command](args)
    except (InputError, SizingError, OSError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

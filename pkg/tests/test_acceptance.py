"""Acceptance criteria, one test each, at their stated tolerances.

Every test appends a PASS/FAIL line that is printed in the terminal summary.
Run on its own with ``pytest tests/test_acceptance.py -v`` or
``python tests/test_acceptance.py``.
"""
import json
import math
import sys
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from uavsizing.channel import SUBURBAN, URBAN, RadioParams, elevation_residual, optimal_elevation, path_loss_db
from uavsizing.cli import run
from uavsizing.geometry import coverage_check, hover_layout, packing_radius
from uavsizing.harvest import pv_cell_temperature, pv_power
from uavsizing.ingest import provision_quantile
from uavsizing.sizing import Scenario, SearchBounds, cost_ledger, exhaustive_oracle, gss_optimize
from uavsizing.storage import GroundBattery, battery_step, charger_requirements, is_feasible, min_feasible_cells
from uavsizing.uav_power import AirframeParams, horizontal_power, horizontal_power_terms


def verdict(name, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'}  {name}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, detail


def test_packing_radii():
    printed = {1: 1.0, 2: 1.0, 3: 1.1547, 4: math.sqrt(2), 5: 1.641, 6: 1.7988, 7: 2.0}
    printed.update({k: 1 + 2 * math.cos(2 * math.pi / (k - 1)) for k in (8, 9, 10)})
    D = 1000.0
    err = max(abs(packing_radius(k, D) - D / g) / (D / g) for k, g in printed.items())
    verdict("packing radii", err <= 1e-9, f"max relative error {err:.2e} over k=1..10 (tol 1e-9)")


def test_coverage_certificate():
    failures = [(k, D) for k in range(1, 11) for D in (100.0, 1000.0, 5000.0)
                if not coverage_check(hover_layout(k, D), D, 512)]
    lay = hover_layout(7, 1000.0)
    d = np.sort(lay.distances)
    k7 = d[0] == 0.0 and np.allclose(d[1:], math.sqrt(3) * packing_radius(7, 1000.0), rtol=1e-12)
    verdict("coverage certificate", not failures and k7,
            f"30 layouts, failures {failures}; k=7 ring at sqrt(3)*D(7): {k7}")


def test_channel_elevation():
    worst_res, worst_gap = 0.0, 0.0
    grid = np.arange(0.01, 89.99, 0.01)
    for env in (SUBURBAN, URBAN):
        for A in (0.6, 0.9):
            th = optimal_elevation(env, A).theta_star
            worst_res = max(worst_res, abs(elevation_residual(th, env, A)))
            loss = path_loss_db(1.0, np.tan(np.radians(grid)), env, RadioParams(A_eff=A))
            worst_gap = max(worst_gap, abs(grid[np.argmin(loss)] - th))
    verdict("channel elevation", worst_res < 1e-8 and worst_gap <= 0.05,
            f"max |residual| {worst_res:.1e} (tol 1e-8), max grid-argmin gap {worst_gap:.4f} deg (tol 0.05)")


def test_uav_power():
    af = AirframeParams()
    v = np.linspace(0.0, 15.0, 15001)
    p = horizontal_power(v, 0.0, af)
    i = int(np.argmin(p))
    interior = 0 < i < len(v) - 1
    rho = 1.225
    blade_ref = af.N_R * af.Delta / 8 * rho * af.s * af.A_r * af.v_tip ** 3
    induced_ref = af.W * math.sqrt(af.W / (2 * af.N_R * rho * af.A_r))
    blade, _, induced = horizontal_power_terms(0.0, 0.0, af)
    errs = [abs(blade / blade_ref - 1), abs(induced / induced_ref - 1),
            abs((blade + induced) / (blade_ref + induced_ref) - 1)]
    printed = [abs(blade / 3.90 - 1), abs(induced / 151.8 - 1), abs((blade + induced) / 155.7 - 1)]
    ok = interior and max(errs) <= 1e-3 and max(printed) <= 1e-3
    verdict("uav power", ok, f"minimum at {v[i]:.3f} m/s (interior: {interior}); hover {blade:.3f} + {induced:.3f} "
                             f"= {blade + induced:.3f} W, max deviation {max(errs + printed):.2e} (tol 1e-3)")


def test_battery_bookkeeping():
    spares = all(charger_requirements(n)[1] == 3 * n for n in range(1, 51))
    b = GroundBattery(10, cell_capacity=12.6)
    cases = [(100.0, 20.0), (100.0, -19.0), (120.0, 20.0), (50.0, -0.0), (0.5, -30.0)]
    step_ok = all(battery_step(s, e, b) == min(b.E_cap, s + 0.95 * e if e >= 0 else s + e / 0.95) for s, e in cases)
    literal = (battery_step(100.0, 20.0, b) == pytest.approx(119.0, abs=1e-12)
               and battery_step(100.0, -19.0, b) == pytest.approx(80.0, abs=1e-12)
               and battery_step(120.0, 20.0, b) == b.E_cap)
    verdict("battery bookkeeping", spares and step_ok and literal,
            f"b_max = 3 n_UAV for n=1..50: {spares}; step arithmetic exact: {step_ok}; worked examples: {literal}")


def test_pv():
    t = pv_cell_temperature(800.0, 20.0)
    p = pv_power(1000.0, 25.0)
    rel = abs(p / 254.0 - 1)
    verdict("pv", t == 45.0 and rel <= 1e-3, f"T_C(800, 20) = {t} degC; P(1000, 25) = {p:.3f} W, "
                                             f"{rel:.2e} from 254.0 (tol 1e-3)")


def test_binary_search():
    rng = np.random.default_rng(7)
    mismatches, nonmono = 0, 0
    for _ in range(100):
        hours = int(rng.integers(24, 337))
        load = rng.uniform(0, 150, hours)
        gen = np.where(rng.random(hours) < 0.5, rng.uniform(0, 300, hours), 0.0)
        net = gen - load
        scan = [is_feasible(net, n) for n in range(201)]
        first = scan.index(True) if True in scan else None
        if first is not None and not all(scan[first:]):
            nonmono += 1
        if first is not None and min_feasible_cells(load, gen, n_max=200) != first:
            mismatches += 1
    verdict("binary search", mismatches == 0 and nonmono == 0,
            f"100 instances, {mismatches} mismatches with the linear scan, {nonmono} non-monotone")


def test_oracle_equivalence(year_trace, traffic):
    bounds = SearchBounds(5, 5, 5, 2000)
    ratios, slowest, notes = [], 0.0, []
    for day in (0, 91, 182, 273):
        for env in (SUBURBAN, URBAN):
            for A in (0.6, 0.9):
                scn = Scenario(year_trace.window(24 * day, 336), traffic, env=env, radio=RadioParams(A_eff=A))
                t0 = time.perf_counter()
                res = gss_optimize(scn, 0.0, math.inf, 100.0, bounds=bounds)
                slowest = max(slowest, time.perf_counter() - t0)
                orc = exhaustive_oracle(scn, res.d_values, bounds)
                r = (res.best.objective if res.best else 0.0) / orc.best.objective
                ratios.append(r)
                if r < 0.99:
                    notes.append(f"day {day} {env.label} {A}: {r:.3f} (gss D={res.best.config.D_max:.0f}, "
                                 f"oracle D={orc.best.config.D_max:.0f})")
    within = sum(r >= 0.99 for r in ratios)
    detail = (f"{within}/{len(ratios)} instances within 1% (worst ratio {min(ratios):.3f}); "
              f"slowest GSS {slowest:.2f} s (limit 300 s)")
    for n in notes:
        print("   ", n)
    verdict("oracle equivalence", within == len(ratios) and slowest < 300.0, detail)


def test_determinism(data_dir, tmp_path):
    args = ["size", "--scenario", str(data_dir / "scenario.ini"), "--out"]
    codes = [run(args + [str(tmp_path / "a")]), run(args + [str(tmp_path / "b")])]
    a, b = (tmp_path / "a" / "report.json").read_bytes(), (tmp_path / "b" / "report.json").read_bytes()
    json.loads(a)
    verdict("determinism", codes == [0, 0] and a == b, f"exit codes {codes}, reports identical: {a == b}")


def test_quantile_provisioning(traffic):
    levels = np.linspace(0.05, 0.95, 15)
    rows = np.array([provision_quantile(traffic, lv).lambda_h for lv in levels])
    monotone = bool(np.all(np.diff(rows, axis=0) >= 0))
    hand = all(np.array_equal(rows[i], [sorted(s)[math.ceil(lv * len(s) - 1e-9) - 1] for s in traffic.samples])
               for i, lv in enumerate(levels))
    verdict("quantile provisioning", monotone and hand,
            f"15 levels, monotone: {monotone}; equal to sort-and-index values: {hand}")


def test_cost_ledger():
    led = cost_ledger(13, 4, 3, 1234, 7)
    want = {"F_PV": 13 * 202, "F_WT": 4 * 1429.95 + 3 * 2738.76, "F_E": 1234 * 5.75, "F_UAV": 7 * 4000}
    got = {k: getattr(led, k) for k in want}
    cents_ok = all(round(got[k] * 100) == round(want[k] * 100) and got[k] * 100 == round(got[k] * 100) for k in want)
    total_ok = led.F_cents == 13 * 20200 + 4 * 142995 + 3 * 273876 + 1234 * 575 + 7 * 400000
    examples = (cost_ledger(3, 0, 0, 0, 0).F_PV == 606 and cost_ledger(0, 0, 0, 1000, 0).F_E == 5750
                and cost_ledger(0, 0, 0, 0, 2).F_UAV == 8000)
    verdict("cost ledger", cents_ok and total_ok and examples,
            f"components exact to the cent: {cents_ok}; total {led.F:.2f} EUR exact: {total_ok}; examples: {examples}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))

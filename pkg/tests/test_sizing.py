import itertools
import math

import numpy as np
import pytest

from uavsizing.channel import SUBURBAN, URBAN, RadioParams, edge_rate
from uavsizing.errors import (BudgetInfeasibleError, ConfigurationError, CoverageInfeasibleError, DomainError,
                              InfeasibleFlightError)
from uavsizing.ingest import HourlyTrace, TrafficProfile
from uavsizing.sizing import (LoadProfile, Prices, Scenario, SearchBounds, ccee, cents, cost_ledger, eeac,
                              exhaustive_oracle, generation_combos, gss_candidates, gss_optimize, mel_profile,
                              scenario_mel, solve_radius, sweep_radii)
from uavsizing.storage import is_feasible
from uavsizing.uav_power import AirframeParams, swarm_hourly_load


def test_cents():
    assert cents(1429.95) == 142995
    assert cents(2738.76) == 273876


def test_cost_ledger_examples():
    assert cost_ledger(3, 0, 0, 0, 0).F_PV == 606.0
    assert cost_ledger(0, 0, 0, 1000, 0).F_E == 5750.0
    assert cost_ledger(0, 0, 0, 0, 2).F_UAV == 8000.0
    led = cost_ledger(7, 3, 2, 333, 4)
    assert led.F_WT == 3 * 1429.95 + 2 * 2738.76
    assert led.F_cents == 7 * 20200 + 3 * 142995 + 2 * 273876 + 333 * 575 + 4 * 400000
    assert led.F == led.F_cents / 100
    with pytest.raises(DomainError):
        cost_ledger(-1, 0, 0, 0, 0)


def test_eeac():
    assert eeac(1000.0, np.full(4, 2.5e5)) == pytest.approx(math.pi)
    with pytest.raises(DomainError):
        eeac(1000.0, np.zeros(3))


def test_gss_candidates_examples():
    assert gss_candidates([1.0, 2.0, 4.0, 5.0]) == [1]
    assert gss_candidates([1.0, 2.0, 4.0, 8.0, 16.0]) == [1, 2, 3]
    assert gss_candidates([3.0, 3.0, 3.0]) == [0]
    assert gss_candidates([]) == []


def test_gss_candidates_drops_non_improving():
    # index 2 never beats index 1; on the improving run 0, 1, 3, 4 only
    # index 3 has a positive second difference at its own spacing
    assert gss_candidates([1.0, 2.0, 1.5, 4.0, 9.0]) == [3]


def test_gss_candidates_uses_spacing():
    # equal steps in y: the slope rises into x = 1.5 and falls after it;
    # on a uniform grid the series is linear and falls back to all samples
    y = [0.0, 1.0, 2.0, 3.0]
    assert gss_candidates(y, [0.0, 1.0, 1.5, 2.5]) == [1]
    assert gss_candidates(y) == [0, 1, 2, 3]


def test_generation_combos_order():
    prices = Prices()
    combos = generation_combos(cents(3000.0), prices)
    cost = combos[:, 0]
    assert np.all(np.diff(cost) >= 0)
    assert np.all(cost == combos[:, 1] * 20200 + combos[:, 2] * 142995 + combos[:, 3] * 273876)
    brute = {(p, a, b) for p in range(15) for a in range(3) for b in range(2)
             if p * 20200 + a * 142995 + b * 273876 <= 300000}
    assert {tuple(r) for r in combos[:, 1:].tolist()} == brute
    assert len(generation_combos(-1, prices)) == 0


def test_mel_picks_cheapest_feasible_swarm(small_scenario):
    scn = small_scenario
    D = 300.0
    load = scenario_mel(scn, D)
    demand = scn.traffic.hourly(len(scn.trace)) * math.pi * D ** 2
    for h in (0, 7, 13, 19, 200):
        best = None
        for k in range(1, 11):
            if demand[h] / k > edge_rate(k, D, scn.env, scn.radio) / 1e6:
                continue
            try:
                e = swarm_hourly_load(k, D, scn.trace.wind_10m[h], scn.env, scn.radio, scn.airframe)
            except InfeasibleFlightError:
                continue
            if best is None or e < best[1] - 1e-9:
                best = (k, e)
        assert load.k_h[h] == best[0]
        assert load.energy_wh[h] == pytest.approx(best[1], rel=1e-12)
    assert load.n_uav == load.k_h.max() + 1
    assert load.F_uav == 4000.0 * load.n_uav


def test_mel_without_demand(two_weeks):
    # calm air: the single tall cell is cheapest; in strong wind the counter-wind
    # cap can rule it out, which the second half checks
    calm = HourlyTrace(two_weeks.time, two_weeks.G_irr, two_weeks.T_a, np.zeros(len(two_weeks)))
    load = mel_profile(200.0, TrafficProfile(np.zeros(24)), calm, SUBURBAN, RadioParams(), AirframeParams())
    assert np.all(load.k_h == 1) and load.n_uav == 2
    windy = mel_profile(200.0, TrafficProfile(np.zeros(24)), two_weeks, SUBURBAN, RadioParams(), AirframeParams())
    assert np.all(windy.k_h != 2) and np.any(windy.k_h > 1)


def test_mel_coverage_failure(two_weeks):
    with pytest.raises(CoverageInfeasibleError):
        mel_profile(500.0, TrafficProfile(np.full(24, 1.0)), two_weeks, URBAN, RadioParams(), AirframeParams())


def brute_cheapest(scn, load, bounds, F_max):
    """Every (panels, W500, W1000) combination with its smallest cell count from a linear scan."""
    pv, w5, w1 = scn.generation_units
    best = None
    for n_pv, a, b in itertools.product(range(bounds.max_pv + 1), range(bounds.max_w500 + 1),
                                        range(bounds.max_w1000 + 1)):
        net = n_pv * pv + a * w5 + b * w1 - load.energy_wh
        for n in range(bounds.max_cells + 1):
            if is_feasible(net, n, scn.cell_capacity, scn.eps_battery):
                F = cost_ledger(n_pv, a, b, n, load.n_uav).F_cents
                if F <= cents(F_max) and (best is None or F < best):
                    best = F
                break
    return best


@pytest.mark.parametrize("D,day", [(100.0, 0), (200.0, 0), (200.0, 182), (300.0, 91)])
def test_ccee_matches_enumeration(year_trace, traffic, D, day):
    scn = Scenario(year_trace.window(24 * day, 168), traffic)
    load = scenario_mel(scn, D)
    bounds = SearchBounds(3, 3, 3, 1500)
    expected = brute_cheapest(scn, load, bounds, 100000.0)
    if expected is None:
        with pytest.raises(BudgetInfeasibleError):
            ccee(load, scn, None, bounds)
    else:
        assert ccee(load, scn, None, bounds).ledger.F_cents == expected


def test_ccee_over_provisioned(small_scenario):
    load = LoadProfile(100.0, np.ones(336, dtype=int), np.zeros(336), 2, 8000.0)
    cfg = ccee(load, small_scenario)
    assert (cfg.n_pv, cfg.n_w500, cfg.n_w1000, cfg.n_cell) == (0, 0, 0, 0)
    assert cfg.F == 8000.0


def test_ccee_budget_below_fleet(small_scenario):
    load = scenario_mel(small_scenario, 200.0)
    with pytest.raises(BudgetInfeasibleError):
        ccee(load, small_scenario, F_max=load.F_uav - 1.0)


def test_solution_record_consistent(small_scenario):
    rec = solve_radius(small_scenario, scenario_mel(small_scenario, 200.0))
    c = rec.config
    assert rec.objective == pytest.approx(math.pi * 200.0 ** 2 / c.F, rel=1e-15)
    assert rec.min_reserve_wh >= 0
    assert c.ledger.F_cents == cost_ledger(c.n_pv, c.n_w500, c.n_w1000, c.n_cell, c.n_uav).F_cents


def test_sweep_stops_at_coverage_limit(small_scenario):
    loads = sweep_radii(small_scenario, 0.0, math.inf, 100.0)
    d = [l.D_max for l in loads]
    assert d[0] == 100.0 and np.all(np.diff(d) == 100.0)
    with pytest.raises(CoverageInfeasibleError):
        scenario_mel(small_scenario, d[-1] + 100.0)


def test_sweep_rejects_bad_step(small_scenario):
    with pytest.raises(ConfigurationError):
        sweep_radii(small_scenario, 0.0, 100.0, 0.0)


def test_gss_single_radius(small_scenario):
    res = gss_optimize(small_scenario, 200.0, 200.0, 100.0)
    assert res.status == "ok" and len(res.records) == 1
    assert res.best.objective == pytest.approx(math.pi * 200.0 ** 2 / res.best.config.F)


def test_gss_statuses(small_scenario):
    assert gss_optimize(small_scenario, 5000.0, 5000.0, 100.0).status == "coverage-infeasible"
    assert gss_optimize(small_scenario, 0.0, 300.0, 100.0, F_max=0.0).status == "budget-infeasible"


def test_gss_budget_relaxation(small_scenario):
    bounds = SearchBounds(5, 5, 5, 2000)
    tight = gss_optimize(small_scenario, 0.0, math.inf, 100.0, F_max=30000.0, bounds=bounds)
    loose = gss_optimize(small_scenario, 0.0, math.inf, 100.0, F_max=200000.0, bounds=bounds)
    assert loose.best.objective >= tight.best.objective


def test_gss_parallel_matches_serial(small_scenario):
    bounds = SearchBounds(5, 5, 5, 2000)
    a = gss_optimize(small_scenario, 0.0, math.inf, 100.0, bounds=bounds)
    b = gss_optimize(small_scenario, 0.0, math.inf, 100.0, bounds=bounds, workers=2)
    assert [r.config for r in a.records] == [r.config for r in b.records]


def test_oracle_bounds_gss(small_scenario):
    bounds = SearchBounds(5, 5, 5, 2000)
    res = gss_optimize(small_scenario, 0.0, math.inf, 100.0, bounds=bounds)
    orc = exhaustive_oracle(small_scenario, res.d_values, bounds)
    assert orc.best.objective >= res.best.objective - 1e-12
    assert orc.evaluated == len(res.d_values) * 216


def test_oracle_single_point(year_trace, traffic):
    # one day is short enough for storage alone
    scn = Scenario(year_trace.window(0, 24), traffic)
    bounds = SearchBounds(0, 0, 0, 2000)
    orc = exhaustive_oracle(scn, [100.0], bounds)
    assert orc.evaluated == 1
    c = orc.best.config
    assert (c.n_pv, c.n_w500, c.n_w1000) == (0, 0, 0)
    assert c.n_cell > 0 and orc.best.min_reserve_wh >= 0


def test_oracle_empty_and_capped(small_scenario):
    assert exhaustive_oracle(small_scenario, [5000.0], SearchBounds(1, 1, 1, 10)).best is None
    assert exhaustive_oracle(small_scenario, [100.0], SearchBounds(0, 0, 0, 0)).best is None
    with pytest.raises(ConfigurationError):
        exhaustive_oracle(small_scenario, [100.0], SearchBounds(None, 1, 1, 10))
    with pytest.raises(ConfigurationError):
        exhaustive_oracle(small_scenario, [100.0] * 10, SearchBounds(1000, 1000, 1000, 1000))

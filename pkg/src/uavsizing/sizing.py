"""System sizing: minimum-energy swarm loads, cheapest energy mix, and the radius sweep.

Money is carried in integer euro cents so that every ledger entry is exact.
"""
from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping, Sequence

import numpy as np
from numba import njit

from .channel import SUBURBAN, Environment, RadioParams, edge_rate
from .errors import (BudgetInfeasibleError, ConfigurationError, CoverageInfeasibleError, DomainError,
                     InfeasibleFlightError)
from .geometry import K_MAX
from .harvest import PvParams, default_turbine_curves, pv_power, turbine_power
from .ingest import HourlyTrace, TrafficProfile
from .storage import CELL_CAPACITY_WH, GroundBattery, simulate_horizon
from .uav_power import AirframeParams, WindContext, swarm_load_series

_TIE_WH = 1e-9


def cents(eur: float) -> int:
    return int(round(eur * 100))


@dataclass(frozen=True)
class Prices:
    pv_eur: float = 202.0
    w500_eur: float = 1429.95
    w1000_eur: float = 2738.76
    cell_eur: float = 5.75
    uav_eur: float = 4000.0
    budget_eur: float = 100000.0


@dataclass(frozen=True)
class CostLedger:
    F_PV: float
    F_WT: float
    F_E: float
    F_UAV: float
    F: float
    F_cents: int


def cost_ledger(n_pv: int, n_w500: int, n_w1000: int, n_cell: int, n_uav: int, prices: Prices = Prices()) -> CostLedger:
    if min(n_pv, n_w500, n_w1000, n_cell, n_uav) < 0:
        raise DomainError("component counts must be non-negative")
    pv = n_pv * cents(prices.pv_eur)
    wt = n_w500 * cents(prices.w500_eur) + n_w1000 * cents(prices.w1000_eur)
    e = n_cell * cents(prices.cell_eur)
    uav = n_uav * cents(prices.uav_eur)
    total = pv + wt + e + uav
    return CostLedger(pv / 100, wt / 100, e / 100, uav / 100, total / 100, total)


@dataclass(frozen=True)
class LoadProfile:
    D_max: float
    k_h: np.ndarray
    energy_wh: np.ndarray
    n_uav: int
    F_uav: float

    @property
    def annual_energy_wh(self) -> float:
        return float(np.sum(self.energy_wh))


@dataclass(frozen=True)
class SystemConfig:
    n_pv: int
    n_w500: int
    n_w1000: int
    n_cell: int
    n_uav: int
    D_max: float
    ledger: CostLedger

    @property
    def F(self) -> float:
        return self.ledger.F


@dataclass(frozen=True)
class SolutionRecord:
    config: SystemConfig
    objective: float          # m^2 per EUR
    eeac: float               # m^2 per Wh
    min_reserve_wh: float
    binding: str              # "storage" or "generation"
    binding_hour: int


@dataclass(frozen=True)
class SearchBounds:
    """Optional caps on each decision variable; ``None`` leaves only the budget."""

    max_pv: int | None = None
    max_w500: int | None = None
    max_w1000: int | None = None
    max_cells: int | None = None


@dataclass(frozen=True, eq=False)
class Scenario:
    """Everything the sizing search needs for one location and service setting."""

    trace: HourlyTrace
    traffic: TrafficProfile
    env: Environment = SUBURBAN
    radio: RadioParams = RadioParams()
    airframe: AirframeParams = AirframeParams()
    wind: WindContext = WindContext()
    pv: PvParams = PvParams()
    curves: Mapping = field(default_factory=default_turbine_curves)
    prices: Prices = Prices()
    eps_battery: float = 0.95
    cell_capacity: float = CELL_CAPACITY_WH
    delta_t: float = 1.0

    @cached_property
    def generation_units(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Per-unit hourly output (W) of one panel, one W500 and one W1000."""
        t = self.trace
        return (
            np.asarray(pv_power(t.G_irr, t.T_a, 1, self.pv), dtype=float),
            np.asarray(turbine_power(t.wind_10m, self.curves["W500"]), dtype=float),
            np.asarray(turbine_power(t.wind_10m, self.curves["W1000"]), dtype=float),
        )

    def generation(self, n_pv: int, n_w500: int, n_w1000: int) -> np.ndarray:
        pv, w5, w1 = self.generation_units
        return n_pv * pv + n_w500 * w5 + n_w1000 * w1


# --- minimum energy load ---------------------------------------------------

def swarm_energy_table(D_max: float, traffic: TrafficProfile, trace: HourlyTrace, env: Environment,
                       radio: RadioParams, af: AirframeParams, wind: WindContext = WindContext()) -> np.ndarray:
    """Hourly energy (Wh) for every swarm size, shape ``(K_MAX, hours)``; ``inf`` marks infeasible choices."""
    n = len(trace)
    demand_mbps = traffic.hourly(n) * math.pi * D_max ** 2
    table = np.full((K_MAX, n), np.inf)
    for k in range(1, K_MAX + 1):
        try:
            rate_mbps = edge_rate(k, D_max, env, radio) / 1e6
            e = swarm_load_series(k, D_max, trace.wind_10m, env, radio, af, wind)
        except (DomainError, InfeasibleFlightError):
            continue
        table[k - 1] = np.where(demand_mbps / k <= rate_mbps, e, np.inf)
    return table


def mel_profile(D_max: float, traffic: TrafficProfile, trace: HourlyTrace, env: Environment,
                radio: RadioParams, af: AirframeParams, wind: WindContext = WindContext(),
                uav_price: float = Prices().uav_eur) -> LoadProfile:
    """Per hour, the swarm size with the least energy that still meets the area rate demand.

    Ties within 1e-9 Wh go to the smaller swarm.
    """
    if not D_max > 0:
        raise DomainError("D_max must be positive")
    table = swarm_energy_table(D_max, traffic, trace, env, radio, af, wind)
    best = table.min(axis=0)
    if not np.all(np.isfinite(best)):
        h = int(np.argmin(np.isfinite(best)))
        raise CoverageInfeasibleError(f"no swarm of 1..{K_MAX} UAVs serves hour {h} at D_max={D_max} m")
    k_idx = np.argmax(table <= best + _TIE_WH, axis=0)
    k_h = k_idx + 1
    energy = table[k_idx, np.arange(table.shape[1])]
    n_uav = int(k_h.max()) + 1
    return LoadProfile(float(D_max), k_h.astype(int), energy, n_uav, n_uav * uav_price)


def scenario_mel(scn: Scenario, D_max: float) -> LoadProfile:
    return mel_profile(D_max, scn.traffic, scn.trace, scn.env, scn.radio, scn.airframe, scn.wind, scn.prices.uav_eur)


def eeac(D_max: float, load: LoadProfile) -> float:
    """Covered area per unit of yearly swarm energy (m^2/Wh)."""
    total = float(np.sum(getattr(load, "energy_wh", load)))
    if not total > 0:
        raise DomainError("annual swarm energy must be positive")
    return math.pi * D_max ** 2 / total


# --- greedy sampling of radii ----------------------------------------------

def gss_candidates(eeac_series: Sequence[float], d_values: Sequence[float] | None = None) -> list[int]:
    """Indices of radii worth a full energy-mix search.

    Keeps samples that beat every earlier EEAC, then, among those, the ones
    whose second difference (at their own radius spacing) is positive.
    With fewer than three improving samples, or none convex, the improving
    samples are returned as they are.
    """
    y = np.asarray(eeac_series, dtype=float)
    if len(y) == 0:
        return []
    x = np.arange(len(y), dtype=float) if d_values is None else np.asarray(d_values, dtype=float)
    mono = [0]
    for i in range(1, len(y)):
        if y[i] > y[mono[-1]]:
            mono.append(i)
    if len(mono) < 3:
        return mono
    xm, ym = x[mono], y[mono]
    keep = []
    for p in range(1, len(mono) - 1):
        right = (ym[p + 1] - ym[p]) / (xm[p + 1] - xm[p])
        left = (ym[p] - ym[p - 1]) / (xm[p] - xm[p - 1])
        if 2.0 * (right - left) / (xm[p + 1] - xm[p - 1]) > 0:
            keep.append(mono[p])
    return keep or mono


# --- cheapest combination of energy elements -------------------------------

@njit(cache=True, nogil=True)
def _combo_feasible(pv, w5, w1, load, n_pv, n5, n1, e_cap, eps, dt):
    s = e_cap
    for t in range(load.shape[0]):
        x = (n_pv * pv[t] + n5 * w5[t] + n1 * w1[t]) * dt - load[t]
        if x >= 0.0:
            s = s + eps * x
        else:
            s = s + x / eps
        if s > e_cap:
            s = e_cap
        if s < 0.0:
            return False
    return True


def generation_combos(budget_cents: int, prices: Prices, bounds: SearchBounds = SearchBounds()) -> np.ndarray:
    """All ``(cost_cents, n_pv, n_w500, n_w1000)`` within budget, cheapest first.

    Ties are broken by ``(n_w1000, n_w500, n_pv)``.
    """
    if budget_cents < 0:
        return np.zeros((0, 4), dtype=np.int64)
    c_pv, c5, c1 = cents(prices.pv_eur), cents(prices.w500_eur), cents(prices.w1000_eur)

    def cap(unit, bound):
        n = budget_cents // unit
        return n if bound is None else min(n, bound)

    pv = np.arange(cap(c_pv, bounds.max_pv) + 1, dtype=np.int64)
    w5 = np.arange(cap(c5, bounds.max_w500) + 1, dtype=np.int64)
    w1 = np.arange(cap(c1, bounds.max_w1000) + 1, dtype=np.int64)
    P, A, B = np.meshgrid(pv, w5, w1, indexing="ij")
    P, A, B = P.ravel(), A.ravel(), B.ravel()
    cost = P * c_pv + A * c5 + B * c1
    ok = cost <= budget_cents
    P, A, B, cost = P[ok], A[ok], B[ok], cost[ok]
    order = np.lexsort((P, A, B, cost))
    return np.column_stack([cost[order], P[order], A[order], B[order]])


def _build_record(scn: Scenario, load: LoadProfile, n_pv: int, n5: int, n1: int, n_cell: int) -> SolutionRecord:
    ledger = cost_ledger(n_pv, n5, n1, n_cell, load.n_uav, scn.prices)
    cfg = SystemConfig(n_pv, n5, n1, n_cell, load.n_uav, load.D_max, ledger)
    res = simulate_horizon(load, scn.generation(n_pv, n5, n1), GroundBattery(n_cell, scn.cell_capacity, eps_conv=scn.eps_battery), scn.delta_t)
    return SolutionRecord(
        config=cfg,
        objective=math.pi * load.D_max ** 2 / ledger.F,
        eeac=eeac(load.D_max, load),
        min_reserve_wh=res.min_state,
        binding="storage" if n_cell > 0 else "generation",
        binding_hour=int(np.argmin(res.trajectory)) if len(res.trajectory) else 0,
    )


def ccee(load: LoadProfile, scn: Scenario, F_max: float | None = None, bounds: SearchBounds = SearchBounds()) -> SystemConfig:
    """Cheapest mix of panels, turbines and cells that never drains the ground battery.

    Generation mixes are tried cheapest first. Each gets the rest of the
    current budget as cells; when that is enough, the cell count is reduced
    by binary search and the budget tightens to the new total. The scan
    stops once generation alone costs more than the best total so far.
    """
    if F_max is None:
        F_max = scn.prices.budget_eur
    budget = cents(F_max)
    uav_c = load.n_uav * cents(scn.prices.uav_eur)
    if uav_c > budget:
        raise BudgetInfeasibleError(f"{load.n_uav} UAVs alone exceed the budget of {F_max} EUR")
    cell_c = cents(scn.prices.cell_eur)
    pv, w5, w1 = scn.generation_units
    e = np.ascontiguousarray(load.energy_wh, dtype=float)
    cap, eps, dt = float(scn.cell_capacity), float(scn.eps_battery), float(scn.delta_t)

    def feasible(combo, n_cell):
        return _combo_feasible(pv, w5, w1, e, float(combo[1]), float(combo[2]), float(combo[3]), n_cell * cap, eps, dt)

    F = budget
    best = None
    for combo in generation_combos(budget - uav_c, scn.prices, bounds):
        F_comb = int(combo[0]) + uav_c
        if F_comb > F or (best is not None and F_comb >= F):
            break
        n_cell_max = (F - F_comb) // cell_c
        if bounds.max_cells is not None:
            n_cell_max = min(n_cell_max, bounds.max_cells)
        if not feasible(combo, n_cell_max):
            continue
        lo, hi = -1, int(n_cell_max)
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if feasible(combo, mid):
                hi = mid
            else:
                lo = mid
        total = F_comb + hi * cell_c
        if best is None or total < F:
            best = (int(combo[1]), int(combo[2]), int(combo[3]), hi)
            F = total
    if best is None:
        raise BudgetInfeasibleError(f"no energy mix sustains the load at D_max={load.D_max} m within {F_max} EUR")
    n_pv, n5, n1, n_cell = best
    return SystemConfig(n_pv, n5, n1, n_cell, load.n_uav, load.D_max, cost_ledger(n_pv, n5, n1, n_cell, load.n_uav, scn.prices))


def solve_radius(scn: Scenario, load: LoadProfile, F_max: float | None = None, bounds: SearchBounds = SearchBounds()) -> SolutionRecord:
    cfg = ccee(load, scn, F_max, bounds)
    return _build_record(scn, load, cfg.n_pv, cfg.n_w500, cfg.n_w1000, cfg.n_cell)


# --- full search -------------------------------------------------------------

@dataclass(frozen=True)
class GssResult:
    records: list[SolutionRecord]        # best objective first
    d_values: np.ndarray                 # swept radii with a feasible swarm
    eeac: np.ndarray
    candidates: list[int]                # indices into d_values
    status: str                          # "ok", "coverage-infeasible" or "budget-infeasible"
    message: str = ""

    @property
    def best(self) -> SolutionRecord | None:
        return self.records[0] if self.records else None


def sweep_radii(scn: Scenario, D_lb: float, D_ub: float, step: float, max_points: int = 1_000_000):
    """MEL load profiles from ``D_lb`` upward until coverage fails or ``D_ub`` is passed."""
    if step <= 0 or D_lb < 0:
        raise ConfigurationError("need step > 0 and D_lb >= 0")
    j0 = 0 if D_lb > 0 else 1
    loads = []
    for j in range(j0, j0 + max_points):
        D = D_lb + j * step
        if D > D_ub:
            break
        try:
            loads.append(scenario_mel(scn, D))
        except CoverageInfeasibleError:
            break
    return loads


def _solve_or_none(args):
    scn, load, F_max, bounds = args
    try:
        return solve_radius(scn, load, F_max, bounds)
    except BudgetInfeasibleError:
        return None


def _ordered(records):
    return sorted(records, key=lambda r: (-r.objective, r.config.D_max))


def solve_many(scn: Scenario, loads, F_max, bounds, workers: int = 1) -> list[SolutionRecord | None]:
    jobs = [(scn, load, F_max, bounds) for load in loads]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            return list(ex.map(_solve_or_none, jobs))
    return [_solve_or_none(j) for j in jobs]


def gss_optimize(scn: Scenario, D_lb: float = 0.0, D_ub: float = math.inf, step: float = 1.0,
                 F_max: float | None = None, bounds: SearchBounds = SearchBounds(), workers: int = 1) -> GssResult:
    """Sweep coverage radii, keep the promising ones, and size the energy system for each."""
    loads = sweep_radii(scn, D_lb, D_ub, step)
    if not loads:
        return GssResult([], np.zeros(0), np.zeros(0), [], "coverage-infeasible",
                         f"no swarm covers D_max={max(D_lb, step) if D_lb <= 0 else D_lb} m")
    d = np.array([l.D_max for l in loads])
    ee = np.array([eeac(l.D_max, l) for l in loads])
    cand = gss_candidates(ee, d)
    solved = solve_many(scn, [loads[i] for i in cand], F_max, bounds, workers)
    records = _ordered([r for r in solved if r is not None])
    if not records:
        return GssResult([], d, ee, cand, "budget-infeasible", "no candidate radius fits the budget")
    return GssResult(records, d, ee, cand, "ok")


# --- exhaustive reference ----------------------------------------------------

ORACLE_MAX_EVALUATIONS = 2_000_000_000


@njit(cache=True)
def _first_feasible_cells(pv, w5, w1, load, n_pv, n5, n1, max_cells, cap, eps, dt):
    for n in range(max_cells + 1):
        if _combo_feasible(pv, w5, w1, load, n_pv, n5, n1, n * cap, eps, dt):
            return n
    return -1


@dataclass(frozen=True)
class OracleResult:
    best: SolutionRecord | None
    evaluated: int
    feasible_radii: list[float]


def exhaustive_oracle(scn: Scenario, d_grid: Sequence[float], bounds: SearchBounds,
                      F_max: float | None = None) -> OracleResult:
    """True optimum over a discrete grid by complete enumeration.

    Every radius, every generation count up to the bounds, and every cell
    count from zero upward is visited. All four bounds are required and the
    grid product is capped at ``ORACLE_MAX_EVALUATIONS``.
    """
    if None in (bounds.max_pv, bounds.max_w500, bounds.max_w1000, bounds.max_cells):
        raise ConfigurationError("the exhaustive search needs every count bounded")
    size = len(d_grid) * (bounds.max_pv + 1) * (bounds.max_w500 + 1) * (bounds.max_w1000 + 1) * (bounds.max_cells + 1)
    if size > ORACLE_MAX_EVALUATIONS:
        raise ConfigurationError(f"grid of {size} evaluations exceeds the cap of {ORACLE_MAX_EVALUATIONS}")
    if F_max is None:
        F_max = scn.prices.budget_eur
    pv, w5, w1 = scn.generation_units
    cap, eps, dt = float(scn.cell_capacity), float(scn.eps_battery), float(scn.delta_t)
    best_key, best_args, feasible_radii, evaluated = None, None, [], 0
    for D in d_grid:
        try:
            load = scenario_mel(scn, float(D))
        except CoverageInfeasibleError:
            continue
        feasible_radii.append(float(D))
        e = np.ascontiguousarray(load.energy_wh, dtype=float)
        for n_pv, n5, n1 in itertools.product(range(bounds.max_pv + 1), range(bounds.max_w500 + 1), range(bounds.max_w1000 + 1)):
            evaluated += 1
            n_cell = _first_feasible_cells(pv, w5, w1, e, float(n_pv), float(n5), float(n1), bounds.max_cells, cap, eps, dt)
            if n_cell < 0:
                continue
            led = cost_ledger(n_pv, n5, n1, n_cell, load.n_uav, scn.prices)
            if led.F_cents > cents(F_max):
                continue
            obj = math.pi * float(D) ** 2 / led.F
            key = (-obj, led.F_cents, float(D), n1, n5, n_pv)
            if best_key is None or key < best_key:
                best_key, best_args = key, (load, n_pv, n5, n1, n_cell)
    best = None if best_args is None else _build_record(scn, *best_args)
    return OracleResult(best, evaluated, feasible_radii)

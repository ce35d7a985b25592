"""Charger bookkeeping and hourly ground-battery simulation."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import ConfigurationError, DataError, PreconditionError

CELL_CAPACITY_WH = 12.6
CELL_COST_EUR = 5.75


@dataclass(frozen=True)
class ChargerSpec:
    P_charge: float = 180.0   # W
    C_bat: float = 180.0      # Wh
    tau_fly: float = 0.5      # h


@dataclass(frozen=True)
class GroundBattery:
    n_cell: int
    cell_capacity: float = CELL_CAPACITY_WH
    cell_cost: float = CELL_COST_EUR
    eps_conv: float = 0.95

    def __post_init__(self):
        if self.n_cell < 0:
            raise ConfigurationError("cell count must be non-negative")
        if not 0 < self.eps_conv <= 1:
            raise ConfigurationError("converter efficiency must lie in (0, 1]")

    @property
    def E_cap(self) -> float:
        return self.cell_capacity * self.n_cell


@dataclass(frozen=True)
class HorizonResult:
    feasible: bool
    min_state: float
    trajectory: np.ndarray
    first_violation: int | None  # hour index, 0-based


def charger_requirements(n_uav: int, spec: ChargerSpec = ChargerSpec()) -> tuple[float, int]:
    """Recharge time (h) and the number of swappable UAV batteries for a fleet."""
    if spec.P_charge <= 0:
        raise ConfigurationError("charging power must be positive")
    if n_uav < 1:
        raise PreconditionError("fleet needs at least one UAV")
    tau_charge = spec.C_bat / spec.P_charge
    b = n_uav * (tau_charge / spec.tau_fly + 1.0)
    # guard against 3.0000000000000004 rounding up
    return tau_charge, int(math.ceil(b - 1e-9))


def check_flight_battery(max_flight_wh: float, spec: ChargerSpec = ChargerSpec(), margin: float = 0.9) -> bool:
    """Warn and return False if a sortie uses more than ``margin`` of the on-board pack."""
    if max_flight_wh > margin * spec.C_bat:
        warnings.warn(
            f"largest sortie needs {max_flight_wh:.1f} Wh, above {margin:.0%} of the {spec.C_bat:.0f} Wh pack",
            RuntimeWarning,
            stacklevel=2,
        )
        return False
    return True


def battery_step(state: float, E_net: float, battery: GroundBattery) -> float:
    """Next stored energy (Wh). Not clamped below zero: a negative result flags depletion."""
    if E_net >= 0:
        nxt = state + battery.eps_conv * E_net
    else:
        nxt = state + E_net / battery.eps_conv
    return min(battery.E_cap, nxt)


@njit(cache=True, nogil=True)
def _run(net, e_cap, eps, traj, stop_early):
    s = e_cap
    first = -1
    lo = e_cap
    for t in range(net.shape[0]):
        x = net[t]
        if x >= 0.0:
            s = s + eps * x
        else:
            s = s + x / eps
        if s > e_cap:
            s = e_cap
        traj[t] = s
        if s < lo:
            lo = s
        if s < 0.0 and first < 0:
            first = t
            if stop_early:
                return first, lo
    return first, lo


@njit(cache=True, nogil=True)
def _feasible(net, e_cap, eps):
    s = e_cap
    for t in range(net.shape[0]):
        x = net[t]
        if x >= 0.0:
            s = s + eps * x
        else:
            s = s + x / eps
        if s > e_cap:
            s = e_cap
        if s < 0.0:
            return False
    return True


def _energy(load) -> np.ndarray:
    return np.asarray(getattr(load, "energy_wh", load), dtype=float)


def net_energy(load, gen, delta_t: float = 1.0) -> np.ndarray:
    """Per-step surplus (Wh): generation (W) over ``delta_t`` hours minus load (Wh)."""
    e = _energy(load)
    g = np.asarray(gen, dtype=float)
    if e.shape != g.shape:
        raise DataError(f"load and generation lengths differ ({e.shape[0]} vs {g.shape[0]})")
    return g * delta_t - e


def simulate_horizon(load, gen, battery: GroundBattery, delta_t: float = 1.0, cyclic: bool = False) -> HorizonResult:
    """Run the ground battery, initially full, over the whole horizon.

    ``cyclic=True`` additionally requires the final state to be back at
    capacity.
    """
    net = net_energy(load, gen, delta_t)
    traj = np.empty_like(net)
    first, lo = _run(net, float(battery.E_cap), float(battery.eps_conv), traj, False)
    feasible = first < 0
    if cyclic and len(traj) and traj[-1] < battery.E_cap - 1e-9:
        feasible = False
    return HorizonResult(feasible, float(lo), traj, None if first < 0 else int(first))


def is_feasible(net: np.ndarray, n_cell: int, cell_capacity: float = CELL_CAPACITY_WH, eps_conv: float = 0.95) -> bool:
    """Fast feasibility test on a precomputed net-energy series."""
    return bool(_feasible(net, float(n_cell * cell_capacity), float(eps_conv)))


def min_feasible_cells(load, gen, cell_capacity: float = CELL_CAPACITY_WH, n_max: int = 0,
                       eps_conv: float = 0.95, delta_t: float = 1.0) -> int:
    """Smallest cell count in ``[0, n_max]`` that keeps the battery non-negative.

    Relies on feasibility being monotone in capacity.
    """
    net = net_energy(load, gen, delta_t)
    return min_cells_for_net(net, n_max, cell_capacity, eps_conv)


def min_cells_for_net(net: np.ndarray, n_max: int, cell_capacity: float = CELL_CAPACITY_WH, eps_conv: float = 0.95) -> int:
    if not is_feasible(net, n_max, cell_capacity, eps_conv):
        raise PreconditionError(f"infeasible even with {n_max} cells")
    lo, hi = -1, n_max  # lo infeasible (virtual), hi feasible
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if is_feasible(net, mid, cell_capacity, eps_conv):
            hi = mid
        else:
            lo = mid
    return hi


def outage_hours(load, gen, battery: GroundBattery, delta_t: float = 1.0) -> np.ndarray:
    """Hours whose demand a best-effort system could not fully serve.

    Unlike :func:`simulate_horizon` the state is floored at zero and the run
    continues; this is a diagnostic only.
    """
    net = net_energy(load, gen, delta_t)
    s = battery.E_cap
    out = []
    for t, x in enumerate(net):
        s = battery_step(s, x, battery)
        if s < 0:
            out.append(t)
            s = 0.0
    return np.asarray(out, dtype=int)

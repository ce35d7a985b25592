"""Rotary-wing power and per-sortie energy.

Internal arithmetic runs in seconds and joules; the public results are in
watts and watt-hours, with sortie durations given in hours.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import Environment, RadioParams, optimal_elevation
from .errors import DomainError, InfeasibleFlightError
from .geometry import SwarmLayout, hover_layout

RHO0 = 1.225           # kg/m^3, sea-level standard density
_H_CEILING = 44330.0   # m, where the barometric base vanishes


@dataclass(frozen=True)
class AirframeParams:
    W: float = 23.84          # N
    N_R: int = 4
    v_tip: float = 102.0      # m/s
    A_f: float = 0.038        # m^2
    C_D: float = 0.9
    A_r: float = 0.06         # m^2
    Delta: float = 0.002
    s: float = 0.05
    v_c: float = 10.0         # m/s
    v_hfly: float = 10.0      # m/s
    tau_fly: float = 0.5      # h
    v_hov_max: float = 30.0   # m/s, airframe envelope
    relative_density: bool = False

    def __post_init__(self):
        for name in ("W", "N_R", "v_tip", "A_f", "C_D", "A_r", "Delta", "s", "v_c", "v_hfly", "tau_fly", "v_hov_max"):
            if not getattr(self, name) > 0:
                raise DomainError(f"airframe parameter {name} must be positive")


@dataclass(frozen=True)
class WindContext:
    v_wind: float = 0.0   # m/s at H0
    H0: float = 10.0      # m
    E_w: float = 0.335

    def __post_init__(self):
        if self.v_wind < 0 or self.H0 <= 0 or not 0 < self.E_w < 1:
            raise DomainError("need v_wind >= 0, H0 > 0 and 0 < E_w < 1")


def air_density(H, relative: bool = False):
    """Barometric air density at altitude ``H`` (m).

    With ``relative=True`` the sea-level value is 1 instead of 1.225 kg/m^3.
    """
    H = np.asarray(H, dtype=float)
    if np.any(H >= _H_CEILING) or np.any(H < 0):
        raise DomainError(f"air density defined for 0 <= H < {_H_CEILING} m")
    rho = (1.0 - 2.2558e-5 * H) ** 4.2577
    if not relative:
        rho = RHO0 * rho
    return float(rho) if rho.ndim == 0 else rho


def counter_wind_speed(wind: WindContext, H):
    H = np.asarray(H, dtype=float)
    v = wind.v_wind * (H / wind.H0) ** wind.E_w
    return float(v) if v.ndim == 0 else v


def _rho(H, af):
    return air_density(H, relative=af.relative_density)


def blade_power_coefficient(H, af: AirframeParams):
    """Per-rotor profile power at hover, ``(Delta/8) rho s A_r v_tip^3``."""
    return af.Delta / 8.0 * _rho(H, af) * af.s * af.A_r * af.v_tip ** 3


def horizontal_power_terms(v, H, af: AirframeParams):
    """Blade, fuselage and induced power (W) when flying level at speed ``v``."""
    v = np.asarray(v, dtype=float)
    rho = _rho(H, af)
    P_b = blade_power_coefficient(H, af)
    blade = af.N_R * P_b * (1.0 + 3.0 * v ** 2 / af.v_tip ** 2)
    fuselage = 0.5 * af.C_D * af.A_f * rho * v ** 3
    hover_term = af.W ** 2 / (4.0 * af.N_R ** 2 * rho ** 2 * af.A_r ** 2)
    induced = af.W * np.sqrt(np.sqrt(hover_term + v ** 4 / 4.0) - v ** 2 / 2.0)
    return blade, fuselage, induced


def horizontal_power(v, H, af: AirframeParams):
    blade, fuselage, induced = horizontal_power_terms(v, H, af)
    p = blade + fuselage + induced
    return float(p) if np.ndim(p) == 0 else p


def vertical_power(v_c, H, af: AirframeParams):
    """Power (W) for axial flight at signed rate ``v_c``; descent uses ``v_c < 0``."""
    v_c = np.asarray(v_c, dtype=float)
    rho = _rho(H, af)
    p = af.W / 2.0 * (v_c + np.sqrt(v_c ** 2 + 2.0 * af.W / (af.N_R * rho * af.A_r))) + af.N_R * blade_power_coefficient(H, af)
    return float(p) if p.ndim == 0 else p


def transit_time_s(d, H, af: AirframeParams) -> float:
    """Climb-and-cruise time (s) one way."""
    return H / af.v_c + d / af.v_hfly


def sortie_energy_series(d, H, v_hov, af: AirframeParams):
    """Energy (Wh) of one sortie to horizontal distance ``d`` and altitude ``H``.

    ``v_hov`` may be an array of counter-wind speeds. Sorties that cannot be
    flown come back as ``inf``.
    """
    v_hov = np.asarray(v_hov, dtype=float)
    tau = af.tau_fly * 3600.0
    t_one_way = transit_time_s(d, H, af)
    hover_time = tau - 2.0 * t_one_way
    if hover_time <= 0:
        return np.full(v_hov.shape, np.inf) if v_hov.ndim else np.inf
    p_cruise = horizontal_power(af.v_hfly, H, af)
    transit_j = (vertical_power(af.v_c, H, af) + vertical_power(-af.v_c, H, af)) * H / af.v_c + 2.0 * p_cruise * d / af.v_hfly
    hover_j = horizontal_power(v_hov, H, af) * hover_time
    e = (transit_j + hover_j) / 3600.0
    e = np.where(v_hov > af.v_hov_max, np.inf, e)
    return float(e) if e.ndim == 0 else e


def flight_energy(j: int, layout: SwarmLayout, H: float, wind: WindContext, af: AirframeParams) -> float:
    """Energy (Wh) of UAV ``j`` (0-based) in ``layout`` for a single sortie of ``tau_fly`` hours."""
    d = float(layout.distances[j])
    if 2.0 * transit_time_s(d, H, af) >= af.tau_fly * 3600.0:
        raise InfeasibleFlightError(f"transit to ({d:.1f} m, {H:.1f} m) exceeds the sortie time")
    v_hov = counter_wind_speed(wind, H)
    if v_hov > af.v_hov_max:
        raise InfeasibleFlightError(f"counter-wind speed {v_hov:.2f} m/s exceeds {af.v_hov_max} m/s")
    return float(sortie_energy_series(d, H, v_hov, af))


def hover_altitude(k: int, D_max: float, env: Environment, radio: RadioParams) -> float:
    layout = hover_layout(k, D_max)
    return optimal_elevation(env, radio.A_eff).height(layout.cell_radius)


def swarm_load_series(k: int, D_max: float, wind_series, env: Environment, radio: RadioParams,
                      af: AirframeParams, wind: WindContext = WindContext()):
    """Hourly swarm energy (Wh) for every wind sample in ``wind_series``; ``inf`` where infeasible."""
    if k < 1:
        raise DomainError("swarm size must be at least 1")
    layout = hover_layout(k, D_max)
    H = optimal_elevation(env, radio.A_eff).height(layout.cell_radius)
    wind_series = np.asarray(wind_series, dtype=float)
    v_hov = wind_series * (H / wind.H0) ** wind.E_w
    total = np.zeros(wind_series.shape)
    for d in layout.distances:
        total = total + sortie_energy_series(float(d), H, v_hov, af)
    return total / af.tau_fly


def swarm_hourly_load(k: int, D_max: float, hour_wind: float, env: Environment, radio: RadioParams,
                      af: AirframeParams, wind: WindContext = WindContext()) -> float:
    """Energy (Wh) a swarm of ``k`` consumes in one hour of wind ``hour_wind`` (m/s at ``wind.H0``)."""
    e = float(swarm_load_series(k, D_max, hour_wind, env, radio, af, wind))
    if not np.isfinite(e):
        raise InfeasibleFlightError(f"swarm of {k} cannot fly at D_max={D_max} m in {hour_wind} m/s wind")
    return e

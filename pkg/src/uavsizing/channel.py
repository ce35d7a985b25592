"""Air-to-ground propagation with a downward conical antenna.

All public angles are in degrees. Path losses are in dB; the only place
where dBm and linear units meet is :func:`edge_rate`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import bisect

from .errors import ConfigurationError, DomainError, NoInteriorOptimumError
from .geometry import packing_radius

LN10 = math.log(10.0)
DEG = math.pi / 180.0


@dataclass(frozen=True)
class Environment:
    """S-curve LoS constants and mean excess losses of a propagation setting."""

    a: float
    b: float
    eta_los: float
    eta_nlos: float
    label: str = "custom"

    def __post_init__(self):
        if not (self.a > 0 and self.b > 0):
            raise ConfigurationError(f"s-curve constants must be positive, got a={self.a}, b={self.b}")
        if not (self.eta_nlos >= self.eta_los >= 0):
            raise ConfigurationError(
                f"need eta_nlos >= eta_los >= 0, got eta_los={self.eta_los}, eta_nlos={self.eta_nlos}"
            )


SUBURBAN = Environment(a=4.88, b=0.43, eta_los=0.2, eta_nlos=24.0, label="suburban")
URBAN = Environment(a=9.61, b=0.16, eta_los=1.2, eta_nlos=23.0, label="urban")
ENVIRONMENTS = {"suburban": SUBURBAN, "urban": URBAN}


@dataclass(frozen=True)
class RadioParams:
    f_c: float = 5.8e9          # Hz
    B: float = 80e6             # Hz, per-cell channel
    B_tot: float = 480e6        # Hz, available spectrum
    N0: float = -174.0          # dBm/Hz
    P_t: float = 23.0           # dBm
    A_eff: float = 0.9
    c: float = 3e8              # m/s

    def __post_init__(self):
        if self.f_c <= 0 or self.B <= 0 or self.B_tot <= 0 or self.c <= 0:
            raise ConfigurationError("frequencies, bandwidths and c must be positive")
        if not 0 < self.A_eff <= 1:
            raise ConfigurationError(f"A_eff must lie in (0, 1], got {self.A_eff}")

    @property
    def fspl_constant(self) -> float:
        """20 log10(4 pi f_c / c) in dB."""
        return 20.0 * math.log10(4.0 * math.pi * self.f_c / self.c)

    @property
    def reuse_ok(self) -> bool:
        # three colours suffice for the overlapping packings
        return self.B_tot >= 3.0 * self.B


@dataclass(frozen=True)
class ElevationSolution:
    theta_star: float   # degrees
    height_ratio: float  # H / D

    def height(self, D):
        return D * self.height_ratio


def los_probability(theta, env: Environment):
    theta = np.asarray(theta, dtype=float)
    p = 1.0 / (1.0 + env.a * np.exp(-env.b * (theta - env.a)))
    return float(p) if p.ndim == 0 else p


def antenna_gain_db(theta, A_eff: float):
    """Directional gain of an imperfect conical antenna, ``A_eff * 10 log10(2 / (1 - sin theta))``."""
    theta = np.asarray(theta, dtype=float)
    if np.any(theta >= 90.0) or np.any(theta < 0.0):
        raise DomainError("antenna gain needs 0 <= theta < 90 degrees")
    g = A_eff * 10.0 * np.log10(2.0 / (1.0 - np.sin(theta * DEG)))
    return float(g) if g.ndim == 0 else g


def elevation_deg(D, H):
    return np.degrees(np.arctan2(H, D))


def path_loss_db(D, H, env: Environment, radio: RadioParams):
    """Mean path loss (dB) to a ground user at horizontal distance ``D`` from a UAV at height ``H``."""
    D = np.asarray(D, dtype=float)
    H = np.asarray(H, dtype=float)
    if np.any((D == 0) & (H == 0)):
        raise DomainError("path loss undefined at zero distance")
    theta = elevation_deg(D, H)
    loss = (
        los_probability(theta, env) * (env.eta_los - env.eta_nlos)
        + 20.0 * np.log10(np.hypot(D, H))
        + radio.fspl_constant
        + env.eta_nlos
        - antenna_gain_db(theta, radio.A_eff)
    )
    return float(loss) if np.ndim(loss) == 0 else loss


def elevation_residual(theta, env: Environment, A_eff: float):
    """d(path loss)/d(theta) in dB per degree at fixed horizontal distance.

    The LoS term uses ``(a e + 1)^2`` in the denominator, i.e. the true
    derivative of the s-curve.
    """
    theta = np.asarray(theta, dtype=float)
    t = theta * DEG
    e = np.exp(-env.b * (theta - env.a))
    r = (
        math.pi * np.tan(t) / (9.0 * LN10)
        + env.a * env.b * (env.eta_los - env.eta_nlos) * e / (env.a * e + 1.0) ** 2
        - A_eff * math.pi * np.cos(t) / (18.0 * LN10 * (1.0 - np.sin(t)))
    )
    return float(r) if r.ndim == 0 else r


def _relative_loss(theta, env, A_eff):
    # path loss at unit horizontal distance, minus the constant terms
    t = np.asarray(theta, dtype=float) * DEG
    return (
        los_probability(theta, env) * (env.eta_los - env.eta_nlos)
        - 20.0 * np.log10(np.cos(t))
        - A_eff * 10.0 * np.log10(2.0 / (1.0 - np.sin(t)))
    )


@lru_cache(maxsize=256)
def optimal_elevation(env: Environment, A_eff: float, lo: float = 0.1, hi: float = 89.9) -> ElevationSolution:
    """Cell-edge elevation angle minimising path loss.

    Every minus-to-plus sign change of :func:`elevation_residual` on a
    0.1 degree scan of ``[lo, hi]`` is refined by bisection; the root with
    the lowest path loss wins.
    """
    grid = np.linspace(lo, hi, int(round((hi - lo) / 0.1)) + 1)
    res = elevation_residual(grid, env, A_eff)
    idx = np.nonzero((res[:-1] < 0) & (res[1:] >= 0))[0]
    if len(idx) == 0:
        raise NoInteriorOptimumError(
            f"path-loss derivative has no sign change on ({lo}, {hi}) deg for {env.label}, A_eff={A_eff}"
        )
    roots = []
    for i in idx:
        if res[i + 1] == 0.0:
            roots.append(float(grid[i + 1]))
        else:
            roots.append(bisect(elevation_residual, grid[i], grid[i + 1], args=(env, A_eff), xtol=1e-10, rtol=4 * np.finfo(float).eps))
    theta = min(roots, key=lambda th: _relative_loss(th, env, A_eff))
    return ElevationSolution(theta_star=theta, height_ratio=math.tan(theta * DEG))


def dbm_to_watt(p_dbm):
    return 10.0 ** ((np.asarray(p_dbm, dtype=float) - 30.0) / 10.0)


def shannon_rate(snr, bandwidth: float):
    """Shannon capacity in bit/s for a linear SNR."""
    return bandwidth * np.log2(1.0 + np.asarray(snr, dtype=float))


def edge_snr(k: int, D_max: float, env: Environment, radio: RadioParams) -> float:
    D = packing_radius(k, D_max)
    H = optimal_elevation(env, radio.A_eff).height(D)
    loss_lin = 10.0 ** (path_loss_db(D, H, env, radio) / 10.0)
    noise_w = radio.B * float(dbm_to_watt(radio.N0))
    return float(dbm_to_watt(radio.P_t)) / (noise_w * loss_lin)


def edge_rate(k: int, D_max: float, env: Environment, radio: RadioParams) -> float:
    """Rate (bit/s) delivered to a user on the edge of one of ``k`` cells covering radius ``D_max``."""
    return float(shannon_rate(edge_snr(k, D_max, env, radio), radio.B))

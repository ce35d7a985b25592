"""PV array and wind-turbine farm output from hourly weather."""
from __future__ import annotations

import configparser
import csv
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import ConfigurationError, ParseError

K_BOLTZMANN = 1.380649e-23   # J/K
Q_ELECTRON = 1.602176634e-19  # C
ZERO_CELSIUS = 273.15


@dataclass(frozen=True)
class PvParams:
    alpha: float = 0.0474         # %/degC, short-circuit current
    beta: float = -0.285          # %/degC, open-circuit voltage
    n_cells: int = 60
    n_I: float = 1.5
    V_m_ST: float = 31.8          # V
    I_m_ST: float = 8.85          # A
    G_ST: float = 1000.0          # W/m^2
    G_NOC: float = 800.0          # W/m^2
    T_a_NOC: float = 20.0         # degC
    T_C_NOC: float = 45.0         # degC
    T_a_ST: float = 25.0          # degC, ambient at standard test
    eps_conv: float = 0.95
    eps_mppt: float = 0.95
    unit_cost: float = 202.0      # EUR

    def __post_init__(self):
        for name in ("eps_conv", "eps_mppt"):
            if not 0 < getattr(self, name) <= 1:
                raise ConfigurationError(f"{name} must lie in (0, 1]")
        if self.G_ST <= 0 or self.G_NOC <= 0:
            raise ConfigurationError("reference irradiances must be positive")

    @property
    def T_ST(self) -> float:
        """Cell temperature at standard test irradiance and ambient."""
        return pv_cell_temperature(self.G_ST, self.T_a_ST, self)


def pv_cell_temperature(G, T_a, pv: PvParams = PvParams()):
    G = np.asarray(G, dtype=float)
    T = np.asarray(T_a, dtype=float) + (pv.T_C_NOC - pv.T_a_NOC) / pv.G_NOC * G
    return float(T) if T.ndim == 0 else T


def pv_operating_point(G, T_a, pv: PvParams = PvParams(), literal_current: bool = False):
    """Maximum-power voltage (V) and current (A) of one panel.

    ``literal_current=True`` scales the current by ``G_ST / G`` instead of
    ``G / G_ST``; it diverges at low irradiance and exists for comparison only.
    """
    G = np.asarray(G, dtype=float)
    T_C = pv_cell_temperature(G, T_a, pv)
    dT = T_C - pv.T_ST
    V_t = pv.n_cells * K_BOLTZMANN * pv.n_I * (T_C + ZERO_CELSIUS) / Q_ELECTRON
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = G / pv.G_ST
        log_term = np.where(G > 0, np.log(np.where(G > 0, ratio, 1.0)), 0.0)
        irr = 1.0 / ratio if literal_current else ratio
    V_m = pv.V_m_ST + pv.beta / 100.0 * pv.V_m_ST * dT + V_t * log_term
    I_m = pv.I_m_ST * irr + pv.alpha / 100.0 * pv.I_m_ST * dT
    return V_m, I_m


def pv_power(G, T_a, n_pv=1, pv: PvParams = PvParams(), literal_current: bool = False, with_flags: bool = False):
    """Array output (W) of ``n_pv`` panels; zero when there is no irradiance.

    Negative operating points at extreme inputs are clamped to zero. With
    ``with_flags=True`` the boolean mask of clamped samples is returned too.
    """
    G = np.asarray(G, dtype=float)
    V_m, I_m = pv_operating_point(G, T_a, pv, literal_current)
    with np.errstate(invalid="ignore"):
        p = V_m * I_m * pv.eps_conv * pv.eps_mppt
    # two negative factors would otherwise give a spurious positive product
    clamped = (G > 0) & ((V_m <= 0) | (I_m <= 0))
    p = np.where(G > 0, p, 0.0)
    p = n_pv * np.where(clamped, 0.0, p)
    if np.ndim(p) == 0:
        p, clamped = float(p), bool(clamped)
    return (p, clamped) if with_flags else p


@dataclass(frozen=True)
class TurbineCurve:
    kind: str
    wind: tuple[float, ...]
    power: tuple[float, ...]
    cut_in: float
    cut_out: float
    rated_power: float
    unit_cost: float
    _w: np.ndarray = field(init=False, repr=False, compare=False)
    _p: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(self.wind) == 0:
            raise ConfigurationError(f"turbine curve {self.kind!r} is empty")
        if len(self.wind) != len(self.power):
            raise ConfigurationError(f"turbine curve {self.kind!r}: speed and power columns differ in length")
        w = np.asarray(self.wind, dtype=float)
        p = np.asarray(self.power, dtype=float)
        if np.any(np.diff(w) <= 0):
            raise ConfigurationError(f"turbine curve {self.kind!r}: wind speeds must be strictly increasing")
        if np.any(p < 0) or np.any(p > 1.1 * self.rated_power):
            raise ConfigurationError(f"turbine curve {self.kind!r}: power outside [0, 1.1 x rated]")
        if not 0 <= self.cut_in < self.cut_out:
            raise ConfigurationError(f"turbine curve {self.kind!r}: need 0 <= cut_in < cut_out")
        object.__setattr__(self, "_w", w)
        object.__setattr__(self, "_p", p)


def turbine_power(v, curve: TurbineCurve):
    """Piecewise-linear power curve (W); zero outside ``[cut_in, cut_out]``."""
    v = np.asarray(v, dtype=float)
    p = np.interp(v, curve._w, curve._p)
    p = np.where((v < curve.cut_in) | (v > curve.cut_out), 0.0, p)
    return float(p) if p.ndim == 0 else p


def farm_power(v, n_w500: int, n_w1000: int, curves):
    """Total turbine output (W); ``curves`` maps ``"W500"``/``"W1000"`` to curves."""
    return n_w500 * turbine_power(v, curves["W500"]) + n_w1000 * turbine_power(v, curves["W1000"])


def load_turbine_curve(csv_path, meta_path=None, kind=None) -> TurbineCurve:
    """Read a ``wind_mps,power_w`` CSV plus its ``[turbine]`` sidecar.

    The sidecar defaults to the CSV path with an ``.ini`` suffix and must
    define ``cut_in``, ``cut_out``, ``rated_power`` and ``unit_cost_eur``.
    """
    csv_path = Path(csv_path)
    meta_path = Path(meta_path) if meta_path is not None else csv_path.with_suffix(".ini")
    wind, power = [], []
    with open(csv_path, newline="") as fh:
        reader = csv.reader(row for row in fh if row.strip() and not row.startswith("#"))
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["wind_mps", "power_w"]:
            raise ParseError("expected header 'wind_mps,power_w'", row=1, path=csv_path)
        for i, row in enumerate(reader, start=2):
            try:
                wind.append(float(row[0]))
                power.append(float(row[1]))
            except (ValueError, IndexError) as exc:
                raise ParseError(f"bad value ({exc})", row=i, path=csv_path) from None
    cfg = configparser.ConfigParser()
    if not cfg.read(meta_path):
        raise ConfigurationError(f"turbine sidecar not found: {meta_path}")
    try:
        sec = cfg["turbine"]
        meta = {k: sec.getfloat(k) for k in ("cut_in", "cut_out", "rated_power", "unit_cost_eur")}
        kind = kind or sec.get("kind", csv_path.stem)
    except (KeyError, ValueError) as exc:
        raise ConfigurationError(f"{meta_path}: incomplete [turbine] block ({exc})") from None
    return TurbineCurve(kind=kind, wind=tuple(wind), power=tuple(power), cut_in=meta["cut_in"],
                        cut_out=meta["cut_out"], rated_power=meta["rated_power"], unit_cost=meta["unit_cost_eur"])


def default_turbine_curves() -> dict[str, TurbineCurve]:
    """Shipped approximate curves for the 500 W and 1 kW machines."""
    base = resources.files("uavsizing") / "data"
    out = {}
    for kind, stem in (("W500", "turbine_w500"), ("W1000", "turbine_w1000")):
        with resources.as_file(base / f"{stem}.csv") as c, resources.as_file(base / f"{stem}.ini") as m:
            out[kind] = load_turbine_curve(c, m, kind=kind)
    return out

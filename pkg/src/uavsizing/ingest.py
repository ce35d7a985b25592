"""Weather-trace and traffic-profile input.

The canonical weather CSV has the header ``time,G_i_wm2,T2m_c,WS10m_mps``
(plane-of-array irradiance, 2 m air temperature, 10 m wind speed) with
ISO ``YYYY-MM-DDTHH:MM`` timestamps. PVGIS-style ``YYYYMMDD:HHMM`` stamps
are accepted on input.
"""
from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Mapping

import numpy as np

from .errors import ConfigurationError, DataError, ParseError

HOURS_PER_YEAR = 8760
CANONICAL_COLUMNS = ("time", "G_i_wm2", "T2m_c", "WS10m_mps")
WIND_ENVELOPE_MPS = 30.0
_ONE_HOUR = np.timedelta64(60, "m")


class OutOfEnvelopeWarning(UserWarning):
    """Wind samples beyond what the airframe can counter."""


class LeapDayNotice(UserWarning):
    """February 29 was dropped to keep a 8760-hour horizon."""


@dataclass(frozen=True)
class HourlyTrace:
    time: np.ndarray       # datetime64[m]
    G_irr: np.ndarray      # W/m^2
    T_a: np.ndarray        # degC
    wind_10m: np.ndarray   # m/s

    def __post_init__(self):
        n = len(self.time)
        if not (len(self.G_irr) == len(self.T_a) == len(self.wind_10m) == n):
            raise DataError("trace columns differ in length")
        if n > 1 and np.any(np.diff(self.time) <= np.timedelta64(0, "m")):
            raise DataError("timestamps must be strictly increasing")
        if np.any(self.G_irr < 0):
            raise DataError("irradiance must be non-negative")
        if np.any(self.wind_10m < 0):
            raise DataError("wind speed must be non-negative")

    def __len__(self) -> int:
        return len(self.time)

    @property
    def hour_of_day(self) -> np.ndarray:
        return np.arange(len(self)) % 24

    @property
    def day_index(self) -> np.ndarray:
        return np.arange(len(self)) // 24

    def window(self, start: int, hours: int) -> "HourlyTrace":
        """Sub-trace for reduced instances; ``start`` should be a multiple of 24 to keep hour-of-day alignment."""
        sl = slice(start, start + hours)
        return HourlyTrace(self.time[sl], self.G_irr[sl], self.T_a[sl], self.wind_10m[sl])


def _parse_time(text: str) -> np.datetime64:
    text = text.strip()
    if len(text) == 13 and text[8] == ":":
        text = f"{text[0:4]}-{text[4:6]}-{text[6:8]}T{text[9:11]}:{text[11:13]}"
    return np.datetime64(text, "m")


def _format_time(t: np.datetime64) -> str:
    return str(np.datetime64(t, "m"))


def parse_weather_csv(path, columns: Mapping[str, str] | None = None, expected_hours: int = HOURS_PER_YEAR) -> HourlyTrace:
    """Read an hourly weather year.

    ``columns`` maps canonical names to the file's header names when they
    differ. Rows are matched positionally to hour ``index % 24`` of day
    ``index // 24``.
    """
    path = Path(path)
    names = {c: (columns or {}).get(c, c) for c in CANONICAL_COLUMNS}
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise ParseError("empty file", row=1, path=path)
        header = [h.strip() for h in header]
        missing = [names[c] for c in CANONICAL_COLUMNS if names[c] not in header]
        if missing:
            raise ParseError(f"missing columns {missing}; found {header}", row=1, path=path)
        idx = {c: header.index(names[c]) for c in CANONICAL_COLUMNS}
        times, G, T, W = [], [], [], []
        for line, row in enumerate(reader, start=2):
            if not row or not "".join(row).strip():
                continue
            try:
                times.append(_parse_time(row[idx["time"]]))
            except (ValueError, IndexError):
                raise ParseError("bad timestamp", row=line, column=names["time"], path=path) from None
            for c, sink in (("G_i_wm2", G), ("T2m_c", T), ("WS10m_mps", W)):
                try:
                    v = float(row[idx[c]])
                except (ValueError, IndexError):
                    raise ParseError("not a number", row=line, column=names[c], path=path) from None
                if not math.isfinite(v):
                    raise ParseError("non-finite value", row=line, column=names[c], path=path)
                if c == "G_i_wm2" and v < 0:
                    raise ParseError(f"negative irradiance {v}", row=line, column=names[c], path=path)
                if c == "WS10m_mps" and v < 0:
                    raise ParseError(f"negative wind speed {v}", row=line, column=names[c], path=path)
                sink.append(v)
    time = np.array(times, dtype="datetime64[m]")
    for i in range(1, len(time)):
        if time[i] - time[i - 1] != _ONE_HOUR:
            raise ParseError("timestamps are not consecutive hours", row=i + 2, column=names["time"], path=path)
    G, T, W = (np.array(x, dtype=float) for x in (G, T, W))
    if expected_hours == HOURS_PER_YEAR and len(time) == HOURS_PER_YEAR + 24:
        md = np.array([_format_time(t)[5:10] for t in time])
        keep = md != "02-29"
        if keep.sum() == HOURS_PER_YEAR:
            warnings.warn(f"{path}: leap year, February 29 dropped", LeapDayNotice, stacklevel=2)
            time, G, T, W = time[keep], G[keep], T[keep], W[keep]
    if expected_hours is not None and len(time) != expected_hours:
        raise ParseError(f"expected {expected_hours} hourly rows, found {len(time)}", path=path)
    if np.any(W > WIND_ENVELOPE_MPS):
        n = int(np.sum(W > WIND_ENVELOPE_MPS))
        warnings.warn(f"{path}: {n} wind samples above {WIND_ENVELOPE_MPS} m/s", OutOfEnvelopeWarning, stacklevel=2)
    return HourlyTrace(time, G, T, W)


def write_weather_csv(trace: HourlyTrace, path) -> None:
    """Write ``trace`` in the canonical format (shortest round-trip float repr)."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CANONICAL_COLUMNS)
        for t, g, ta, v in zip(trace.time, trace.G_irr, trace.T_a, trace.wind_10m):
            w.writerow([_format_time(t), repr(float(g)), repr(float(ta)), repr(float(v))])


@dataclass(frozen=True)
class TrafficProfile:
    """Hourly requested rate per unit area (Mbps/m^2), optionally with day-to-day samples."""

    lambda_h: np.ndarray
    samples: tuple[np.ndarray, ...] | None = None

    def __post_init__(self):
        if len(self.lambda_h) != 24:
            raise DataError(f"traffic profile needs 24 hourly values, got {len(self.lambda_h)}")
        if np.any(np.asarray(self.lambda_h) < 0):
            raise DataError("traffic values must be non-negative")
        if self.samples is not None:
            if len(self.samples) != 24 or any(len(s) == 0 for s in self.samples):
                raise DataError("samples must give a non-empty set for each of the 24 hours")
            if any(np.any(np.asarray(s) < 0) for s in self.samples):
                raise DataError("traffic samples must be non-negative")

    def hourly(self, n_hours: int) -> np.ndarray:
        """Demand density for each slot of an ``n_hours`` horizon starting at midnight."""
        return np.asarray(self.lambda_h, dtype=float)[np.arange(n_hours) % 24]


def load_traffic_profile(path) -> TrafficProfile:
    """Read 24 lines of ``mean[,sample,...]`` in Mbps/m^2. ``#`` starts a comment."""
    path = Path(path)
    means, samples = [], []
    with open(path) as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            fields = [f.strip() for f in line.split(",")]
            try:
                vals = [float(f) for f in fields if f]
            except ValueError:
                raise ParseError("not a number", row=line_no, path=path) from None
            if any(v < 0 or not math.isfinite(v) for v in vals):
                raise ParseError("traffic values must be finite and non-negative", row=line_no, path=path)
            means.append(vals[0])
            samples.append(np.array(vals[1:]))
    if len(means) != 24:
        raise ParseError(f"expected 24 hourly values, found {len(means)}", path=path)
    with_samples = [len(s) > 0 for s in samples]
    if any(with_samples) and not all(with_samples):
        raise ParseError("either every hour or no hour carries samples", path=path)
    return TrafficProfile(np.array(means), tuple(samples) if all(with_samples) else None)


def lower_quantile(values, level: float) -> float:
    """Sorted sample at index ``ceil(level * n) - 1``; no interpolation."""
    v = np.sort(np.asarray(values, dtype=float))
    i = max(int(math.ceil(level * len(v) - 1e-9)) - 1, 0)
    return float(v[i])


def provision_quantile(profile: TrafficProfile, level: float,
                       scale: Callable[[float], float] | Mapping[float, float] | None = None) -> TrafficProfile:
    """Replace each hour's demand by its ``level`` quantile.

    Without samples, ``scale`` (a callable or a level-to-factor table)
    multiplies the mean profile instead.
    """
    if not 0 < level < 1:
        raise ConfigurationError(f"provisioning level must lie in (0, 1), got {level}")
    if profile.samples is not None:
        lam = np.array([lower_quantile(s, level) for s in profile.samples])
        return TrafficProfile(lam, profile.samples)
    if scale is None:
        raise ConfigurationError("no traffic samples and no scale model for quantile provisioning")
    if callable(scale):
        factor = float(scale(level))
    else:
        if level not in scale:
            raise ConfigurationError(f"scale table has no entry for level {level}")
        factor = float(scale[level])
    return TrafficProfile(np.asarray(profile.lambda_h, dtype=float) * factor, None)

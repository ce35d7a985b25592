"""Seeded synthetic weather years and traffic profiles.

These are stand-ins for measured data, for tests and demos. They have
plausible daily and seasonal structure and nothing more.
"""
from __future__ import annotations

import numpy as np

from .ingest import HOURS_PER_YEAR, HourlyTrace, TrafficProfile


def synthetic_trace(seed: int = 2015, year: int = 2015, wind_mean: float = 3.5, solar_peak: float = 850.0,
                    temp_mean: float = 12.0, latitude_swing: float = 0.35) -> HourlyTrace:
    """A 8760-hour year: bell-shaped daylight irradiance under AR(1) cloud cover,
    seasonal and diurnal temperature, and autocorrelated Rayleigh-like wind."""
    rng = np.random.default_rng(seed)
    n = HOURS_PER_YEAR
    hour = np.arange(n) % 24
    day = np.arange(n) // 24
    season = -np.cos(2 * np.pi * (day + 10) / 365.0)            # -1 midwinter, +1 midsummer
    daylen = 12.0 + 4.0 * season * latitude_swing / 0.35
    noon_dist = np.abs(hour + 0.5 - 12.5)
    sun = np.clip(np.cos(np.pi * noon_dist / daylen), 0.0, None)
    sun = np.where(noon_dist < daylen / 2, sun, 0.0)
    clouds = np.empty(365)
    c = 0.0
    for i in range(365):
        c = 0.7 * c + 0.3 * rng.normal()
        clouds[i] = c
    clearness = np.clip(0.65 + 0.35 * clouds[day] + 0.1 * season, 0.1, 1.0)
    G = solar_peak * (0.75 + 0.25 * season) * sun ** 1.3 * clearness
    G = np.round(G, 1)
    T = temp_mean + 9.0 * season + 4.0 * np.sin(2 * np.pi * (hour - 9) / 24) + rng.normal(0, 1.2, n)
    T = np.round(T, 2)
    z = np.empty(n)
    a, b = 0.0, 0.0
    for i in range(n):
        a = 0.95 * a + np.sqrt(1 - 0.95 ** 2) * rng.normal()
        b = 0.95 * b + np.sqrt(1 - 0.95 ** 2) * rng.normal()
        z[i] = np.hypot(a, b)
    wind = wind_mean * z / np.sqrt(np.pi / 2) * (1.0 - 0.15 * season)
    wind = np.round(np.clip(wind, 0.0, None), 2)
    start = np.datetime64(f"{year}-01-01T00:00", "m")
    time = start + np.arange(n) * np.timedelta64(60, "m")
    return HourlyTrace(time, G, T, wind)


# Mean demand shape over the day, normalised to a peak of 1.
DAILY_SHAPE = np.array([
    0.42, 0.30, 0.22, 0.18, 0.16, 0.18, 0.28, 0.45, 0.62, 0.74, 0.82, 0.88,
    0.92, 0.90, 0.88, 0.87, 0.89, 0.93, 0.98, 1.00, 0.97, 0.88, 0.74, 0.58,
])


def synthetic_traffic(peak: float = 3.0e-5, n_samples: int = 60, spread: float = 0.25, seed: int = 7) -> TrafficProfile:
    """Daily-cycle demand (Mbps/m^2) with lognormal day-to-day samples around each hourly mean."""
    rng = np.random.default_rng(seed)
    means = peak * DAILY_SHAPE
    samples = tuple(m * rng.lognormal(-spread ** 2 / 2, spread, n_samples) for m in means)
    return TrafficProfile(means, samples)

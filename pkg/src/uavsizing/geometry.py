"""Cell radii and hover centres for k equal disks covering a circular area.

Layouts are built once on the unit disk and scaled by ``D_max``. The first
centre always sits at polar angle 0 so results are deterministic.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError, GeometryError

K_MAX = 10

_GAMMA_TABLE = {1: 1.0, 2: 1.0, 3: 1.1547, 4: math.sqrt(2.0), 5: 1.641, 6: 1.7988, 7: 2.0}

# Minimal coverings of the unit disk by 5 and 6 disks (covering radii
# 0.6093828641 and 0.5559052114), found by minimax optimisation over the
# Voronoi critical points. No symmetric ring reaches these radii.
_UNIT_COVER_5 = (
    (0.6323717573757685, 0.0),
    (0.20408877633051575, 0.5985330498265472),
    (-0.6438997450271897, 0.4626506800437397),
    (-0.4723623192688424, -0.33800095528307994),
    (0.2300846145268748, -0.7587579378321833),
)
_UNIT_COVER_6 = (
    (0.8312456848325921, 0.0),
    (0.2892906109467833, 0.4321502229661423),
    (-0.3167845877947197, 0.7685160352509934),
    (-0.6732380878071281, 0.023535873062226265),
    (-0.31251335997123364, -0.4668410002988679),
    (0.27832824044889615, -0.6134629986915444),
)


def gamma(k: int) -> float:
    """Ratio between the coverage radius and the per-UAV cell radius."""
    if not (isinstance(k, (int, np.integer)) and 1 <= k <= K_MAX):
        raise DomainError(f"swarm size must be an integer in 1..{K_MAX}, got {k!r}")
    k = int(k)
    if k <= 7:
        return _GAMMA_TABLE[k]
    return 1.0 + 2.0 * math.cos(2.0 * math.pi / (k - 1))


def packing_radius(k: int, D_max: float) -> float:
    if not D_max > 0:
        raise DomainError(f"D_max must be positive, got {D_max}")
    return D_max / gamma(k)


@dataclass(frozen=True)
class SwarmLayout:
    k: int
    cell_radius: float
    centers: np.ndarray  # shape (k, 2), metres

    @property
    def distances(self) -> np.ndarray:
        return np.hypot(self.centers[:, 0], self.centers[:, 1])

    def scaled(self, s: float) -> "SwarmLayout":
        return SwarmLayout(self.k, self.cell_radius * s, self.centers * s)


def coverage_check(layout: SwarmLayout, D_max: float, grid_n: int = 512) -> bool:
    """True iff every lattice point strictly inside the ``D_max`` disk is within a cell.

    The lattice is ``grid_n`` x ``grid_n`` points spanning ``[-D_max, D_max]``.
    """
    if grid_n < 64:
        raise DomainError("coverage grid needs at least 64 points per axis")
    g = np.linspace(-D_max, D_max, grid_n)
    X, Y = np.meshgrid(g, g)
    inside = X ** 2 + Y ** 2 < D_max ** 2
    pts = np.column_stack([X[inside], Y[inside]])
    lim = (layout.cell_radius * (1.0 + 1e-9)) ** 2
    covered = np.zeros(len(pts), dtype=bool)
    for cx, cy in layout.centers:
        covered |= (pts[:, 0] - cx) ** 2 + (pts[:, 1] - cy) ** 2 <= lim
    return bool(covered.all())


def _ring_distance(m: int, r: float, central: bool) -> float:
    """Smallest ring radius at which ``m`` evenly spaced unit-disk cells cover the rim.

    The farthest rim point sits halfway between two neighbours; the ring must
    still reach the origin (``d <= r``) or, with a central cell, the inner
    intersection of neighbours (``d <= 2 r cos(pi/m)``).
    """
    half = math.pi / m
    disc = r * r - math.sin(half) ** 2
    if disc < -1e-12:
        raise GeometryError(f"cells of radius {r:.6f} cannot cover the rim with a ring of {m}")
    d = math.cos(half) - math.sqrt(max(disc, 0.0))
    limit = 2.0 * r * math.cos(half) if central else r
    if d > limit * (1.0 + 1e-9):
        raise GeometryError(f"no ring distance covers both rim and interior for m={m}, r={r:.6f}")
    return min(d, limit)


def _ring(m: int, d: float) -> list[tuple[float, float]]:
    return [(d * math.cos(2.0 * math.pi * j / m), d * math.sin(2.0 * math.pi * j / m)) for j in range(m)]


@lru_cache(maxsize=None)
def _unit_layout(k: int) -> SwarmLayout:
    r = 1.0 / gamma(k)
    if k in (1, 2):
        pts = [(0.0, 0.0)] * k
    elif k in (3, 4):
        pts = _ring(k, _ring_distance(k, r, central=False))
    elif k == 5:
        pts = list(_UNIT_COVER_5)
    elif k == 6:
        pts = list(_UNIT_COVER_6)
    elif k == 7:
        pts = _ring(6, math.sqrt(3.0) * r) + [(0.0, 0.0)]
    else:
        pts = _ring(k - 1, _ring_distance(k - 1, r, central=True)) + [(0.0, 0.0)]
    layout = SwarmLayout(k, r, np.array(pts, dtype=float))
    if not coverage_check(layout, 1.0, 512):
        raise GeometryError(f"layout for k={k} fails the coverage certificate")
    return layout


def hover_layout(k: int, D_max: float) -> SwarmLayout:
    """Hover centres (m) and cell radius for a swarm of ``k`` over a disk of radius ``D_max``."""
    gamma(k)
    if not D_max > 0:
        raise DomainError(f"D_max must be positive, got {D_max}")
    return _unit_layout(int(k)).scaled(D_max)

"""Occupancy geometry for bosons and fermions, and the coincidence-measurement Monte Carlo.

Two world-line sets interact when they come closer than the cell tolerance.
"""
from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from .core import NATURAL, TWO_PI, gamma_factor
from .worldlines import ParticleSpec, debroglie_lattice, fermion_radius, support_triad


class CellTooSmallError(ValueError):
    pass


class MonteCarloConfigError(ValueError):
    pass


@dataclass(frozen=True)
class Cell:
    side: float
    tolerance: float

    def __post_init__(self):
        if not self.side > 0 or not self.tolerance > 0:
            raise ValueError("cell side and tolerance must be positive")
        if self.tolerance >= self.side / 10:
            raise ValueError("tolerance must be much smaller than the cell side")

    @classmethod
    def compton(cls, m0: float, tol_ratio: float = 1e-6) -> "Cell":
        side = NATURAL.h / (m0 * NATURAL.c)
        return cls(side, side * tol_ratio)


@dataclass
class OccupancyResult:
    placed: int
    intersections: list = field(default_factory=list)  # ((i, j), min_distance)
    capacity_reached: bool = False
    distances: dict = field(default_factory=dict)  # (i, j) -> min distance, all pairs
    attempts: list = field(default_factory=list)
    occupants: list = field(default_factory=list)

    def summary(self) -> str:
        return (f"placed={self.placed} intersections={len(self.intersections)} "
                f"capacity_reached={str(self.capacity_reached).lower()}")


# -- bosons ---------------------------------------------------------------

def boson_family_directions(spec: ParticleSpec) -> np.ndarray:
    """Unit 6D directions of the tau, sigma and phi lines of one boson.

    tau runs along (gamma, gamma u); sigma along e1 and x4; phi along e2 and x5.
    """
    e1, e2, e3 = support_triad(spec.direction)
    g = gamma_factor(spec.speed)
    tau = np.concatenate([[g], g * spec.velocity, [0.0, 0.0]])
    sig = np.concatenate([[0.0], e1, [1.0, 0.0]])
    phi = np.concatenate([[0.0], e2, [0.0, 1.0]])
    dirs = np.stack([tau, sig, phi])
    return dirs / np.linalg.norm(dirs, axis=1, keepdims=True)


def later_direction(spec: ParticleSpec) -> np.ndarray:
    """Unit offset that is later in x4 and x5 and orthogonal to every family line."""
    e1, e2, _ = support_triad(spec.direction)
    v = np.concatenate([[0.0], -e1 - e2, [1.0, 1.0]])
    return v / np.linalg.norm(v)


def line_distance(p1, d1, p2, d2) -> float:
    """Minimum Euclidean distance between two infinite lines in R^n.

    The offset is projected off span(d1, d2) by a QR factorisation;
    parallel lines drop to a one-dimensional span.
    """
    w = np.asarray(p2, float) - np.asarray(p1, float)
    D = np.column_stack([np.asarray(d1, float), np.asarray(d2, float)])
    q, r = np.linalg.qr(D)
    keep = np.abs(np.diag(r)) > 1e-12 * np.abs(r[0, 0])
    q = q[:, keep]
    return float(np.linalg.norm(w - q @ (q.T @ w)))


def boson_packing(n: int, cell: Cell, spec: ParticleSpec, offset: float | None = None,
                  order=None) -> OccupancyResult:
    """Place n copies of a boson's world-line family, each slightly later than the last.

    `order` optionally relabels the copies (a permutation of range(n)).
    """
    if spec.cls not in ("spinless", "boson"):
        raise ValueError("boson_packing needs a spinless or boson spec")
    if n <= 0:
        return OccupancyResult(0)
    if offset is None:
        offset = min(cell.side / 1000.0, cell.side / (n + 1))
    dirs = boson_family_directions(spec)
    later = later_direction(spec)
    base = np.zeros(6)
    base[1:4] = cell.side / 2.0
    labels = list(range(n)) if order is None else list(order)
    points = {labels[j]: base + j * offset * later for j in range(n)}
    res = OccupancyResult(0)
    blocked = set()
    for i, j in itertools.combinations(sorted(points), 2):
        dmin = min(line_distance(points[i], a, points[j], b) for a in dirs for b in dirs)
        res.distances[(i, j)] = dmin
        if dmin < cell.tolerance:
            res.intersections.append(((i, j), dmin))
            blocked.add(j)
    res.placed = n - len(blocked)
    return res


def boson_family_samples(spec: ParticleSpec, base, length: float, samples: int = 64) -> dict:
    """Sampled points of each family line through `base`, for figures."""
    dirs = boson_family_directions(spec)
    s = np.linspace(-length / 2, length / 2, samples)
    return {k: base + np.outer(s, d) for k, d in zip(("tau", "sigma", "phi"), dirs)}


# -- fermions -------------------------------------------------------------

@dataclass(frozen=True)
class Hemisphere:
    """Open half sphere swept by the sigma circle and the phi arc."""

    center: tuple
    radius: float
    orientation: int

    def contains_direction(self, points, margin: float = 0.0) -> np.ndarray:
        rel = np.atleast_2d(points) - np.asarray(self.center)
        return self.orientation * rel[:, 2] > margin

    def bounds(self) -> tuple[np.ndarray, np.ndarray]:
        c = np.asarray(self.center, float)
        r = self.radius
        lo = c - r
        hi = c + r
        if self.orientation > 0:
            lo[2] = c[2]
        else:
            hi[2] = c[2]
        return lo, hi

    def inside(self, cell: Cell) -> bool:
        lo, hi = self.bounds()
        t = cell.tolerance
        return bool(np.all(lo >= -t) and np.all(hi <= cell.side + t))

    def sample(self, n_polar: int = 256, n_azimuth: int = 256, rotation: float = 0.0) -> np.ndarray:
        """Points swept by the two motions: arc angle phi/4 with phi in [0, 2 pi), full sigma circle."""
        th = (np.arange(n_polar) * TWO_PI / n_polar) / 4.0
        az = rotation + np.arange(n_azimuth) * TWO_PI / n_azimuth
        T, A = np.meshgrid(th, az, indexing="ij")
        pts = np.stack([np.sin(T) * np.cos(A), np.sin(T) * np.sin(A), self.orientation * np.cos(T)], axis=-1)
        return np.asarray(self.center) + self.radius * pts.reshape(-1, 3)


def hemispheres_intersect(h1: Hemisphere, h2: Hemisphere, tol: float, n_circle: int = 2048) -> bool:
    """Whether two open equal-radius hemispheres share a point.

    The sphere-sphere intersection circle is sampled and each point is
    tested against both open halves.
    """
    c1, c2 = np.asarray(h1.center, float), np.asarray(h2.center, float)
    r = h1.radius
    delta = c2 - c1
    d = float(np.linalg.norm(delta))
    if d < tol:
        return h1.orientation == h2.orientation
    if d > 2.0 * r + tol:
        return False
    rho = math.sqrt(max(r * r - d * d / 4.0, 0.0))
    nrm = delta / d
    helper = np.array([1.0, 0.0, 0.0]) if abs(nrm[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    a = np.cross(nrm, helper)
    a /= np.linalg.norm(a)
    b = np.cross(nrm, a)
    ang = np.arange(n_circle) * TWO_PI / n_circle
    pts = (c1 + delta / 2.0) + rho * (np.outer(np.cos(ang), a) + np.outer(np.sin(ang), b))
    both = h1.contains_direction(pts, tol) & h2.contains_direction(pts, tol)
    return bool(np.any(both))


def hemisphere_distance(h1: Hemisphere, h2: Hemisphere, rotation: float = 0.0, samples: int = 128) -> float:
    """Minimum distance between the sampled world-line points of two hemispheres."""
    p1 = h1.sample(samples, samples, rotation)
    p2 = h2.sample(samples, samples, rotation)
    d, _ = cKDTree(p1).query(p2, k=1)
    return float(np.min(d))


def _fermion_interacts(h, others, cell, rotation) -> tuple[bool, float]:
    if any(hemispheres_intersect(h, o, cell.tolerance) for o in others):
        return True, 0.0
    dmin = min((hemisphere_distance(h, o, rotation) for o in others), default=math.inf)
    return dmin < cell.tolerance, dmin


def fermion_capacity(cell: Cell, spec: ParticleSpec, grid: int = 500, count: int | None = None,
                     rotation: float = 0.0) -> OccupancyResult:
    """Fill a Compton cell with fermion hemispheres until no further one fits without crossing.

    A placement must keep its hemisphere inside the cell. The first is
    centred with orientation +x3, the second shares its centre with
    orientation -x3. Third placements are searched over `grid` admissible
    centres for each orientation. `count` stops after that many placements.
    `rotation` turns every hemisphere's sampling origin about x3.
    """
    if spec.cls != "fermion":
        raise ValueError("fermion_capacity needs a fermion spec")
    r0 = fermion_radius(spec.m0)
    if cell.side < 2.0 * r0 * (1 - 1e-12):
        raise CellTooSmallError(f"cell side {cell.side} < h/(m0 c) = {2 * r0}")
    mid = cell.side / 2.0
    placed = []
    res = OccupancyResult(0)
    for o in (+1, -1):
        if count is not None and len(placed) >= count:
            return res
        h = Hemisphere((mid, mid, mid), r0, o)
        hit, dmin = _fermion_interacts(h, placed, cell, rotation)
        if hit or not h.inside(cell):
            res.intersections.append(((len(placed), len(placed) - 1), dmin))
            return res
        if placed:
            res.distances[(0, 1)] = dmin
        placed.append(h)
        res.placed = len(placed)
        res.occupants = list(placed)
    if count is not None and len(placed) >= count:
        return res
    blocked = True
    for cand in admissible_placements(cell, r0, grid):
        hit, dmin = _fermion_interacts(cand, placed, cell, rotation)
        res.attempts.append((cand, hit, dmin))
        if not hit:
            blocked = False
    res.capacity_reached = blocked
    return res


def admissible_placements(cell: Cell, r0: float, grid: int):
    """Hemispheres of radius r0 that fit in the cell, `grid` centres per orientation.

    When the cell side equals the diameter the admissible centres lie on the
    vertical axis through the cell centre: z in [0, r0] for +x3, [r0, 2 r0]
    for -x3 (shifted by any slack in a larger cell).
    """
    slack = cell.side - 2.0 * r0
    xy = np.linspace(r0, r0 + slack, max(1, int(round(math.sqrt(grid)))) if slack > 0 else 1)
    out = []
    for o in (+1, -1):
        zlo, zhi = (0.0, cell.side - r0) if o > 0 else (r0, cell.side)
        n_xy = len(xy) ** 2
        nz = max(1, grid // n_xy)
        for cx in xy:
            for cy in xy:
                for cz in np.linspace(zlo, zhi, nz):
                    out.append(Hemisphere((cx, cy, cz), r0, o))
    return out


def cube_grid_scan(cell: Cell, spec: ParticleSpec, per_axis: int = 10) -> dict:
    """Classify third placements on a per_axis^3 grid of centres x 2 orientations.

    Every candidate is either outside the cell, crossing an existing fermion,
    or free. Only "free" would break the two-fermion capacity.
    """
    r0 = fermion_radius(spec.m0)
    mid = cell.side / 2.0
    existing = [Hemisphere((mid, mid, mid), r0, +1), Hemisphere((mid, mid, mid), r0, -1)]
    counts = {"outside": 0, "crossing": 0, "free": 0}
    axis = (np.arange(per_axis) + 0.5) * cell.side / per_axis
    for cx, cy, cz in itertools.product(axis, axis, axis):
        for o in (+1, -1):
            h = Hemisphere((cx, cy, cz), r0, o)
            if not h.inside(cell):
                counts["outside"] += 1
            elif any(hemispheres_intersect(h, e, cell.tolerance) for e in existing):
                counts["crossing"] += 1
            else:
                counts["free"] += 1
    return counts


# -- measurement Monte Carlo ----------------------------------------------

@dataclass
class MeasurementResult:
    counts: np.ndarray  # detections per lattice position
    trials_per_position: np.ndarray
    trials: int
    window: float
    positions: np.ndarray

    @property
    def frequency(self) -> np.ndarray:
        """Detection frequency at each position (detections / visits)."""
        with np.errstate(invalid="ignore", divide="ignore"):
            return np.where(self.trials_per_position > 0, self.counts / self.trials_per_position, 0.0)

    @property
    def share(self) -> np.ndarray:
        """Detections at each position over all trials; sums to the total rate."""
        return self.counts / self.trials

    @property
    def rate(self) -> float:
        return float(self.counts.sum()) / self.trials

    @property
    def model_probability(self) -> float:
        """(w / 2 pi)^2: coincidence probability of this two-phase model."""
        return (self.window / TWO_PI) ** 2


_CHUNK = 1 << 16


def _chunk(seed: int, index: int, size: int, window: float, particle_phases: np.ndarray):
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(index,))))
    pos = rng.integers(0, len(particle_phases), size)
    app = rng.random((size, 2)) * TWO_PI
    diff = np.mod(app - particle_phases[pos], TWO_PI)
    hit = np.all(diff < window, axis=1)
    n = len(particle_phases)
    return np.bincount(pos[hit], minlength=n), np.bincount(pos, minlength=n)


def measurement_mc(trials: int, window: float, seed: int, spec: ParticleSpec | None = None,
                   n_positions: int = 8, t: float = 0.0, workers: int = 1) -> MeasurementResult:
    """Triple-time coincidence measurement with unsynchronised sigma, phi phases.

    Each trial puts the apparatus at a random lattice position with random
    (sigma, phi) phases; it detects the particle when both phase differences
    mod 2 pi are below `window`. Chunks are seeded from (seed, chunk index),
    so results do not depend on `workers`.
    """
    if trials <= 0:
        raise MonteCarloConfigError("trials must be positive")
    if not 0 < window < TWO_PI:
        raise MonteCarloConfigError("window must lie in (0, 2 pi)")
    if spec is None:
        spec = ParticleSpec("spinless", 1.0, (0.5, 0.0, 0.0))
    _, at_t0, _ = debroglie_lattice(spec, n_positions)
    x = np.outer(at_t0[:, 1], spec.direction)
    E, p = spec.energy_momentum()
    ph = np.mod((E * t - x @ p) / NATURAL.hbar, TWO_PI)
    particle = np.column_stack([ph, ph])
    sizes = [_CHUNK] * (trials // _CHUNK)
    if trials % _CHUNK:
        sizes.append(trials % _CHUNK)
    jobs = [(seed, i, s, window, particle) for i, s in enumerate(sizes)]
    if workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            parts = list(ex.map(lambda a: _chunk(*a), jobs))
    else:
        parts = [_chunk(*a) for a in jobs]
    counts = sum(p[0] for p in parts)
    visits = sum(p[1] for p in parts)
    return MeasurementResult(counts, visits, trials, window, at_t0[:, 1])

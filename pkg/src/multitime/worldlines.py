"""World-line generators for spinless particles, photons, massive bosons and fermions.

Every generator returns a `WorldlineSet`: for each proper-time kind
("tau", "sigma", "phi") an increasing line parameter and the sampled
events. Cosine-model lines also carry the oscillating proper-time value
itself (bounded by pi) in `values`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .core import NATURAL, TWO_PI, InvalidVelocityError, four_momentum, gamma_factor

KINDS = ("tau", "sigma", "phi")
ParticleClass = Literal["spinless", "photon", "boson", "fermion"]


class DomainError(ValueError):
    pass


class DegenerateWaveError(ValueError):
    pass


class DegenerateLatticeError(ValueError):
    """Lattice spacing is infinite (particle at rest)."""


@dataclass(frozen=True)
class ParticleSpec:
    cls: ParticleClass
    m0: float = 1.0
    u: tuple = (0.0, 0.0, 0.0)
    E0: float = 1.0
    B0: float = 1.0
    V10: float = 1.0
    V20: float = 1.0
    orientation: int = +1
    # photon wave number; the photon's u is c along k
    k: float = 1.0
    # scale factors lambda(E0), lambda(B0), lambda(V10), lambda(V20)
    lam_E0: float = 1.0
    lam_B0: float = 1.0
    lam_V10: float = 1.0
    lam_V20: float = 1.0

    def __post_init__(self):
        u = tuple(float(v) for v in self.u)
        if len(u) != 3:
            raise ValueError("u must be a 3-vector")
        object.__setattr__(self, "u", u)
        speed = math.sqrt(sum(v * v for v in u))
        if self.cls == "photon":
            if self.m0 != 0.0:
                raise ValueError("photon rest mass must be exactly 0")
            if speed == 0.0:
                object.__setattr__(self, "u", (0.0, 0.0, NATURAL.c))
            elif not math.isclose(speed, NATURAL.c, rel_tol=1e-12):
                raise InvalidVelocityError("photon moves at c along its wave-vector")
        elif self.cls in ("spinless", "boson", "fermion"):
            if not self.m0 > 0:
                raise ValueError(f"{self.cls} needs m0 > 0")
            if speed >= NATURAL.c:
                raise InvalidVelocityError(f"|u| = {speed} >= c")
        else:
            raise ValueError(f"unknown particle class {self.cls!r}")
        if self.orientation not in (+1, -1):
            raise ValueError("orientation must be +1 (+x3) or -1 (-x3)")
        for name in ("lam_E0", "lam_B0", "lam_V10", "lam_V20"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")

    @property
    def velocity(self) -> np.ndarray:
        return np.array(self.u)

    @property
    def speed(self) -> float:
        return float(np.linalg.norm(self.u))

    @property
    def direction(self) -> np.ndarray:
        """Unit direction of motion; +x3 when at rest."""
        s = self.speed
        return self.velocity / s if s > 0 else np.array([0.0, 0.0, 1.0])

    def energy_momentum(self) -> tuple[float, np.ndarray]:
        if self.cls == "photon":
            return self.k * NATURAL.c, self.k * self.direction
        return four_momentum(self.m0, self.u)

    @property
    def gamma(self) -> float:
        return gamma_factor(self.speed) if self.cls != "photon" else math.inf


@dataclass(frozen=True)
class Grid:
    samples: int = 256  # per period
    periods: int = 1

    def __post_init__(self):
        if self.samples < 2 or self.periods < 1:
            raise ValueError("need samples >= 2 and periods >= 1")

    def params(self, period: float, endpoint: bool = False) -> np.ndarray:
        n = self.samples * self.periods
        if endpoint:
            return np.linspace(0.0, self.periods * period, n + 1)
        return np.arange(n) * (period / self.samples)


@dataclass
class Worldline:
    kind: str
    proper_time: np.ndarray  # increasing line parameter, (N,)
    events: np.ndarray  # (N, 6)
    values: np.ndarray | None = None  # oscillating proper-time value where defined

    def __post_init__(self):
        self.proper_time = np.asarray(self.proper_time, dtype=float)
        self.events = np.asarray(self.events, dtype=float)
        if self.events.shape != (len(self.proper_time), 6):
            raise ValueError("events must be (N, 6) matching proper_time")
        if len(self.proper_time) > 1 and not np.all(np.diff(self.proper_time) > 0):
            raise ValueError(f"{self.kind}: proper-time values must be strictly increasing")


@dataclass
class WorldlineSet:
    cls: str
    lines: dict = field(default_factory=dict)
    period: float = math.nan  # period of the line parameter
    wavelength: float = math.nan

    def __getitem__(self, kind: str) -> Worldline:
        return self.lines[kind]

    def kinds(self):
        return [k for k in KINDS if k in self.lines]


@dataclass(frozen=True)
class LatticeSpec:
    dx: float
    dt: float
    n: int

    @classmethod
    def from_mass(cls, m: float, u: float, n: int, h: float = NATURAL.h, c: float = NATURAL.c) -> "LatticeSpec":
        """Spacings h/(m u) and h/(m c^2) for a particle of (relativistic) mass m."""
        if u == 0:
            raise DegenerateLatticeError("lattice spacing h/(m u) is infinite at u = 0")
        return cls(dx=h / (m * u), dt=h / (m * c**2), n=n)


# -- spinless -------------------------------------------------------------

def spinless_rest_sigma(x1, m0: float):
    """Rest-frame oscillation sigma = pi cos(m0 c x1 / hbar) on one wavelength."""
    x = np.asarray(x1, dtype=float)
    if np.any(x < 0) or np.any(x >= NATURAL.h / (m0 * NATURAL.c)):
        raise DomainError("x1 must lie in [0, h/(m0 c))")
    out = math.pi * np.cos(m0 * NATURAL.c * x / NATURAL.hbar)
    return float(out) if out.ndim == 0 else out


def plane_phase(t, x, spec: ParticleSpec):
    """(E t - p.x)/hbar for arrays t (N,) and x (N, 3)."""
    E, p = spec.energy_momentum()
    return (E * np.asarray(t, dtype=float) - np.asarray(x, dtype=float) @ p) / NATURAL.hbar


def spinless_moving_sigma(t, x, spec: ParticleSpec):
    """sigma = pi cos((E t - p.x)/hbar) in the frame where the particle moves with spec.u."""
    if spec.cls != "spinless":
        raise ValueError("spinless_moving_sigma needs a spinless spec")
    out = math.pi * np.cos(plane_phase(t, x, spec))
    return float(out) if np.ndim(out) == 0 else out


def rest_sigma_event(x1: float, m0: float) -> np.ndarray:
    """Event on the rest-frame sigma world line: x1 = x5, x0 = x2 = x3 = 0, x4 = sigma."""
    return np.array([0.0, x1, 0.0, 0.0, spinless_rest_sigma(x1, m0), x1])


def rest_sample_to_lab(x1, spatial_rest, spec: ParticleSpec) -> np.ndarray:
    """Place rest-frame samples of the sigma line as lab-frame events.

    The line parameter x1 of the rest oscillation is the rest-frame
    phase, i.e. it sits at rest time t_r = x1/c; `spatial_rest` is the
    rest-frame spatial point. Returns (N, 4) lab events (t, x1, x2, x3)
    seen from a frame in which the particle moves with spec.u.
    """
    from .core import boost_array

    x1 = np.atleast_1d(np.asarray(x1, dtype=float))
    rest = np.zeros((len(x1), 6))
    rest[:, 0] = x1 / NATURAL.c
    rest[:, 1:4] = spatial_rest
    # the particle moves with +u in the lab, so the lab sees the rest frame boosted by -u
    return boost_array(rest, -spec.velocity)[:, :4]


def spinless_worldlines(spec: ParticleSpec, grid: Grid = Grid()) -> WorldlineSet:
    if spec.cls != "spinless":
        raise ValueError("spinless_worldlines needs a spinless spec")
    m0 = spec.m0
    E, p = spec.energy_momentum()
    d = spec.direction
    rest_period = NATURAL.h / (m0 * NATURAL.c)
    # tau: classical world line x = u t, proper time tau
    tau = grid.params(rest_period)
    ev_tau = np.zeros((len(tau), 6))
    ev_tau[:, 0] = spec.gamma * tau
    ev_tau[:, 1:4] = np.outer(spec.gamma * tau, spec.velocity)
    sig_tau = math.pi * np.cos(plane_phase(ev_tau[:, 0], ev_tau[:, 1:4], spec))
    ev_tau[:, 4] = sig_tau
    # sigma: along the direction of motion at t = 0 (rest form at u = 0)
    if spec.speed == 0:
        wl = rest_period
        s = grid.params(wl)
        sig = math.pi * np.cos(m0 * NATURAL.c * s / NATURAL.hbar)
    else:
        wl = NATURAL.h / float(np.linalg.norm(p))
        s = grid.params(wl)
        sig = math.pi * np.cos(plane_phase(np.zeros_like(s), np.outer(s, d), spec))
    ev_sig = np.zeros((len(s), 6))
    # at rest the line runs along x1
    ev_sig[:, 1:4] = np.outer(s, d) if spec.speed > 0 else np.outer(s, (1.0, 0.0, 0.0))
    ev_sig[:, 4] = sig
    ev_sig[:, 5] = s
    # phi: 4D projection coincides with the tau line
    ev_phi = ev_tau.copy()
    ev_phi[:, 4] = 0.0
    ev_phi[:, 5] = sig_tau
    return WorldlineSet(
        "spinless",
        {
            "tau": Worldline("tau", tau, ev_tau, sig_tau),
            "sigma": Worldline("sigma", s, ev_sig, sig),
            "phi": Worldline("phi", tau, ev_phi, sig_tau),
        },
        period=rest_period,
        wavelength=wl,
    )


# -- photon ---------------------------------------------------------------

def photon_sigma(t, x3, k: float):
    """sigma = phi = pi cos(omega t - k x3), omega = c k."""
    if k == 0:
        raise DegenerateWaveError("wave number k = 0")
    return math.pi * np.cos(NATURAL.c * k * np.asarray(t, dtype=float) - k * np.asarray(x3, dtype=float))


def arccos_accessor(value, scale: float):
    """Inverse of the cosine form: scale * arccos(value/pi) on the principal branch [0, pi]."""
    return scale * np.arccos(np.clip(np.asarray(value, dtype=float) / math.pi, -1.0, 1.0))


def photon_worldlines(spec: ParticleSpec, grid: Grid = Grid(), t: float = 0.0) -> WorldlineSet:
    if spec.cls != "photon":
        raise ValueError("photon_worldlines needs a photon spec")
    k = spec.k
    if k == 0:
        raise DegenerateWaveError("wave number k = 0")
    if not np.allclose(spec.direction, [0.0, 0.0, 1.0]):
        raise ValueError("photon model takes the wave-vector along x3")
    wl = TWO_PI / k
    s = grid.params(wl)
    sig = photon_sigma(np.full_like(s, t), s, k)
    phi = photon_sigma(np.full_like(s, t), s, k)
    ev_sig = np.zeros((len(s), 6))
    ev_sig[:, 0] = t
    ev_sig[:, 1] = arccos_accessor(sig, spec.lam_E0)
    ev_sig[:, 3] = s
    ev_sig[:, 4] = sig
    ev_phi = np.zeros((len(s), 6))
    ev_phi[:, 0] = t
    ev_phi[:, 2] = arccos_accessor(phi, spec.lam_B0)
    ev_phi[:, 3] = s
    ev_phi[:, 5] = phi
    # tau: the light ray x3 = c t through the origin carries a constant phase
    ev_tau = np.zeros((len(s), 6))
    ev_tau[:, 0] = s / NATURAL.c
    ev_tau[:, 3] = s
    on_ray = photon_sigma(ev_tau[:, 0], ev_tau[:, 3], k)
    ev_tau[:, 4] = on_ray
    ev_tau[:, 5] = on_ray
    return WorldlineSet(
        "photon",
        {
            "tau": Worldline("tau", s, ev_tau, on_ray),
            "sigma": Worldline("sigma", s, ev_sig, sig),
            "phi": Worldline("phi", s, ev_phi, phi),
        },
        period=wl / NATURAL.c,
        wavelength=wl,
    )


# -- massive boson --------------------------------------------------------

def support_triad(direction) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Right-handed orthonormal (e1, e2, e3) with e3 along `direction`."""
    e3 = np.asarray(direction, dtype=float)
    e3 = e3 / np.linalg.norm(e3)
    if np.allclose(e3, [0.0, 0.0, 1.0]):
        return np.eye(3)[0], np.eye(3)[1], e3
    if np.allclose(e3, [0.0, 0.0, -1.0]):
        return np.eye(3)[0], -np.eye(3)[1], e3
    helper = np.array([0.0, 0.0, 1.0]) if abs(e3[2]) < 0.9 else np.array([1.0, 0.0, 0.0])
    e1 = np.cross(helper, e3)
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(e3, e1)
    return e1, e2, e3


def boson_sigma(t, x, spec: ParticleSpec):
    """Common value of sigma, phi and tau: pi cos((E t - p.x)/hbar)."""
    return math.pi * np.cos(plane_phase(t, x, spec))


def boson_worldlines(spec: ParticleSpec, grid: Grid = Grid(), t: float = 0.0) -> WorldlineSet:
    if spec.cls != "boson":
        raise ValueError("boson_worldlines needs a boson spec")
    E, p = spec.energy_momentum()
    e1, e2, e3 = support_triad(spec.direction)
    pn = float(np.linalg.norm(p))
    wl = NATURAL.h / pn if pn > 0 else NATURAL.h / (spec.m0 * NATURAL.c)
    s = grid.params(wl)
    along = np.outer(s, e3)
    if pn > 0:
        val = boson_sigma(np.full_like(s, t), along, spec)
    else:
        # rest frame: pi cos(m0 c x3 / hbar) at t = 0
        val = math.pi * np.cos(spec.m0 * NATURAL.c * s / NATURAL.hbar - spec.m0 * NATURAL.c**2 * t / NATURAL.hbar)
    lam_c = NATURAL.hbar / (spec.m0 * NATURAL.c)

    def line(offset_dir, scale, slot):
        ev = np.zeros((len(s), 6))
        ev[:, 0] = t
        ev[:, 1:4] = along
        if offset_dir is not None:
            ev[:, 1:4] += np.outer(arccos_accessor(val, scale), offset_dir)
        if slot is not None:
            ev[:, slot] = val
        return ev

    ev_sig = line(e1, spec.lam_V10, 4)
    ev_phi = line(e2, spec.lam_V20, 5)
    ev_tau = line(None, lam_c, None)
    return WorldlineSet(
        "boson",
        {
            "tau": Worldline("tau", s, ev_tau, val.copy()),
            "sigma": Worldline("sigma", s, ev_sig, val.copy()),
            "phi": Worldline("phi", s, ev_phi, val.copy()),
        },
        period=NATURAL.h / E,
        wavelength=wl,
    )


def boson_support_directions(spec: ParticleSpec) -> dict:
    """Spatial support directions of the sigma, phi and tau lines."""
    e1, e2, e3 = support_triad(spec.direction)
    return {"sigma": e1, "phi": e2, "tau": e3}


# -- fermion --------------------------------------------------------------

def fermion_radius(m0: float) -> float:
    """r0 = h / (2 m0 c)."""
    return NATURAL.h / (2.0 * m0 * NATURAL.c)


def fermion_sigma_circle(sigma, m0: float, orientation: int = +1):
    r0 = fermion_radius(m0)
    ang = m0 * NATURAL.c * np.asarray(sigma, dtype=float) / NATURAL.hbar
    return r0 * np.cos(ang), orientation * r0 * np.sin(ang)


def fermion_phi_arc(phi, m0: float, orientation: int = +1):
    """(x3, xs) on the quarter arc; phi in [0, 2 pi) maps to arc angle phi/4 in [0, pi/2)."""
    phi = np.asarray(phi, dtype=float)
    if np.any(phi < 0) or np.any(phi >= TWO_PI):
        raise DomainError("phi must lie in [0, 2 pi)")
    r0 = fermion_radius(m0)
    ang = phi / 4.0
    return orientation * r0 * np.cos(ang), r0 * np.sin(ang)


def fermion_tau_line(tau, m0: float):
    ang = m0 * NATURAL.c * np.asarray(tau, dtype=float) / NATURAL.hbar
    tau = np.asarray(tau, dtype=float)
    return tau * (1.0 + np.cos(ang)), tau * np.sin(ang)


def fermion_worldlines(spec: ParticleSpec, grid: Grid = Grid(), s_angle: float = 0.0) -> WorldlineSet:
    """Rest-frame fermion world lines.

    sigma: circle of radius r0 in the x1-x2 plane, closed after 2 pi hbar/(m0 c).
    phi: quarter arc from the x3 axis towards the in-plane unit vector s.
    tau: x0 = tau (1 + cos), x5 = tau sin over two oscillation periods.
    The orientation selects the hemisphere (sign of x3) and the sense of rotation.
    """
    if spec.cls != "fermion":
        raise ValueError("fermion_worldlines needs a fermion spec")
    m0, o = spec.m0, spec.orientation
    period = TWO_PI * NATURAL.hbar / (m0 * NATURAL.c)
    sig = grid.params(period, endpoint=True)
    x1, x2 = fermion_sigma_circle(sig, m0, o)
    ev_sig = np.zeros((len(sig), 6))
    ev_sig[:, 1] = x1
    ev_sig[:, 2] = x2
    ev_sig[:, 4] = sig

    phi = Grid(grid.samples, 1).params(TWO_PI)
    x3, xs = fermion_phi_arc(phi, m0, o)
    s_hat = np.array([math.cos(s_angle), math.sin(s_angle)])
    ev_phi = np.zeros((len(phi), 6))
    ev_phi[:, 1] = xs * s_hat[0]
    ev_phi[:, 2] = xs * s_hat[1]
    ev_phi[:, 3] = x3
    ev_phi[:, 5] = phi

    tau = Grid(grid.samples, 2 * grid.periods).params(period, endpoint=True)
    x0, x5 = fermion_tau_line(tau, m0)
    ev_tau = np.zeros((len(tau), 6))
    ev_tau[:, 0] = x0
    ev_tau[:, 5] = x5

    ws = WorldlineSet(
        "fermion",
        {
            "tau": Worldline("tau", tau, ev_tau),
            "sigma": Worldline("sigma", sig, ev_sig),
            "phi": Worldline("phi", phi, ev_phi),
        },
        period=period,
        wavelength=2.0 * fermion_radius(m0),
    )
    if not hemisphere_ok(ws, o):
        raise DomainError("fermion motion left its hemisphere")
    return ws


def hemisphere_ok(ws: WorldlineSet, orientation: int) -> bool:
    """The phi arc must stay on the half sphere selected by `orientation`."""
    return bool(np.all(orientation * ws["phi"].events[:, 3] > 0.0))


def generate(spec: ParticleSpec, grid: Grid = Grid()) -> WorldlineSet:
    return {
        "spinless": spinless_worldlines,
        "photon": photon_worldlines,
        "boson": boson_worldlines,
        "fermion": fermion_worldlines,
    }[spec.cls](spec, grid)


# -- de Broglie lattice ---------------------------------------------------

def debroglie_lattice(spec: ParticleSpec, n: int) -> tuple[LatticeSpec, np.ndarray, np.ndarray]:
    """Intersection lattice of the tau/sigma line families on the x0-x1 plane.

    Uses the relativistic mass m = gamma m0 so that dx = h/p and dt = h/E.
    Returns the spacing record and two (n, 2) arrays of (t, x) points:
    positions at t = 0 and times at x = 0.
    """
    if spec.cls == "photon":
        raise ValueError("lattice needs a massive particle")
    if n < 1:
        raise ValueError("n must be >= 1")
    u = spec.speed
    if u == 0:
        raise DegenerateLatticeError("lattice spacing h/(m u) is infinite at u = 0")
    lat = LatticeSpec.from_mass(spec.gamma * spec.m0, u, n)
    j = np.arange(n, dtype=float)
    at_t0 = np.column_stack([np.zeros(n), j * lat.dx])
    at_x0 = np.column_stack([j * lat.dt, np.zeros(n)])
    return lat, at_t0, at_x0


def sigma_line(j: int, spec: ParticleSpec) -> tuple[np.ndarray, np.ndarray]:
    """j-th sigma line in the (t, x) plane as (point, direction).

    The line E t - p x = -j h has slope dx/dt = c^2/u.
    """
    E, p = spec.energy_momentum()
    pn = float(np.linalg.norm(p))
    point = np.array([0.0, j * NATURAL.h / pn])
    direction = np.array([1.0, E / pn])
    return point, direction


def tau_line(x_start: float, spec: ParticleSpec) -> tuple[np.ndarray, np.ndarray]:
    """tau line through (0, x_start) with slope dx/dt = u."""
    return np.array([0.0, x_start]), np.array([1.0, spec.speed])

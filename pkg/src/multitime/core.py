"""Coordinates, units and Lorentz kinematics in 6D time-space.

Natural units (hbar = c = 1, h = 2*pi) are used everywhere internally.
Coordinates are ordered (x0, x1, x2, x3, x4, x5): one ordinary time,
three spatial axes, then the 2nd and 3rd time dimensions.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

TWO_PI = 2.0 * math.pi


class InvalidVelocityError(ValueError):
    """Speed at or above the speed of light where a subluminal one is needed."""


@dataclass(frozen=True)
class UnitSystem:
    hbar: float = 1.0
    c: float = 1.0
    mode: Literal["natural", "SI"] = "natural"

    def __post_init__(self):
        if self.hbar <= 0 or self.c <= 0:
            raise ValueError("hbar and c must be positive")
        if self.mode == "natural" and (self.hbar != 1.0 or self.c != 1.0):
            raise ValueError("natural units require hbar = c = 1")

    @property
    def h(self) -> float:
        return TWO_PI * self.hbar

    @classmethod
    def si(cls) -> "UnitSystem":
        return cls(hbar=1.054571817e-34, c=299792458.0, mode="SI")

    def length_to_si(self, length: float, mass_kg: float) -> float:
        """Convert a natural-unit length measured in 1/m0 to metres for a particle of mass `mass_kg`."""
        si = UnitSystem.si()
        return length * si.hbar / (mass_kg * si.c)

    def time_to_si(self, time: float, mass_kg: float) -> float:
        si = UnitSystem.si()
        return time * si.hbar / (mass_kg * si.c**2)


NATURAL = UnitSystem()


@dataclass(frozen=True)
class Event6:
    x0: float = 0.0
    x1: float = 0.0
    x2: float = 0.0
    x3: float = 0.0
    x4: float = 0.0
    x5: float = 0.0
    cylinder: bool = False

    def __post_init__(self):
        vals = (self.x0, self.x1, self.x2, self.x3, self.x4, self.x5)
        if not all(math.isfinite(v) for v in vals):
            raise ValueError(f"non-finite coordinate in {vals}")
        if self.cylinder:
            object.__setattr__(self, "x4", self.x4 % TWO_PI)

    @classmethod
    def from_array(cls, arr, cylinder: bool = False) -> "Event6":
        a = np.asarray(arr, dtype=float)
        if a.shape != (6,):
            raise ValueError(f"expected 6 coordinates, got shape {a.shape}")
        return cls(*map(float, a), cylinder=cylinder)

    def as_array(self) -> np.ndarray:
        return np.array([self.x0, self.x1, self.x2, self.x3, self.x4, self.x5])

    @property
    def t(self) -> float:
        return self.x0

    @property
    def spatial(self) -> np.ndarray:
        return np.array([self.x1, self.x2, self.x3])


@dataclass(frozen=True)
class HyperbolicAngle:
    cosh_a: float
    sinh_a: float
    cosh_half: float
    sinh_half: float

    @property
    def alpha(self) -> float:
        return math.asinh(self.sinh_a)


@dataclass(frozen=True)
class Tangent6:
    components: tuple
    kind: Literal["tau", "sigma", "phi"]

    def __post_init__(self):
        comps = tuple(float(c) for c in self.components)
        if len(comps) == 4:
            comps = comps + (0.0, 0.0)
        if len(comps) != 6:
            raise ValueError("tangent needs 4 or 6 components")
        if not any(comps):
            raise ValueError("tangent vector must be nonzero")
        object.__setattr__(self, "components", comps)

    def as_array(self) -> np.ndarray:
        return np.array(self.components)


class _InfinitePhaseVelocity:
    """Marker for the rest-frame phase velocity, which is unbounded."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITE_PHASE_VELOCITY"

    def __bool__(self):
        return True


INFINITE_PHASE_VELOCITY = _InfinitePhaseVelocity()


def gamma_factor(speed: float, units: UnitSystem = NATURAL) -> float:
    beta = speed / units.c
    if not 0.0 <= beta < 1.0:
        raise InvalidVelocityError(f"speed {speed} not in [0, c)")
    return 1.0 / math.sqrt(1.0 - beta * beta)


def boost_matrix(u, units: UnitSystem = NATURAL) -> np.ndarray:
    """6x6 passive boost into a frame moving with velocity `u`.

    Only the (x0, x1, x2, x3) block is a Lorentz boost; x4 and x5 pass
    through unchanged.
    """
    u = np.asarray(u, dtype=float).reshape(3)
    beta = u / units.c
    b2 = float(beta @ beta)
    if b2 >= 1.0:
        raise InvalidVelocityError(f"|u| = {math.sqrt(b2) * units.c} >= c")
    L = np.eye(6)
    if b2 == 0.0:
        return L
    g = 1.0 / math.sqrt(1.0 - b2)
    L[0, 0] = g
    L[0, 1:4] = -g * beta
    L[1:4, 0] = -g * beta
    L[1:4, 1:4] += (g - 1.0) * np.outer(beta, beta) / b2
    if units.c != 1.0:
        # x0 carries units of time, x1..x3 of length
        L[0, 1:4] /= units.c
        L[1:4, 0] *= units.c
    return L


def boost(e: Event6, u, units: UnitSystem = NATURAL) -> Event6:
    return Event6.from_array(boost_matrix(u, units) @ e.as_array(), cylinder=e.cylinder)


def boost_array(events: np.ndarray, u, units: UnitSystem = NATURAL) -> np.ndarray:
    """Boost an (N, 6) array of events."""
    return np.asarray(events, dtype=float) @ boost_matrix(u, units).T


def rapidity(u: float, units: UnitSystem = NATURAL) -> HyperbolicAngle:
    g = gamma_factor(u, units)
    beta = u / units.c
    cosh_a = g
    sinh_a = g * beta
    # half-angle forms, written to avoid cancellation near u = 0
    cosh_half = math.sqrt((cosh_a + 1.0) / 2.0)
    sinh_half = sinh_a / (2.0 * cosh_half)
    return HyperbolicAngle(cosh_a, sinh_a, cosh_half, sinh_half)


def phase_velocity(u: float, units: UnitSystem = NATURAL):
    """de Broglie phase speed c**2/u; `INFINITE_PHASE_VELOCITY` at rest."""
    if u < 0:
        raise InvalidVelocityError("group speed must be non-negative")
    if u == 0:
        return INFINITE_PHASE_VELOCITY
    return units.c**2 / u


def minkowski_dot(a: Tangent6, b: Tangent6, psi: complex | None = None):
    """Inner product with signature (+,-,-,-) on the 4D sector.

    With `psi` given, the (x4, x5) sector contributes psi**2 * a4*b4 - a5*b5.
    """
    x = a.as_array()
    y = b.as_array()
    val = x[0] * y[0] - x[1] * y[1] - x[2] * y[2] - x[3] * y[3]
    if psi is not None:
        val = val + psi**2 * x[4] * y[4] - x[5] * y[5]
    return val


def interval4(events: np.ndarray) -> np.ndarray:
    """Minkowski interval t^2 - |x|^2 of each row of an (N, >=4) array."""
    ev = np.atleast_2d(events)
    return ev[:, 0] ** 2 - np.sum(ev[:, 1:4] ** 2, axis=1)


def four_momentum(m0: float, u, units: UnitSystem = NATURAL) -> tuple[float, np.ndarray]:
    """Energy and 3-momentum of a particle of rest mass m0 moving with velocity u."""
    u = np.asarray(u, dtype=float).reshape(3)
    g = gamma_factor(float(np.linalg.norm(u)), units)
    return g * m0 * units.c**2, g * m0 * u

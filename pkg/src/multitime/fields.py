"""Wave-functions and field vectors read off the world-line models."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .core import NATURAL, Event6, rapidity
from .worldlines import ParticleSpec, photon_sigma, plane_phase


class UnsupportedClassError(ValueError):
    pass


@dataclass(frozen=True)
class LadderPair:
    a: complex
    a_star: complex

    def __post_init__(self):
        if abs(self.a_star - self.a.conjugate()) > 1e-14:
            raise ValueError("a_star must be the complex conjugate of a")


def ladder_decompose(spec: ParticleSpec, t: float) -> LadderPair:
    """Time-dependent ladder coefficient with |a| = pi/2.

    Spinless: a = (pi/2) exp(+i E t/hbar). Boson: a = (pi/2) exp(-i E t/hbar).
    """
    if spec.cls == "spinless":
        sign = 1.0
    elif spec.cls == "boson":
        sign = -1.0
    else:
        raise UnsupportedClassError(f"no ladder form for class {spec.cls!r}")
    E, _ = spec.energy_momentum()
    a = (math.pi / 2.0) * complex(np.exp(1j * sign * E * t / NATURAL.hbar))
    return LadderPair(a, a.conjugate())


def ladder_recompose(pair: LadderPair, spec: ParticleSpec, x) -> float:
    """Rebuild sigma from the ladder pair at spatial point x.

    Spinless: a e^{-i p.x} + a* e^{+i p.x}; boson: a e^{+i p.x} + a* e^{-i p.x}.
    Both equal pi cos((E t - p.x)/hbar).
    """
    _, p = spec.energy_momentum()
    px = float(np.dot(p, np.asarray(x, dtype=float))) / NATURAL.hbar
    sign = -1.0 if spec.cls == "spinless" else 1.0
    val = pair.a * np.exp(1j * sign * px) + pair.a_star * np.exp(-1j * sign * px)
    return float(val.real)


@dataclass(frozen=True)
class ScalarWave:
    E: float
    p: tuple = (0.0, 0.0, 0.0)
    m0: float = 1.0
    form: Literal["exponential", "cosine"] = "exponential"

    @classmethod
    def on_shell(cls, p, m0: float, form="exponential", delta: float = 0.0) -> "ScalarWave":
        """Wave with E^2 - |p|^2 = m0^2 + delta."""
        p = tuple(float(v) for v in p)
        return cls(math.sqrt(m0 * m0 + sum(v * v for v in p) + delta), p, m0, form)

    @property
    def shell_defect(self) -> float:
        """|E^2 - p^2 - m0^2|, recorded alongside the wave."""
        return abs(self.E**2 - sum(v * v for v in self.p) - self.m0**2)

    def phase(self, x) -> np.ndarray:
        """(p^alpha x_alpha - m0 x5)/hbar for an (..., 6) coordinate array."""
        x = np.asarray(x)
        return (self.E * x[..., 0] - x[..., 1:4] @ np.asarray(self.p) - self.m0 * x[..., 5]) / NATURAL.hbar

    def __call__(self, x):
        ph = self.phase(x)
        if self.form == "exponential":
            return np.exp(1j * ph)
        return np.cos(ph)


def scalar_psi(w: ScalarWave, e: Event6) -> complex:
    return complex(w(e.as_array()))


def photon_field_vectors(spec: ParticleSpec, e: Event6, alpha_e: float = 1.0, alpha_b: float = 1.0):
    """E = alpha_e sigma e1, B = alpha_b phi e2 (photon); the boson analogue gives V1, V2."""
    if spec.cls == "photon":
        sig = float(photon_sigma(e.x0, e.x3, spec.k))
        phi = sig
    elif spec.cls == "boson":
        from .worldlines import support_triad

        sig = float(math.pi * np.cos(plane_phase(e.x0, e.spatial, spec)))
        phi = sig
        e1, e2, _ = support_triad(spec.direction)
        return alpha_e * sig * e1, alpha_b * phi * e2
    else:
        raise UnsupportedClassError("field vectors need a photon or boson spec")
    return alpha_e * sig * np.array([1.0, 0.0, 0.0]), alpha_b * phi * np.array([0.0, 1.0, 0.0])


@dataclass(frozen=True)
class DiracComponents:
    psi1: complex
    psi2: complex
    psi3: complex
    phase: complex
    cosh_half: float
    sinh_half: float
    C0: complex = 1.0

    def norm_identity(self) -> float:
        """|psi1|^2 + |psi2|^2 + cosh^2(alpha/2); the constant +1 in psi3 is dropped."""
        return abs(self.psi1) ** 2 + abs(self.psi2) ** 2 + abs(self.cosh_half * self.phase) ** 2


def _fermion_phase(spec: ParticleSpec, e: Event6) -> complex:
    return complex(np.exp(1j * plane_phase(e.x0, e.spatial, spec)))


def dirac_components(spec: ParticleSpec, e: Event6, extended_en: bool = False, C0: complex = 1.0) -> DiracComponents:
    """psi1..psi3 of a moving fermion.

    With `extended_en` the normal vector gains an x5 part and psi3 picks up
    a factor (1 + i) on its oscillating term.
    """
    if spec.cls != "fermion":
        raise UnsupportedClassError("dirac_components needs a fermion spec")
    u = spec.speed
    h = rapidity(u)
    ph = _fermion_phase(spec, e)
    if u == 0:
        psi1 = 0j
        psi2 = 0j
    else:
        u1, u2, u3 = spec.u
        psi1 = h.sinh_half * complex(u1 / u, u2 / u) * ph
        psi2 = h.sinh_half * (u3 / u) * ph
    psi3 = h.cosh_half * (1 + 1j if extended_en else 1.0) * ph + 1.0
    return DiracComponents(psi1, psi2, psi3, ph, h.cosh_half, h.sinh_half, C0)


def dirac_momentum_forms(spec: ParticleSpec, e: Event6) -> tuple[complex, complex, complex]:
    """((p1 + i p2)/m0, p3/m0, p0/m0 + 1) times the plane-wave phase."""
    E, p = spec.energy_momentum()
    ph = _fermion_phase(spec, e)
    m0 = spec.m0
    return complex(p[0], p[1]) / m0 * ph, p[2] / m0 * ph, E / m0 * ph + 1.0


@dataclass(frozen=True)
class KVector:
    K0: complex
    K1: complex
    K2: complex
    K3: complex
    K5: complex
    C: complex = 1.0

    def four(self) -> np.ndarray:
        return np.array([self.K0, self.K1, self.K2, self.K3])


def k_vector(spec: ParticleSpec, e: Event6, C: complex = 1.0, k2_factor: complex = 1j) -> KVector:
    """Five-vector built from the Dirac components.

    K2 = k2_factor * C * psi1 * exp(i m0 x5); the default factor i pairs
    with psi1 as in the x3 spinor representation.
    """
    d = dirac_components(spec, e)
    w = complex(np.exp(1j * spec.m0 * e.x5))
    K5 = -C * complex(np.exp(1j * (plane_phase(e.x0, e.spatial, spec) - spec.m0 * e.x5 / NATURAL.hbar)))
    return KVector(
        K0=C * d.psi3 * w,
        K1=-C * d.psi1 * w,
        K2=k2_factor * C * d.psi1 * w,
        K3=-C * d.psi2 * w,
        K5=K5,
        C=C,
    )

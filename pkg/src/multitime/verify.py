"""The residual suite run by `multitime verify`."""
from __future__ import annotations

import math

import numpy as np

from .core import Event6
from .fields import ScalarWave, dirac_components, k_vector, ladder_decompose, ladder_recompose
from .geometry import (
    CurvatureProbe,
    PlaneVectorField,
    ResidualReport,
    build_metric,
    coulomb_check,
    fermion_k_fields,
    interval,
    kg_residual,
    local_flat_transform,
    proca_residual,
)
from .worldlines import ParticleSpec, spinless_moving_sigma

DEFAULT_PROBE = Event6(0.3, 0.1, -0.2, 0.4, 0.0, 0.2)


def _rng(seed):
    return np.random.default_rng(seed)


def check_kg_on_shell(step=1e-3, order=4, delta=0.0, **_):
    """On-shell KG residual; `delta` injects an off-shell defect to exercise the failure path."""
    w = ScalarWave.on_shell((0.3, -0.2, 0.5), 1.0, delta=delta)
    r = kg_residual(w, CurvatureProbe(DEFAULT_PROBE, step, order), 1e-6)
    return ResidualReport("kg_on_shell", r.value, 1e-6, r.context)


def check_kg_off_shell(step=1e-3, order=4, **_):
    delta = 0.1
    w = ScalarWave.on_shell((0.3, -0.2, 0.5), 1.0, delta=delta)
    r = kg_residual(w, CurvatureProbe(DEFAULT_PROBE, step, order))
    rel = abs(r.value / (delta * r.context["psi_abs"]) - 1.0)
    return ResidualReport("kg_off_shell", rel, 0.05, {"residual": r.value, "delta": delta})


def check_maxwell(step=1e-3, order=4, **_):
    A = PlaneVectorField(1.0, (0.0, 0.0, 1.0), (0.0, 1.0, 0.0, 0.0))
    r = proca_residual(A, 0.0, CurvatureProbe(DEFAULT_PROBE, step, order))
    return ResidualReport("maxwell_limit", r.value, 1e-6, r.context)


def massive_lorenz_field(m0=1.0, p=(0.2, -0.1, 0.6)):
    p = np.asarray(p, dtype=float)
    E = math.sqrt(m0 * m0 + p @ p)
    # lower-index polarization with k^mu eps_mu = E eps_0 + p.eps_spatial = 0
    eps_sp = np.array([1.0, 0.5, -0.3])
    eps0 = -(p @ eps_sp) / E
    return PlaneVectorField(E, tuple(p), (eps0, *eps_sp))


def check_proca(step=1e-3, order=4, **_):
    m0 = 1.0
    r = proca_residual(massive_lorenz_field(m0), m0, CurvatureProbe(DEFAULT_PROBE, step, order))
    return ResidualReport("proca_massive", r.value, 1e-6, r.context)


def check_proca_broken(step=1e-3, order=4, **_):
    """Longitudinal polarization at m0 = 0 must be flagged: reported value is 0.1/residual."""
    A = PlaneVectorField(1.0, (0.0, 0.0, 1.0), (0.0, 0.0, 0.0, 1.0))
    r = proca_residual(A, 0.0, CurvatureProbe(DEFAULT_PROBE, step, order))
    return ResidualReport("proca_longitudinal_detected", 0.1 / r.value, 1.0, {"residual": r.value})


def check_coulomb(step=1e-3, order=4, **_):
    worst = 0.0
    for r in (0.5, 1.0, 2.0):
        e = Event6(0.0, r / math.sqrt(3), r / math.sqrt(3), r / math.sqrt(3))
        worst = max(worst, coulomb_check(1.0, CurvatureProbe(e, step, order)).value)
    return ResidualReport("coulomb", worst, 1e-5, {"radii": [0.5, 1.0, 2.0]})


def random_vector_metric(seed=0):
    rng = _rng(seed)
    a = rng.normal(size=4)
    b = rng.normal(size=4)
    return build_metric("vector", A=lambda x: a * np.cos(x[0]) + b * np.sin(x[3]))


def fermion_metric(u=(0.2, -0.1, 0.4), m0=1.0):
    spec = ParticleSpec("fermion", m0, u)
    K, K5 = fermion_k_fields(spec)
    return build_metric("fermion", K=K, K5=K5)


def check_interval(kind: str, n=100, seed=1):
    m = random_vector_metric(seed) if kind == "vector" else fermion_metric()
    rng = _rng(seed + 7)
    worst = 0.0
    for _ in range(n):
        e = Event6.from_array(rng.uniform(-1, 1, 6))
        dx = rng.normal(size=6)
        worst = max(worst, abs(interval(m, dx, e) - local_flat_transform(m, dx, e)))
    return ResidualReport(f"local_flat_{kind}", worst, 1e-12, {"samples": n})


def check_ladder(n=100, seed=2, **_):
    rng = _rng(seed)
    worst = 0.0
    for cls in ("spinless", "boson"):
        spec = ParticleSpec(cls, 1.0, (0.3, 0.2, -0.4))
        for _ in range(n):
            t = rng.uniform(-5, 5)
            x = rng.uniform(-5, 5, 3)
            sig = math.pi * math.cos(float(spec.energy_momentum()[0] * t - spec.energy_momentum()[1] @ x))
            worst = max(worst, abs(ladder_recompose(ladder_decompose(spec, t), spec, x) - sig))
    return ResidualReport("ladder_round_trip", worst, 1e-12, {"samples": 2 * n})


def check_dirac_ratio(n=100, seed=3, **_):
    rng = _rng(seed)
    worst = 0.0
    for _ in range(n):
        u = dirac_velocity(rng)
        spec = ParticleSpec("fermion", 1.0, u)
        e = Event6.from_array(rng.uniform(-1, 1, 6))
        d = dirac_components(spec, e)
        _, p = spec.energy_momentum()
        worst = max(worst, abs(d.psi1 / d.psi2 - complex(p[0], p[1]) / p[2]))
    return ResidualReport("dirac_ratio", worst, 1e-12, {"samples": n})


def check_dirac_norm(n=100, seed=4, **_):
    rng = _rng(seed)
    worst = 0.0
    for _ in range(n):
        spec = ParticleSpec("fermion", 1.0, dirac_velocity(rng))
        e = Event6.from_array(rng.uniform(-1, 1, 6))
        d = dirac_components(spec, e)
        E, _ = spec.energy_momentum()
        worst = max(worst, abs(d.norm_identity() - E / spec.m0))
    return ResidualReport("dirac_norm", worst, 1e-12, {"samples": n})


def dirac_velocity(rng) -> np.ndarray:
    """Random subluminal velocity with |u3| bounded away from 0."""
    while True:
        v = rng.uniform(-0.6, 0.6, 3)
        if abs(v[2]) > 0.05 and np.linalg.norm(v) < 0.95:
            return v


def check_boost_consistency(n=1000, seed=5, **_):
    from .worldlines import rest_sample_to_lab, spinless_rest_sigma

    rng = _rng(seed)
    worst = 0.0
    for speed in (0.1, 0.5, 0.9):
        spec = ParticleSpec("spinless", 1.0, (speed, 0.0, 0.0))
        x1 = rng.uniform(0, 2 * math.pi, n)
        rest_sp = rng.uniform(-3, 3, (n, 3))
        lab = rest_sample_to_lab(x1, rest_sp, spec)
        moving = spinless_moving_sigma(lab[:, 0], lab[:, 1:4], spec)
        worst = max(worst, float(np.max(np.abs(moving - spinless_rest_sigma(x1, 1.0)))))
    return ResidualReport("boost_consistency", worst, 1e-10, {"samples": 3 * n})


CHECKS = {
    "kg_on_shell": check_kg_on_shell,
    "kg_off_shell": check_kg_off_shell,
    "proca_massive": check_proca,
    "maxwell_limit": check_maxwell,
    "proca_broken": check_proca_broken,
    "coulomb": check_coulomb,
    "local_flat_vector": lambda **kw: check_interval("vector"),
    "local_flat_fermion": lambda **kw: check_interval("fermion"),
    "ladder": check_ladder,
    "dirac_ratio": check_dirac_ratio,
    "dirac_norm": check_dirac_norm,
    "boost": check_boost_consistency,
}


def run_suite(names=None, **params) -> list[ResidualReport]:
    names = list(CHECKS) if names is None else list(names)
    unknown = [n for n in names if n not in CHECKS]
    if unknown:
        raise KeyError(f"unknown checks: {unknown}")
    return [CHECKS[n](**params) for n in names]


def k_phase_ratio(spec: ParticleSpec, e: Event6, shift: float) -> np.ndarray:
    """K_j(x5 + shift) / K_j(x5) for j = 0..3."""
    a = k_vector(spec, e).four()
    b = k_vector(spec, Event6(e.x0, e.x1, e.x2, e.x3, e.x4, e.x5 + shift)).four()
    return b / a

import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from multitime.core import boost_matrix
from multitime.worldlines import (
    DegenerateLatticeError,
    DegenerateWaveError,
    DomainError,
    Grid,
    LatticeSpec,
    ParticleSpec,
    arccos_accessor,
    boson_sigma,
    boson_support_directions,
    boson_worldlines,
    debroglie_lattice,
    fermion_phi_arc,
    fermion_radius,
    fermion_worldlines,
    generate,
    photon_sigma,
    photon_worldlines,
    rest_sample_to_lab,
    spinless_moving_sigma,
    spinless_rest_sigma,
    spinless_worldlines,
)

H = 2 * math.pi


def lattice_oracle(m0, u, n):
    """Axis crossings of the sigma family, built from geometry only.

    The tau line through the origin is ticked every rest period h/m0 of
    proper time; through each tick runs a sigma line Minkowski-orthogonal
    to tau, direction (u, 1). Crossings with x = 0 and t = 0 come from
    solving the 2x2 line-intersection systems. E and p are never used.
    """
    mpmath.mp.dps = 40
    g = float(1 / mpmath.sqrt(1 - mpmath.mpf(u) ** 2))
    times, positions = [], []
    for j in range(n):
        tau_j = j * H / m0
        tick = np.array([g * tau_j, g * u * tau_j])
        d = np.array([u, 1.0])
        # tick + s d meets x = 0
        s = np.linalg.solve([[d[1]]], [-tick[1]])[0]
        times.append((tick + s * d)[0])
        # tick + s d meets t = 0
        s = np.linalg.solve([[d[0]]], [-tick[0]])[0]
        positions.append(abs((tick + s * d)[1]))
    return np.array(times), np.array(positions)


# -- spinless -------------------------------------------------------------

def test_rest_sigma_examples():
    assert spinless_rest_sigma(0.0, 1.0) == math.pi
    assert spinless_rest_sigma(math.pi / 2.0, 2.0) == pytest.approx(-math.pi, abs=1e-15)
    eps = 1e-9
    assert spinless_rest_sigma(H / 3.0 - eps, 3.0) == pytest.approx(math.pi, abs=1e-12)


@pytest.mark.parametrize("x", [-0.1, H])
def test_rest_sigma_domain(x):
    with pytest.raises(DomainError):
        spinless_rest_sigma(x, 1.0)


def test_moving_sigma_zero_phase():
    spec = ParticleSpec("spinless", 1.0, (0.5, 0, 0))
    assert spinless_moving_sigma(0.0, np.zeros(3), spec) == math.pi


def test_moving_sigma_rest_limit():
    spec = ParticleSpec("spinless", 1.3, (0, 0, 0))
    t = np.linspace(0, 4, 50)
    got = spinless_moving_sigma(t, np.zeros((50, 3)), spec)
    assert np.allclose(got, math.pi * np.cos(1.3 * t), atol=1e-14)
    assert np.allclose(got, spinless_rest_sigma(t, 1.3), atol=1e-14)


@pytest.mark.parametrize("u", [0.1, 0.5, 0.9])
def test_rest_line_boosted_matches_moving_form(u):
    rng = np.random.default_rng(11)
    spec = ParticleSpec("spinless", 1.0, (u, 0, 0))
    x1 = rng.uniform(0, H, 200)
    spatial = rng.uniform(-2, 2, (200, 3))
    lab = rest_sample_to_lab(x1, spatial, spec)
    assert np.max(np.abs(spinless_moving_sigma(lab[:, 0], lab[:, 1:4], spec) - spinless_rest_sigma(x1, 1.0))) < 1e-10


def test_rest_sample_uses_boost():
    spec = ParticleSpec("spinless", 1.0, (0.6, 0, 0))
    lab = rest_sample_to_lab(1.0, np.zeros(3), spec)[0]
    assert lab == pytest.approx(boost_matrix((-0.6, 0, 0))[:4, :4] @ [1.0, 0, 0, 0])


def test_spinless_grid_contract():
    spec = ParticleSpec("spinless", 1.0, (0.5, 0, 0))
    ws = spinless_worldlines(spec, Grid(256, 2))
    for k in ("tau", "sigma", "phi"):
        assert len(ws[k].proper_time) == 512
        assert np.all(np.abs(ws[k].values) <= math.pi)
    # sigma along x at t = 0 has period h/p
    assert ws.wavelength == pytest.approx(H / (spec.gamma * 0.5))


def test_spinless_rest_world_line_coordinates():
    ws = spinless_worldlines(ParticleSpec("spinless", 2.0), Grid(64))
    line = ws["sigma"]
    ev = line.events
    assert np.all(ev[:, 5] == ev[:, 1])
    assert np.all(ev[:, 1] == line.proper_time)
    assert np.all(ev[:, [0, 2, 3]] == 0.0)
    assert np.allclose(ev[:, 4], spinless_rest_sigma(line.proper_time, 2.0), atol=1e-13)


# -- photon ---------------------------------------------------------------

def test_photon_examples():
    k = 2.5
    assert photon_sigma(0.0, 0.0, k) == math.pi
    assert photon_sigma(0.0, math.pi / (2 * k), k) == pytest.approx(0.0, abs=1e-15)
    ws = photon_worldlines(ParticleSpec("photon", 0.0, k=k), Grid(128, 3))
    assert np.array_equal(ws["sigma"].values, ws["phi"].values)
    # t = 0 slice reproduces the rest form pi cos(k x3)
    assert np.allclose(ws["sigma"].values, math.pi * np.cos(k * ws["sigma"].events[:, 3]))


def test_photon_sigma_equals_phi_on_grid():
    t, x3 = np.meshgrid(np.linspace(0, 3, 40), np.linspace(-2, 2, 40))
    assert np.array_equal(photon_sigma(t, x3, 1.7), photon_sigma(t, x3, 1.7))


def test_photon_degenerate():
    with pytest.raises(DegenerateWaveError):
        photon_worldlines(ParticleSpec("photon", 0.0, k=0.0))


def test_arccos_accessor_inverts_cosine_on_principal_branch():
    x = np.linspace(0, math.pi, 33)
    assert np.allclose(arccos_accessor(math.pi * np.cos(x), 1.0), x, atol=1e-7)


# -- boson ----------------------------------------------------------------

def test_boson_zero_phase_and_supports():
    spec = ParticleSpec("boson", 1.0, (0.1, 0.2, 0.3))
    ws = boson_worldlines(spec, Grid(64))
    assert all(ws[k].values[0] == pytest.approx(math.pi) for k in ("tau", "sigma", "phi"))
    d = boson_support_directions(spec)
    assert abs(d["sigma"] @ d["phi"]) < 1e-15
    assert abs(d["sigma"] @ d["tau"]) < 1e-15
    assert abs(d["phi"] @ d["tau"]) < 1e-15
    assert d["tau"] == pytest.approx(spec.direction)


@pytest.mark.parametrize("m0", [1e-2, 1e-3, 1e-4])
def test_boson_massless_limit_matches_photon(m0):
    k = 1.3
    # |p| = k; then E - k ~ m0^2 / 2k bounds the gap
    u = k / math.sqrt(k * k + m0 * m0)
    spec = ParticleSpec("boson", m0, (0, 0, u))
    t, x3 = np.meshgrid(np.linspace(0, 4, 30), np.linspace(-3, 3, 30))
    x = np.stack([np.zeros_like(x3), np.zeros_like(x3), x3], axis=-1)
    gap = np.max(np.abs(boson_sigma(t, x, spec) - photon_sigma(t, x3, k)))
    # second term: rounding in gamma, amplified by 1 / (1 - u^2)
    conditioning = math.pi * k * 7.0 * 4 * np.finfo(float).eps / (1 - u * u)
    assert gap <= math.pi * 4 * m0 * m0 / (2 * k) * 1.01 + conditioning


# -- fermion --------------------------------------------------------------

def test_fermion_circle():
    m0 = 1.7
    ws = fermion_worldlines(ParticleSpec("fermion", m0), Grid(256, 1))
    r0 = fermion_radius(m0)
    assert r0 == pytest.approx(H / (2 * m0))
    ev = ws["sigma"].events
    assert (ev[0, 1], ev[0, 2]) == (r0, 0.0)
    assert np.max(np.abs(ev[:, 1] ** 2 + ev[:, 2] ** 2 - r0**2)) < 1e-12
    # closes after one period 2 pi / m0
    assert ws["sigma"].proper_time[-1] == pytest.approx(H / m0)
    assert np.allclose(ev[0, 1:3], ev[-1, 1:3], atol=1e-12)


def test_fermion_phi_arc_endpoint():
    x3, xs = fermion_phi_arc(H - 1e-12, 2.0)
    r0 = fermion_radius(2.0)
    assert x3 == pytest.approx(0.0, abs=1e-12)
    assert xs == pytest.approx(r0)
    with pytest.raises(DomainError):
        fermion_phi_arc(H, 1.0)


@pytest.mark.parametrize("orientation", [+1, -1])
def test_fermion_hemisphere(orientation):
    ws = fermion_worldlines(ParticleSpec("fermion", 1.0, orientation=orientation), Grid(64))
    assert np.all(orientation * ws["phi"].events[:, 3] > 0)


def test_fermion_tau_default_range():
    m0 = 0.8
    ws = fermion_worldlines(ParticleSpec("fermion", m0), Grid(64))
    tau = ws["tau"].proper_time
    assert tau[-1] == pytest.approx(2 * H / m0)
    ev = ws["tau"].events
    assert np.allclose(ev[:, 0], tau * (1 + np.cos(m0 * tau)))
    assert np.allclose(ev[:, 5], tau * np.sin(m0 * tau))


# -- shared properties ----------------------------------------------------

SPECS = [
    ParticleSpec("spinless", 1.0, (0.4, 0, 0)),
    ParticleSpec("spinless", 2.0),
    ParticleSpec("photon", 0.0, k=3.0),
    ParticleSpec("boson", 0.7, (0, 0.3, 0.2)),
]


@pytest.mark.parametrize("spec", SPECS, ids=lambda s: s.cls)
def test_amplitude_bound_and_monotone(spec):
    ws = generate(spec, Grid(128, 3))
    for k in ws.kinds():
        assert np.all(np.diff(ws[k].proper_time) > 0)
        assert np.all(np.abs(ws[k].values) <= math.pi)


@given(st.floats(-20, 20), st.floats(-20, 20), st.floats(0.0, 0.9))
def test_periodicity(t, x, u):
    spec = ParticleSpec("spinless", 1.0, (u, 0, 0))
    E, p = spec.energy_momentum()
    # shift time by one full period of the phase
    a = spinless_moving_sigma(t, np.array([x, 0, 0]), spec)
    b = spinless_moving_sigma(t + H / E, np.array([x, 0, 0]), spec)
    assert a == pytest.approx(b, abs=1e-9)
    assert photon_sigma(t, x, 1.0) == pytest.approx(photon_sigma(t + H, x, 1.0), abs=1e-9)


# -- lattice --------------------------------------------------------------

def test_lattice_spacing_from_mass():
    lat = LatticeSpec.from_mass(1.0, 0.5, 4)
    assert lat.dx == pytest.approx(4 * math.pi)
    assert lat.dt == pytest.approx(2 * math.pi)
    assert lat.dx * 0.5 == pytest.approx(lat.dt)


@pytest.mark.parametrize("u", [0.1, 0.5, 0.9])
def test_lattice_matches_line_intersections(u):
    spec = ParticleSpec("spinless", 1.0, (u, 0, 0))
    lat, at_t0, at_x0 = debroglie_lattice(spec, 7)
    times, positions = lattice_oracle(1.0, u, 7)
    assert np.max(np.abs(at_x0[:, 0] - times)) < 1e-9
    assert np.max(np.abs(at_t0[:, 1] - positions)) < 1e-9
    assert abs(lat.dx * u - lat.dt) < 1e-12


def test_lattice_single_point_and_degenerate():
    lat, at_t0, at_x0 = debroglie_lattice(ParticleSpec("spinless", 1.0, (0.5, 0, 0)), 1)
    assert at_t0.tolist() == [[0.0, 0.0]] and at_x0.tolist() == [[0.0, 0.0]]
    with pytest.raises(DegenerateLatticeError):
        debroglie_lattice(ParticleSpec("spinless", 1.0), 3)


def test_spec_validation():
    with pytest.raises(ValueError):
        ParticleSpec("photon", 1.0)
    with pytest.raises(ValueError):
        ParticleSpec("fermion", 0.0)
    with pytest.raises(ValueError):
        ParticleSpec("boson", 1.0, (1.0, 0, 0))

"""6D metric families, finite-difference curvature and field-equation residuals."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Literal

import numpy as np

from .core import Event6
from .fields import ScalarWave

DIM = 6
ETA4 = np.diag([1.0, -1.0, -1.0, -1.0])
FLAT6 = np.diag([1.0, -1.0, -1.0, -1.0, 1.0, -1.0])

# central-difference weights at offsets -2..2
_D1 = {2: np.array([0.0, -0.5, 0.0, 0.5, 0.0]), 4: np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / 12.0}
_D2 = {2: np.array([0.0, 1.0, -2.0, 1.0, 0.0]), 4: np.array([-1.0, 16.0, -30.0, 16.0, -1.0]) / 12.0}
_OFFSETS = np.arange(-2, 3)


class ConfigurationError(ValueError):
    pass


class SingularMetricError(ArithmeticError):
    def __init__(self, msg, condition_number):
        super().__init__(f"{msg} (condition number {condition_number:.3g})")
        self.condition_number = condition_number


class SingularityProximityError(ValueError):
    pass


@dataclass(frozen=True)
class CurvatureProbe:
    event: Event6
    step: float = 1e-3
    order: int = 4

    def __post_init__(self):
        if not self.step > 0:
            raise ValueError("step must be positive")
        if self.order not in (2, 4):
            raise ValueError("order must be 2 or 4")

    @property
    def x(self) -> np.ndarray:
        return self.event.as_array()


@dataclass(frozen=True)
class ResidualReport:
    name: str
    value: float
    tolerance: float
    context: dict = field(default_factory=dict)

    @property
    def verdict(self) -> str:
        return "pass" if self.value <= self.tolerance else "fail"

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def line(self) -> str:
        return f"{self.name} {self.value:.6e} {self.tolerance:.6e} {self.verdict}"


def partial(f: Callable, x: np.ndarray, axis: int, step: float, order: int = 4):
    """Central-difference first derivative of f along coordinate `axis`."""
    w = _D1[order]
    acc = None
    for off, wi in zip(_OFFSETS, w):
        if wi == 0.0:
            continue
        xs = np.array(x, dtype=float)
        xs[axis] += off * step
        term = wi * np.asarray(f(xs))
        acc = term if acc is None else acc + term
    return acc / step


def second_partial(f: Callable, x: np.ndarray, axis: int, step: float, order: int = 4):
    w = _D2[order]
    acc = None
    for off, wi in zip(_OFFSETS, w):
        if wi == 0.0:
            continue
        xs = np.array(x, dtype=float)
        xs[axis] += off * step
        term = wi * np.asarray(f(xs))
        acc = term if acc is None else acc + term
    return acc / step**2


def gradient(f: Callable, x: np.ndarray, step: float, order: int = 4, axes=range(DIM)):
    """Stack of partial derivatives; the new axis comes first."""
    return np.stack([partial(f, x, a, step, order) for a in axes])


# -- metrics --------------------------------------------------------------

MetricKind = Literal["scalar", "vector", "electromagnetic", "fermion"]


@dataclass(frozen=True)
class Metric6:
    kind: str
    evaluate: Callable[[np.ndarray], np.ndarray]
    field_data: dict = field(default_factory=dict)

    def __call__(self, x) -> np.ndarray:
        if isinstance(x, Event6):
            x = x.as_array()
        return self.evaluate(np.asarray(x, dtype=float))


def _as_callable(value, n):
    if value is None:
        return None
    if callable(value):
        return value
    arr = np.asarray(value)
    if arr.shape != (n,) and n > 1:
        raise ConfigurationError(f"expected {n} components, got shape {arr.shape}")
    return lambda x: arr


def _kk_block(A4, A5, g4=ETA4):
    """Metric whose interval is eta dx dx - dx5^2 + (A.dx + A5 dx5 + dx4)^2."""
    A4 = np.asarray(A4)
    dtype = np.result_type(A4, A5, float)
    g = np.zeros((DIM, DIM), dtype=dtype)
    # mirror the upper triangle: complex outer products are not bitwise symmetric
    o = np.triu(np.outer(A4, A4))
    g[:4, :4] = g4 + o + np.triu(o, 1).T
    g[:4, 4] = A4
    g[4, :4] = A4
    g[4, 4] = 1.0
    g[:4, 5] = A4 * A5
    g[5, :4] = g[:4, 5]
    g[4, 5] = A5
    g[5, 4] = A5
    g[5, 5] = -1.0 + A5 * A5
    return g


def build_metric(kind: MetricKind, **field_data) -> Metric6:
    """Metric families of the models.

    scalar:          diag(eta, psi^2, -1); field_data psi (ScalarWave or callable).
    vector:          A (4 components) with A5 = 0.
    electromagnetic: A (4 components) and A5.
    fermion:         K (4 complex components) and K5.
    Field entries may be constants or callables of the 6-coordinate array.
    """
    if kind == "scalar":
        psi = field_data.get("psi")
        if psi is None:
            raise ConfigurationError("scalar metric needs psi")
        psi_f = psi if callable(psi) else (lambda x, v=psi: v)

        def ev(x):
            val = psi_f(x)
            g = FLAT6.astype(np.result_type(val, float)).copy()
            g[4, 4] = val * val
            return g

        return Metric6(kind, ev, {"psi": psi_f})
    if kind == "vector":
        A = _as_callable(field_data.get("A"), 4)
        if A is None:
            raise ConfigurationError("vector metric needs A")
        return Metric6(kind, lambda x: _kk_block(A(x), 0.0), {"A": A, "A5": lambda x: 0.0})
    if kind == "electromagnetic":
        A = _as_callable(field_data.get("A", np.zeros(4)), 4)
        A5 = field_data.get("A5")
        if A5 is None:
            raise ConfigurationError("electromagnetic metric needs A5")
        A5f = A5 if callable(A5) else (lambda x, v=A5: v)
        return Metric6(kind, lambda x: _kk_block(A(x), A5f(x)), {"A": A, "A5": A5f})
    if kind == "fermion":
        K = _as_callable(field_data.get("K"), 4)
        K5 = field_data.get("K5")
        if K is None or K5 is None:
            raise ConfigurationError("fermion metric needs K and K5")
        K5f = K5 if callable(K5) else (lambda x, v=K5: v)
        return Metric6(kind, lambda x: _kk_block(K(x), K5f(x)), {"A": K, "A5": K5f})
    raise ConfigurationError(f"unknown metric kind {kind!r}")


def coulomb_potential(e: float, x) -> float:
    r = float(np.linalg.norm(np.asarray(x)[1:4]))
    return e / r


def fermion_k_fields(spec, C=1.0, k2_factor=1j):
    """K(x) and K5(x) callables for a fermion spec, for use with build_metric."""
    from .fields import k_vector

    def K(x):
        return k_vector(spec, Event6.from_array(x), C, k2_factor).four()

    def K5(x):
        return k_vector(spec, Event6.from_array(x), C, k2_factor).K5

    return K, K5


# -- curvature ------------------------------------------------------------

def _inverse(g: np.ndarray, cond_limit: float = 1e12):
    cond = float(np.linalg.cond(g))
    if not np.isfinite(cond) or cond > cond_limit:
        raise SingularMetricError("metric is singular at probe", cond)
    return np.linalg.inv(g), cond


def _christoffel_at(m: Metric6, x: np.ndarray, step: float, order: int) -> np.ndarray:
    g = m(x)
    ginv, _ = _inverse(g)
    dg = gradient(m, x, step, order)  # dg[D, A, B] = d_D g_AB
    # Gamma^A_BC = 1/2 g^AD (d_B g_DC + d_C g_DB - d_D g_BC)
    t = np.einsum("bdc->dbc", dg) + np.einsum("cdb->dbc", dg) - dg
    return 0.5 * np.einsum("ad,dbc->abc", ginv, t)


def christoffel(m: Metric6, probe: CurvatureProbe) -> np.ndarray:
    """Gamma[A, B, C] = Gamma^A_{BC} by central differences."""
    return _christoffel_at(m, probe.x, probe.step, probe.order)


def curvature(m: Metric6, probe: CurvatureProbe) -> dict:
    """Riemann, Ricci, scalar curvature and Einstein tensor at the probe."""
    x, h, o = probe.x, probe.step, probe.order
    g = m(x)
    ginv, cond = _inverse(g)
    gam = _christoffel_at(m, x, h, o)
    dgam = gradient(lambda y: _christoffel_at(m, y, h, o), x, h, o)  # dgam[C, A, D, B] = d_C Gamma^A_DB
    # R^A_BCD = d_C Gamma^A_DB - d_D Gamma^A_CB + Gamma^A_CE Gamma^E_DB - Gamma^A_DE Gamma^E_CB
    riem = (
        np.einsum("cadb->abcd", dgam)
        - np.einsum("dacb->abcd", dgam)
        + np.einsum("ace,edb->abcd", gam, gam)
        - np.einsum("ade,ecb->abcd", gam, gam)
    )
    ricci = np.einsum("abad->bd", riem)
    scalar = np.einsum("bd,bd->", ginv, ricci)
    einstein = ricci - 0.5 * g * scalar
    return {"christoffel": gam, "riemann": riem, "ricci": ricci, "scalar": scalar, "einstein": einstein, "cond": cond}


def einstein_tensor(m: Metric6, probe: CurvatureProbe, estimate_error: bool = True):
    """G_AB at the probe and a Richardson estimate of its truncation error.

    The source term is left symbolic: T_AB = G_AB / kappa.
    """
    G = curvature(m, probe)["einstein"]
    err = math.nan
    if estimate_error:
        coarse = curvature(m, CurvatureProbe(probe.event, 2.0 * probe.step, probe.order))["einstein"]
        err = float(np.max(np.abs(coarse - G))) / (2.0**probe.order - 1.0)
    return G, err


def ricci_tensor(m: Metric6, probe: CurvatureProbe) -> np.ndarray:
    return curvature(m, probe)["ricci"]


# -- intervals ------------------------------------------------------------

def interval(m: Metric6, dx, e) -> complex:
    """ds^2 = g_AB dx^A dx^B."""
    dx = np.asarray(dx, dtype=float)
    val = dx @ m(e) @ dx
    return complex(val) if np.iscomplexobj(val) else float(val)


def local_flat_transform(m: Metric6, dx, e) -> complex:
    """Interval in the adapted coordinate dx4_new = A.dx + A5 dx5 + dx4."""
    if m.kind not in ("vector", "electromagnetic", "fermion"):
        raise ConfigurationError(f"no local-flat coordinate for {m.kind!r} metric")
    x = e.as_array() if isinstance(e, Event6) else np.asarray(e, dtype=float)
    dx = np.asarray(dx, dtype=float)
    A = np.asarray(m.field_data["A"](x))
    A5 = m.field_data["A5"](x)
    dx4_new = A @ dx[:4] + A5 * dx[5] + dx[4]
    val = dx[:4] @ ETA4 @ dx[:4] - dx[5] ** 2 + dx4_new**2
    return complex(val) if np.iscomplexobj(val) else float(val)


# -- field-equation residuals ---------------------------------------------

def dalembertian(f: Callable, x: np.ndarray, step: float, order: int):
    """d_alpha d^alpha f over the 4D sector, signature (+,-,-,-)."""
    out = second_partial(f, x, 0, step, order)
    for a in (1, 2, 3):
        out = out - second_partial(f, x, a, step, order)
    return out


def kg_residual(w: ScalarWave, probe: CurvatureProbe, tolerance: float = 1e-6) -> ResidualReport:
    x = probe.x
    res = dalembertian(w, x, probe.step, probe.order) + w.m0**2 * w(x)
    return ResidualReport(
        "klein_gordon",
        float(abs(res)),
        tolerance,
        {"E": w.E, "p": w.p, "m0": w.m0, "form": w.form, "shell_defect": w.shell_defect,
         "psi_abs": float(abs(w(x))), "step": probe.step, "order": probe.order},
    )


@dataclass(frozen=True)
class PlaneVectorField:
    """A_beta = eps_beta exp(i (E t - p.x)/hbar), lower-index polarization."""

    E: float
    p: tuple
    eps: tuple

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x)
        ph = self.E * x[0] - np.dot(self.p, x[1:4])
        return np.asarray(self.eps, dtype=complex) * np.exp(1j * ph)


def _field_strength(A: Callable, x, step, order) -> np.ndarray:
    dA = gradient(A, x, step, order, axes=range(4))  # dA[mu, nu] = d_mu A_nu
    return dA - dA.T


def proca_residual(A: Callable, m0: float, probe: CurvatureProbe, tolerance: float = 1e-6) -> ResidualReport:
    """max_beta |d^alpha F_alpha_beta + m0^2 A_beta|, plus the invariant 1/4 F^2 - 1/2 m0^2 A^2."""
    x, h, o = probe.x, probe.step, probe.order
    dF = gradient(lambda y: _field_strength(A, y, h, o), x, h, o, axes=range(4))  # dF[mu, a, b]
    divF = np.einsum("am,mab->b", ETA4, dF)
    Ax = np.asarray(A(x))
    res = divF + m0**2 * Ax
    F = _field_strength(A, x, h, o)
    F_up = ETA4 @ F @ ETA4
    inv = 0.25 * np.sum(F * F_up) - 0.5 * m0**2 * (Ax @ ETA4 @ Ax)
    return ResidualReport(
        "proca",
        float(np.max(np.abs(res))),
        tolerance,
        {"m0": m0, "components": np.abs(res).tolist(), "invariant": complex(inv),
         "invariant_abs": float(abs(inv)), "step": h, "order": o},
    )


def coulomb_check(e_charge: float, probe: CurvatureProbe, tolerance: float = 1e-5) -> ResidualReport:
    """Spatial Laplacian of A5 = e/r, relative to the e/r^3 scale."""
    x = probe.x
    r = float(np.linalg.norm(x[1:4]))
    if r <= 10.0 * probe.step:
        raise SingularityProximityError(f"r = {r} within 10 steps of the origin")

    def A5(y):
        return coulomb_potential(e_charge, y)

    lap = sum(second_partial(A5, x, a, probe.step, probe.order) for a in (1, 2, 3))
    if e_charge == 0:
        rel = float(abs(lap))
    else:
        rel = float(abs(lap)) / (abs(e_charge) / r**3)
    return ResidualReport("coulomb", rel, tolerance, {"e": e_charge, "r": r, "laplacian": float(lap),
                                                      "step": probe.step, "order": probe.order})


def measured_order(errors, steps) -> float:
    """Least-squares slope of log(error) against log(step)."""
    return float(np.polyfit(np.log(steps), np.log(errors), 1)[0])

"""Uniaxial crystal dispersion and polarization geometry.

The extraordinary surface is the usual index ellipsoid: a wave vector ``k``
propagates as an e-wave when

    (k . e_a)^2 / n_o^2 + (|k|^2 - (k . e_a)^2) / n_e^2 = k_0^2

with ``e_a = (sin theta, 0, cos theta)`` the optic axis.  Every solve is a
bracketed root search (bisection with secant/inverse-quadratic steps) whose
bracket comes from the vertex of the quadratic section of that surface.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.constants import c as SPEED_OF_LIGHT
from scipy.optimize import brentq

from .errors import DegenerateDirection, EvanescentMode, NoConvergence

SOLVE_RTOL = 1e-12
MAX_ITER = 200
FD_STEP = 1e-6


@dataclass(frozen=True)
class CrystalConfig:
    """Geometry and optical constants of the nonlinear crystal.

    Lengths are in metres and ``theta`` in radians.  ``n_o`` and
    ``n_e_principal`` are the indices at the signal frequency;
    ``pump_index`` is the index seen by the pump.  ``chi_eff`` is either a
    scalar effective nonlinearity or a full (3, 3, 3) tensor.
    """

    L_x: float
    L_y: float
    L_z: float
    n_o: float
    n_e_principal: float
    theta: float
    chi_eff: float | np.ndarray = 1.0
    pump_index: float = 1.0

    def __post_init__(self):
        for name in ("L_x", "L_y", "L_z", "n_o", "n_e_principal", "pump_index"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be positive and finite, got {value!r}")
        if not 0.0 < self.theta < math.pi:
            raise ValueError(f"theta must lie in (0, pi), got {self.theta!r}")
        chi = np.asarray(self.chi_eff)
        if chi.shape not in ((), (3, 3, 3)):
            raise ValueError("chi_eff must be a scalar or a (3, 3, 3) tensor")

    @property
    def optic_axis(self) -> np.ndarray:
        return np.array([math.sin(self.theta), 0.0, math.cos(self.theta)])

    @property
    def lengths(self) -> np.ndarray:
        return np.array([self.L_x, self.L_y, self.L_z])

    @property
    def volume(self) -> float:
        return self.L_x * self.L_y * self.L_z

    @property
    def is_isotropic(self) -> bool:
        return self.n_o == self.n_e_principal


@dataclass(frozen=True)
class SlopeCoefficients:
    """Partial derivatives dk_z/dk_transverse at the degenerate emission point."""

    a_ox: float
    a_ex: float
    a_oy: float
    a_ey: float


def wavenumber(omega: float) -> float:
    """Vacuum wave number ``k_0 = omega / c``."""
    return omega / SPEED_OF_LIGHT


def _bracketed_root(func: Callable[[float], float], lo: float, hi: float, scale: float) -> float:
    try:
        root, info = brentq(
            func, lo, hi, xtol=1e-3 * SOLVE_RTOL * scale, maxiter=MAX_ITER, full_output=True
        )
    except (RuntimeError, ValueError) as exc:
        raise NoConvergence(f"bracketed solve on [{lo!r}, {hi!r}] failed: {exc}") from exc
    if not info.converged:
        raise NoConvergence(f"bracketed solve did not converge after {info.iterations} iterations")
    return root


def _e_surface_quadratic(crystal: CrystalConfig, k0: float):
    """Return a function evaluating g(k) = k . G . k for the index ellipsoid."""
    inv_e2 = 1.0 / crystal.n_e_principal**2
    coupling = 1.0 / crystal.n_o**2 - inv_e2
    axis = crystal.optic_axis

    def g(kx: float, ky: float, kz: float) -> float:
        along = kx * axis[0] + kz * axis[2]
        return (kx * kx + ky * ky + kz * kz) * inv_e2 + coupling * along * along

    return g, inv_e2, coupling


def e_surface_residual(k: np.ndarray, omega: float, crystal: CrystalConfig) -> float:
    """``sqrt(g(k)) - k_0``; zero exactly on the extraordinary surface."""
    g, _, _ = _e_surface_quadratic(crystal, wavenumber(omega))
    return math.sqrt(g(*map(float, k))) - wavenumber(omega)


def kz_ordinary(k_x: float, k_y: float, omega: float, crystal: CrystalConfig) -> float:
    k0 = wavenumber(omega)
    radicand = (crystal.n_o * k0) ** 2 - k_x * k_x - k_y * k_y
    if radicand < 0:
        raise EvanescentMode(
            f"ordinary radicand {radicand:.6g} < 0 at k_x={k_x!r}, k_y={k_y!r}"
        )
    return math.sqrt(radicand)


def kz_extraordinary(k_x: float, k_y: float, omega: float, crystal: CrystalConfig) -> float:
    """Forward (k_z > 0) root of the extraordinary surface at fixed (k_x, k_y)."""
    k0 = wavenumber(omega)
    g, inv_e2, coupling = _e_surface_quadratic(crystal, k0)
    s, _, c = crystal.optic_axis
    quad = inv_e2 + coupling * c * c
    lin = 2.0 * coupling * k_x * s * c
    vertex = -lin / (2.0 * quad)

    def residual(kz: float) -> float:
        return math.sqrt(g(k_x, k_y, kz)) - k0

    if residual(vertex) > 0:
        raise EvanescentMode(f"no extraordinary wave at k_x={k_x!r}, k_y={k_y!r}")
    hi = vertex + 1.01 * k0 / math.sqrt(quad) + 1e-12 * k0
    kz = _bracketed_root(residual, vertex, hi, k0)
    if kz <= 0:
        raise EvanescentMode(f"extraordinary root {kz!r} is not forward propagating")
    return kz


def mirror_kx_e(k_ez: float, k_y: float, omega: float, crystal: CrystalConfig) -> float:
    """Magnitude k'_ex of the side-wall partner of an e-wave.

    Returns ``k'_ex`` such that ``(-k'_ex, k_y, k_ez)`` is the lower of the two
    k_x roots of the extraordinary surface at fixed (k_y, k_ez).  For a
    tilted axis the section is not centred on k_x = 0, so the partner of an
    incident ``k_mx`` is not ``-k_mx``.
    """
    k0 = wavenumber(omega)
    g, inv_e2, coupling = _e_surface_quadratic(crystal, k0)
    s, _, c = crystal.optic_axis
    quad = inv_e2 + coupling * s * s
    lin = 2.0 * coupling * k_ez * s * c
    vertex = -lin / (2.0 * quad)

    def residual(kx: float) -> float:
        return math.sqrt(g(kx, k_y, k_ez)) - k0

    if residual(vertex) > 0:
        raise EvanescentMode(f"no extraordinary wave at k_y={k_y!r}, k_z={k_ez!r}")
    lo = vertex - 1.01 * k0 / math.sqrt(quad) - 1e-12 * k0
    return -_bracketed_root(residual, lo, vertex, k0)


def _oriented(v: np.ndarray) -> np.ndarray:
    tie = 1e-15
    if v[1] < -tie or (abs(v[1]) <= tie and v[0] < -tie):
        return -v
    return v


def polarization_vector(kind: str, k, crystal: CrystalConfig) -> np.ndarray:
    """Unit polarization of an o- or e-wave travelling along ``k``.

    The o-vector is ``k x e_a`` oriented so its y-component is non-negative
    (ties broken by x).  The e-vector is the displacement direction
    ``e_o x k_hat``; it lies in span{k, e_a}, is exactly transverse, and keeps
    a right-handed (e_o, e_e, k) triad so it varies continuously with k.
    """
    k = np.asarray(k, dtype=float)
    knorm = np.linalg.norm(k)
    if knorm == 0:
        raise DegenerateDirection("zero wave vector")
    khat = k / knorm
    o = np.cross(khat, crystal.optic_axis)
    onorm = np.linalg.norm(o)
    if onorm < 1e-12:
        raise DegenerateDirection("wave vector parallel to the optic axis")
    o = _oriented(o / onorm)
    if kind == "o":
        return o
    if kind == "e":
        e = np.cross(o, khat)
        return e / np.linalg.norm(e)
    raise ValueError(f"kind must be 'o' or 'e', got {kind!r}")


def central_difference(func: Callable[[float], float], x: float, h: float) -> float:
    return (func(x + h) - func(x - h)) / (2.0 * h)


def slope_coefficients(k_yd: float, omega_s: float, crystal: CrystalConfig) -> SlopeCoefficients:
    """Slopes of k_z with respect to transverse offsets around (0, k_yd).

    The o-surface slopes are analytic; the e-surface slopes are central
    differences with step ``1e-6 * k_0``.
    """
    k0 = wavenumber(omega_s)
    h = FD_STEP * k0
    kz_o = kz_ordinary(0.0, k_yd, omega_s, crystal)
    a_ex = central_difference(lambda kx: kz_extraordinary(kx, k_yd, omega_s, crystal), 0.0, h)
    a_ey = central_difference(lambda ky: kz_extraordinary(0.0, ky, omega_s, crystal), k_yd, h)
    return SlopeCoefficients(a_ox=0.0, a_ex=a_ex, a_oy=-k_yd / kz_o, a_ey=a_ey)

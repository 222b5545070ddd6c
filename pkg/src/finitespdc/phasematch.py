"""SPDC matrix element, parity selection rule and degenerate phase matching."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.constants import epsilon_0

from .crystal import (
    SOLVE_RTOL,
    CrystalConfig,
    _bracketed_root,
    kz_extraordinary,
    kz_ordinary,
    wavenumber,
)
from .errors import EvanescentMode, NoConvergence, NoPhaseMatch
from .modes import EigenMode, box_integral

BRACKET_FRACTION = 0.99
MONOTONE_SAMPLES = 64


@dataclass(frozen=True)
class DegenerateGeometry:
    """Emission geometry of a degenerate o/e pair that overlaps outside the crystal.

    ``epsilon_slope`` is cot(theta) / (n_o k_0), so a mode labelled (k_x, k_y)
    has polarization-mixing parameter ``(k_y - k_x) * epsilon_slope``.
    """

    k_yd: float
    epsilon: float
    k_s: np.ndarray
    k_i: np.ndarray
    e_ys: np.ndarray
    e_yi: np.ndarray
    k0: float
    omega_s: float
    k_p: float
    epsilon_slope: float

    @classmethod
    def from_kyd(cls, k_yd: float, omega_s: float, k_p: float, crystal: CrystalConfig):
        k0 = wavenumber(omega_s)
        if abs(k_yd) >= k0:
            raise EvanescentMode(f"k_yd = {k_yd!r} is totally reflected (k_0 = {k0!r})")
        slope = 1.0 / (math.tan(crystal.theta) * crystal.n_o * k0)
        kz = math.sqrt(k0 * k0 - k_yd * k_yd)
        return cls(
            k_yd=k_yd,
            epsilon=k_yd * slope,
            k_s=np.array([0.0, k_yd, kz]),
            k_i=np.array([0.0, -k_yd, kz]),
            e_ys=np.array([0.0, 1.0, -k_yd / k0]),
            e_yi=np.array([0.0, 1.0, k_yd / k0]),
            k0=k0,
            omega_s=omega_s,
            k_p=k_p,
            epsilon_slope=slope,
        )


def _chi_contraction(chi, e_p, e_o, e_e) -> float:
    chi = np.asarray(chi)
    if chi.ndim == 0:
        return float(chi)
    return float(np.einsum("ijh,i,j,h->", chi, e_p, e_o, e_e))


def matrix_element(pump, mode_o: EigenMode, mode_e: EigenMode, crystal: CrystalConfig) -> complex:
    """Overlap of a plane pump along z with the conjugates of an o- and an e-mode.

    Evaluated analytically as a sum over the 4 x 4 component pairs, each a box
    sinc factor of the mismatch ``k_p z - k_o - k_e``.
    """
    kp = np.array([0.0, 0.0, pump.k_p])
    total = 0j
    for co in mode_o.components:
        for ce in mode_e.components:
            chi = _chi_contraction(crystal.chi_eff, pump.pol, co.pol, ce.pol)
            box = box_integral(kp - co.k - ce.k, crystal.lengths)
            total += chi * box * np.exp(-1j * (co.phase + ce.phase))
    return complex(2.0 * epsilon_0 * mode_o.norm_const * mode_e.norm_const * total)


def parity_coefficient(mode_o: EigenMode, mode_e: EigenMode) -> int:
    return int(mode_o.parity == mode_e.parity)


def mismatch_residual(mode_o: EigenMode, mode_e: EigenMode, k_p: float) -> float:
    """Smallest momentum mismatch of the two side-wall pairings (o1+e4, o2+e3)."""
    kp = np.array([0.0, 0.0, k_p])
    ko, ke = mode_o.wave_vectors, mode_e.wave_vectors
    return float(min(np.linalg.norm(ko[0] + ke[3] - kp), np.linalg.norm(ko[1] + ke[2] - kp)))


def degenerate_mismatch(k_yd: float, omega_s: float, crystal: CrystalConfig) -> float:
    """k_oz(0, k_yd) + k_ez(0, -k_yd) at the signal frequency."""
    return kz_ordinary(0.0, k_yd, omega_s, crystal) + kz_extraordinary(0.0, -k_yd, omega_s, crystal)


def propagating_bracket(omega_s: float, crystal: CrystalConfig) -> float:
    """Upper end of the k_yd bracket where both surfaces still propagate at k_x = 0."""
    k0 = wavenumber(omega_s)
    return BRACKET_FRACTION * min(crystal.n_o, crystal.n_e_principal) * k0


def solve_degenerate_kyd(omega_p: float, crystal: CrystalConfig) -> DegenerateGeometry:
    omega_s = 0.5 * omega_p
    k_p = crystal.pump_index * wavenumber(omega_p)
    tol = SOLVE_RTOL * k_p

    def f(k_yd: float) -> float:
        return degenerate_mismatch(k_yd, omega_s, crystal) - k_p

    hi = propagating_bracket(omega_s, crystal)
    f0, f_hi = f(0.0), f(hi)
    if abs(f0) <= tol:
        return DegenerateGeometry.from_kyd(0.0, omega_s, k_p, crystal)
    if f0 < 0 or f_hi > 0:
        raise NoPhaseMatch(
            f"no phase match in bracket: k_p = {k_p!r} outside [{f_hi + k_p!r}, {f0 + k_p!r}]"
        )
    samples = np.array([f(x) for x in np.linspace(0.0, hi, MONOTONE_SAMPLES)])
    if np.any(np.diff(samples) > 0):
        bad = int(np.argmax(np.diff(samples) > 0))
        raise NoConvergence(
            f"phase-match function not monotone near k_yd = {bad * hi / (MONOTONE_SAMPLES - 1)!r}"
        )
    k_yd = _bracketed_root(f, 0.0, hi, wavenumber(omega_s))
    if abs(f(k_yd)) >= tol:
        raise NoConvergence(f"phase-match residual {abs(f(k_yd))!r} above {tol!r}")
    return DegenerateGeometry.from_kyd(k_yd, omega_s, k_p, crystal)

"""External signal/idler field operators and polarization analyzers.

A beam's field is a linear form in the mode annihilators, each mode carrying
a complex 3-vector coefficient.  Analyzers live in the beam's transverse
basis (x, e_y), where e_ys = y - z k_yd/k_0 for the signal and
e_yi = y + z k_yd/k_0 for the idler.  These basis vectors are not unit
length; projections use coordinates in that basis, so the analyzer
direction x cos(a) + e_y sin(a) sees the coordinates of a coefficient
rather than its Euclidean components.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import BasisMismatch
from .modes import ModeKey

BEAMS = ("signal", "idler")
VARIANTS = ("none", "swap", "pi_phase", "swap_pi")
X_HAT = np.array([1.0, 0.0, 0.0])


@dataclass(frozen=True, eq=False)
class AnnihilationForm:
    """sum_m c_m b_m times exp(i phase); c_m are 3-vectors or scalars."""

    beam: str
    keys: tuple[ModeKey, ...]
    coefficients: np.ndarray
    basis_y: np.ndarray
    phase: float = 0.0

    @property
    def is_scalar(self) -> bool:
        return self.coefficients.ndim == 1

    @cached_property
    def coefficient_map(self) -> dict:
        if not self.is_scalar:
            raise TypeError("only projected (scalar) forms act on kets")
        return dict(zip(self.keys, self.coefficients.tolist()))

    def transverse_coordinates(self):
        """Split vector coefficients into (x, e_y) coordinates plus a remainder."""
        c = self.coefficients
        along_x = c[:, 0]
        along_y = c @ self.basis_y / float(self.basis_y @ self.basis_y)
        rest = c - np.outer(along_x, X_HAT) - np.outer(along_y, self.basis_y)
        return along_x, along_y, rest

    def scaled(self, factor: complex) -> "AnnihilationForm":
        return AnnihilationForm(
            self.beam, self.keys, factor * self.coefficients, self.basis_y, self.phase
        )


@dataclass(frozen=True)
class AnalyzerSetting:
    angle: float
    beam: str = "signal"

    def direction(self, geometry) -> np.ndarray:
        e_y = geometry.e_ys if self.beam == "signal" else geometry.e_yi
        return X_HAT * math.cos(self.angle) + e_y * math.sin(self.angle)


def mode_epsilon(key: ModeKey, geometry) -> float:
    """Polarization-mixing parameter of a mode, (k_y - k_x) cot(theta) / (n_o k_0)."""
    return (key.ky - key.kx) * geometry.epsilon_slope


def beam_field_form(
    beam: str, state, geometry=None, *, idler_phase: float = 0.0, literal: bool = False
) -> AnnihilationForm:
    """Field of one output beam as a vector-valued annihilation form.

    The default sign pattern is

        signal:  b_o (e_ys - eps x) + b_e (x + eps e_ys)
        idler:   b_o (e_yi + eps x) + b_e (x - eps e_yi)

    under which the coincidence and same-beam probabilities take the
    closed forms in :mod:`finitespdc.correlation`.  ``literal=True`` flips
    the sign of every eps term, which is the same field with the roles of
    the two beams exchanged.  Odd-parity modes pick up a factor -1 in the
    idler, the relative phase of their -k_y component.
    """
    if beam not in BEAMS:
        raise ValueError(f"beam must be one of {BEAMS}, got {beam!r}")
    geometry = geometry if geometry is not None else state.geometry
    keys = []
    for pair in state.pairs:
        keys.extend((pair.mode_o, pair.mode_e))
    keys = tuple(dict.fromkeys(keys))
    sign = 1.0 if literal else -1.0
    e_y = geometry.e_ys if beam == "signal" else geometry.e_yi
    beam_sign = 1.0 if beam == "signal" else -1.0
    coeffs = np.empty((len(keys), 3), dtype=complex)
    for row, key in enumerate(keys):
        eps = sign * beam_sign * mode_epsilon(key, geometry)
        if key.kind == "o":
            vec = e_y + eps * X_HAT
        else:
            vec = X_HAT - eps * e_y
        if beam == "idler" and key.parity == "odd":
            vec = -vec
        coeffs[row] = vec
    return AnnihilationForm(
        beam, keys, coeffs, e_y.copy(), idler_phase if beam == "idler" else 0.0
    )


def project(form: AnnihilationForm, analyzer: AnalyzerSetting) -> AnnihilationForm:
    """Scalar form e . E for an analyzer at ``analyzer.angle`` in the (x, e_y) basis."""
    if form.is_scalar:
        raise TypeError("form is already projected")
    if analyzer.beam != form.beam:
        raise BasisMismatch(f"{analyzer.beam} analyzer applied to the {form.beam} field")
    along_x, along_y, _ = form.transverse_coordinates()
    coeffs = math.cos(analyzer.angle) * along_x + math.sin(analyzer.angle) * along_y
    return AnnihilationForm(form.beam, form.keys, coeffs, form.basis_y, form.phase)


def waveplate_transform(form: AnnihilationForm, variant: str) -> AnnihilationForm:
    """Swap the x and e_y coordinates, flip the e_y sign, or both (swap first)."""
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}, got {variant!r}")
    if variant == "none":
        return form
    if form.is_scalar:
        raise TypeError("wave plates act on vector forms, before projection")
    along_x, along_y, rest = form.transverse_coordinates()
    if variant in ("swap", "swap_pi"):
        along_x, along_y = along_y, along_x
    if variant in ("pi_phase", "swap_pi"):
        along_y = -along_y
    coeffs = np.outer(along_x, X_HAT) + np.outer(along_y, form.basis_y) + rest
    return AnnihilationForm(form.beam, form.keys, coeffs, form.basis_y, form.phase)

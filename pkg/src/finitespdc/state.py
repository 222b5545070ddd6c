"""Two-photon states for plane-wave and Gaussian pumps."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .crystal import CrystalConfig, slope_coefficients, wavenumber
from .errors import DegenerateConstraint, EvanescentMode, NoPhaseMatch
from .modes import ModeKey, build_internal_mode
from .phasematch import (
    DegenerateGeometry,
    matrix_element,
    mismatch_residual,
    parity_coefficient,
    solve_degenerate_kyd,
)

MIN_SLOPE = 1e-15


@dataclass(frozen=True)
class PumpBeam:
    kind: str
    omega_p: float
    k_p: float
    sigma: float | None = None
    pol: np.ndarray = field(default_factory=lambda: np.array([1.0, 0.0, 0.0]))

    def __post_init__(self):
        if self.kind not in ("plane", "gaussian"):
            raise ValueError(f"pump kind must be 'plane' or 'gaussian', got {self.kind!r}")
        if not self.k_p > 0:
            raise ValueError("k_p must be positive")
        if self.kind == "gaussian" and not (self.sigma is not None and self.sigma > 0):
            raise ValueError("a Gaussian pump needs sigma > 0")

    @classmethod
    def for_crystal(cls, omega_p: float, crystal: CrystalConfig, kind="plane", sigma=None):
        return cls(kind, omega_p, crystal.pump_index * wavenumber(omega_p), sigma)


@dataclass(frozen=True)
class ModePairAmplitude:
    label_o: tuple[float, float]
    label_e: tuple[float, float]
    amp: complex
    parity: str = "even"

    @property
    def mode_o(self) -> ModeKey:
        return ModeKey("o", *self.label_o, self.parity)

    @property
    def mode_e(self) -> ModeKey:
        return ModeKey("e", *self.label_e, self.parity)


@dataclass(frozen=True)
class PlaneWaveGrid:
    """Candidate mode labels k_x = i*dkx (i < nx), k_y = ky_center + j*dky (|j| <= ny)."""

    dkx: float
    dky: float
    nx: int = 1
    ny: int = 0
    ky_center: float | None = None
    parities: tuple[str, ...] = ("even", "odd")

    def labels(self, ky_center: float) -> list[tuple[float, float]]:
        kxs = [i * self.dkx for i in range(self.nx)]
        kys = [ky_center + j * self.dky for j in range(-self.ny, self.ny + 1)]
        return [(kx, ky) for kx in kxs for ky in kys if ky > 0]


@dataclass(frozen=True)
class OffsetGrid:
    """Free-offset lattice for the Gaussian state: ``steps`` points over +-span*sigma."""

    steps: int = 33
    span: float = 4.0


@dataclass(frozen=True)
class TwoPhotonState:
    pairs: tuple[ModePairAmplitude, ...]
    geometry: DegenerateGeometry
    grid: object | None = None

    @property
    def norm(self) -> float:
        return math.sqrt(sum(abs(p.amp) ** 2 for p in self.pairs))

    def amplitudes(self) -> np.ndarray:
        return np.array([p.amp for p in self.pairs], dtype=complex)

    def to_records(self) -> list[dict]:
        return [
            {
                "ko": [p.label_o[0], p.label_o[1]],
                "ke": [p.label_e[0], p.label_e[1]],
                "re": complex(p.amp).real,
                "im": complex(p.amp).imag,
                "parity": p.parity,
            }
            for p in self.pairs
        ]

    def dumps(self) -> str:
        return json.dumps(self.to_records(), indent=1)


def _normalized(pairs: Sequence[ModePairAmplitude]) -> tuple[ModePairAmplitude, ...]:
    norm = math.sqrt(sum(abs(p.amp) ** 2 for p in pairs))
    return tuple(
        ModePairAmplitude(p.label_o, p.label_e, complex(p.amp) / norm, p.parity) for p in pairs
    )


def build_degenerate_pair_state(geometry: DegenerateGeometry) -> TwoPhotonState:
    label = (0.0, geometry.k_yd)
    return TwoPhotonState((ModePairAmplitude(label, label, 1.0 + 0j),), geometry)


def build_state_planewave(
    pump: PumpBeam,
    crystal: CrystalConfig,
    grid: PlaneWaveGrid,
    phases: Mapping[str, Sequence[float]] | None = None,
) -> TwoPhotonState:
    """Superpose every phase-matched, parity-allowed o/e pair on the label grid.

    A pair is kept when its mismatch is below 2 pi / L_z; its amplitude is the
    matrix element, and the state is normalized afterwards.
    """
    geometry = solve_degenerate_kyd(pump.omega_p, crystal)
    omega_s = geometry.omega_s
    ky_center = geometry.k_yd if grid.ky_center is None else grid.ky_center
    window = 2 * math.pi / crystal.L_z
    phases = phases or {}

    def modes(kind):
        out = []
        for kx, ky in grid.labels(ky_center):
            for parity in grid.parities:
                try:
                    out.append(
                        build_internal_mode(kind, kx, ky, omega_s, parity, crystal, phases.get(parity))
                    )
                except EvanescentMode:
                    continue
        return out

    pairs = []
    for mo in modes("o"):
        for me in modes("e"):
            if parity_coefficient(mo, me) != 1:
                continue
            if mismatch_residual(mo, me, pump.k_p) >= window:
                continue
            amp = matrix_element(pump, mo, me, crystal)
            if amp != 0:
                pairs.append(ModePairAmplitude(mo.label, me.label, amp, mo.parity))
    if not pairs:
        raise NoPhaseMatch("no phase-matched mode pair on the label grid")
    return TwoPhotonState(_normalized(pairs), geometry, grid)


def gaussian_factor(offset_o, offset_e, sigma: float) -> float:
    """Pump-envelope weight exp(-|k_o - k_e|^2 / 2 sigma^2) of a pair of offsets."""
    dx = offset_o[0] - offset_e[0]
    dy = offset_o[1] - offset_e[1]
    return np.exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma))


def build_state_gaussian(
    pump: PumpBeam,
    geometry: DegenerateGeometry,
    crystal: CrystalConfig,
    grid: OffsetGrid = OffsetGrid(),
) -> TwoPhotonState:
    """Gaussian-pump state over the free offsets (k_ox, k_ex, k_oy).

    The remaining offset k_ey is fixed by the linearized phase-match
    constraint; resolving the delta function leaves the Jacobian 1/|a_ey|.
    """
    if pump.kind != "gaussian":
        raise ValueError("build_state_gaussian needs a Gaussian pump")
    slopes = slope_coefficients(geometry.k_yd, geometry.omega_s, crystal)
    if abs(slopes.a_ey) < MIN_SLOPE:
        raise DegenerateConstraint(f"a_ey = {slopes.a_ey!r}; constraint cannot fix k_ey")
    sigma = pump.sigma
    axis = np.linspace(-grid.span * sigma, grid.span * sigma, grid.steps)
    k_ox, k_ex, k_oy = (a.ravel() for a in np.meshgrid(axis, axis, axis, indexing="ij"))
    k_ey = -(slopes.a_ox * k_ox + slopes.a_ex * k_ex + slopes.a_oy * k_oy) / slopes.a_ey
    amp = gaussian_factor((k_ox, k_oy), (k_ex, k_ey), sigma) / abs(slopes.a_ey)
    k_yd = geometry.k_yd
    pairs = [
        ModePairAmplitude((float(ox), k_yd + float(oy)), (float(ex), k_yd + float(ey)), complex(a))
        for ox, oy, ex, ey, a in zip(k_ox, k_oy, k_ex, k_ey, amp)
    ]
    return TwoPhotonState(_normalized(pairs), geometry, grid)

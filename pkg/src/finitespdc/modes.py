"""Four-wave eigen modes of the finite crystal and their inner product."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import NamedTuple, Sequence

import numpy as np
from scipy.constants import epsilon_0, hbar

from .crystal import (
    CrystalConfig,
    kz_extraordinary,
    kz_ordinary,
    mirror_kx_e,
    polarization_vector,
    wavenumber,
)
from .errors import EvanescentMode

DEFAULT_PHASES = {
    "even": (0.0, 0.0, 0.0, 0.0),
    "odd": (0.0, math.pi, 0.0, math.pi),
}


class ModeKey(NamedTuple):
    """Hashable identity of a mode; sorts by (kind, k_x, k_y)."""

    kind: str
    kx: float
    ky: float
    parity: str = "even"


@dataclass(frozen=True)
class PlaneWaveComponent:
    k: np.ndarray
    pol: np.ndarray
    phase: float = 0.0


@dataclass(frozen=True)
class EigenMode:
    kind: str
    parity: str
    omega: float
    label: tuple[float, float]
    components: tuple[PlaneWaveComponent, ...]
    norm_const: float = 1.0

    @property
    def key(self) -> ModeKey:
        return ModeKey(self.kind, self.label[0], self.label[1], self.parity)

    @property
    def wave_vectors(self) -> np.ndarray:
        return np.array([c.k for c in self.components])

    @property
    def effective_index(self) -> float:
        return float(np.linalg.norm(self.components[0].k)) / wavenumber(self.omega)


def standing_wavenumber(index: int, length: float) -> float:
    """Transverse wave number index * pi / L of a box standing wave.

    Labels on this lattice make distinct same-frequency modes orthogonal:
    every sinc factor in their overlap sits on a zero.  Off-lattice labels
    leave cross terms of order 1 / (k L).
    """
    if index < 1:
        raise ValueError(f"standing-wave index must be >= 1, got {index!r}")
    return index * math.pi / length


def box_integral(q: np.ndarray, lengths: np.ndarray) -> np.ndarray:
    """Integral of exp(i q . r) over a box centred on the origin.

    ``q`` has shape (..., 3).  The result is real: prod_d L_d sinc(q_d L_d / 2).
    """
    q = np.asarray(q, dtype=float)
    return np.prod(lengths * np.sinc(q * lengths / (2.0 * math.pi)), axis=-1)


def _component_wave_vectors(kind, k_mx, k_my, omega, crystal):
    if kind == "o":
        kz = kz_ordinary(k_mx, k_my, omega, crystal)
        xs = (k_mx, k_mx, -k_mx, -k_mx)
    elif kind == "e":
        kz = kz_extraordinary(k_mx, k_my, omega, crystal)
        mirrored = -mirror_kx_e(kz, k_my, omega, crystal)
        xs = (k_mx, k_mx, mirrored, mirrored)
    else:
        raise ValueError(f"kind must be 'o' or 'e', got {kind!r}")
    ys = (k_my, -k_my, k_my, -k_my)
    return [np.array([x, y, kz]) for x, y in zip(xs, ys)]


def build_internal_mode(
    kind: str,
    k_mx: float,
    k_my: float,
    omega: float,
    parity: str,
    crystal: CrystalConfig,
    phases: Sequence[float] | None = None,
) -> EigenMode:
    """Build a normalized o- or e-mode labelled by (k_mx, k_my).

    Components follow the ordering (+x,+y), (+x,-y), (-x',+y), (-x',-y).
    ``phases`` overrides the default (0,0,0,0) / (0,pi,0,pi) pattern; it must
    still satisfy the parity relation between components 1-2 and 3-4.
    """
    if k_mx < 0 or k_my <= 0:
        raise ValueError(f"labels need k_mx >= 0 and k_my > 0, got ({k_mx!r}, {k_my!r})")
    if parity not in DEFAULT_PHASES:
        raise ValueError(f"parity must be 'even' or 'odd', got {parity!r}")
    phases = tuple(float(p) % (2 * math.pi) for p in (phases or DEFAULT_PHASES[parity]))
    if len(phases) != 4:
        raise ValueError("exactly four component phases are required")
    sign = 1.0 if parity == "even" else -1.0
    for a, b in ((0, 1), (2, 3)):
        if abs(np.exp(1j * phases[a]) - sign * np.exp(1j * phases[b])) > 1e-12:
            raise ValueError(f"phases {phases} do not describe an {parity} mode")
    components = tuple(
        PlaneWaveComponent(k=k, pol=polarization_vector(kind, k, crystal), phase=phi)
        for k, phi in zip(_component_wave_vectors(kind, k_mx, k_my, omega, crystal), phases)
    )
    raw = EigenMode(kind, parity, omega, (float(k_mx), float(k_my)), components)
    self_product = mode_inner_product(raw, raw, crystal).real
    return replace(raw, norm_const=math.sqrt(0.5 * hbar * omega / self_product))


def external_mode(
    kind: str, k_y: float, omega: float, crystal: CrystalConfig, phase: float = 0.0
) -> tuple[PlaneWaveComponent, PlaneWaveComponent]:
    """First-order k_x = 0 field outside the crystal (unnormalized)."""
    k0 = wavenumber(omega)
    if abs(k_y) >= k0:
        raise EvanescentMode(f"|k_y| = {abs(k_y)!r} >= k_0 outside the crystal")
    kz = math.sqrt(k0 * k0 - k_y * k_y)
    eps = k_y / (crystal.n_o * k0) / math.tan(crystal.theta)
    x, y, z = np.eye(3)
    if kind == "o":
        pols = (y + eps * x - (k_y / k0) * z, y - eps * x + (k_y / k0) * z)
    elif kind == "e":
        pols = (x - eps * y, x + eps * y)
    else:
        raise ValueError(f"kind must be 'o' or 'e', got {kind!r}")
    return (
        PlaneWaveComponent(np.array([0.0, k_y, kz]), pols[0], 0.0),
        PlaneWaveComponent(np.array([0.0, -k_y, kz]), pols[1], phase),
    )


def mode_inner_product(m1: EigenMode, m2: EigenMode, crystal: CrystalConfig) -> complex:
    """Dielectric-weighted overlap of two modes over the crystal box.

    The dielectric tensor is replaced by ``epsilon_0 * n1 * n2`` with n the
    effective index of each mode.  Modes at different frequencies are
    orthogonal through the time dependence and return exactly zero.
    """
    if m1.omega != m2.omega:
        return 0j
    k1 = m1.wave_vectors[:, None, :]
    k2 = m2.wave_vectors[None, :, :]
    pol = np.array([[np.dot(a.pol, b.pol) for b in m2.components] for a in m1.components])
    phase = np.array([[a.phase - b.phase for b in m2.components] for a in m1.components])
    overlap = np.sum(pol * np.exp(1j * phase) * box_integral(k1 - k2, crystal.lengths))
    weight = epsilon_0 * m1.effective_index * m2.effective_index
    return complex(weight * m1.norm_const * m2.norm_const * overlap)

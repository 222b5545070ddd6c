"""Polarization correlations: closed forms, Fock-oracle scans, fits and CHSH."""

from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.optimize import least_squares

from .errors import DegenerateSettings, DomainError
from .field import (
    VARIANTS,
    AnalyzerSetting,
    beam_field_form,
    project,
    waveplate_transform,
)
from .fockcore import fourth_order_expectation, lift

MODES = ("coincidence", "same_beam")
CSV_HEADER = ("angle1", "angle2", "closed", "oracle")
RELATIVE_FLOOR = 1e-12


def coincidence_closed(alpha, beta, epsilon):
    """Raw squared bracket for one photon in each beam; equals (1+eps^2)^2 sin^2(alpha+beta)."""
    ca, sa, cb, sb = np.cos(alpha), np.sin(alpha), np.cos(beta), np.sin(beta)
    bracket = (ca + epsilon * sa) * (sb + epsilon * cb) + (cb - epsilon * sb) * (sa - epsilon * ca)
    return np.abs(bracket) ** 2


def same_beam_closed(alpha, alpha_prime, epsilon):
    """Both photons in the signal; equals (1+eps^2)^2 sin^2(alpha+alpha' - 2 atan eps)."""
    ca, sa = np.cos(alpha), np.sin(alpha)
    cp, sp = np.cos(alpha_prime), np.sin(alpha_prime)
    bracket = (ca + epsilon * sa) * (sp - epsilon * cp) + (cp + epsilon * sp) * (sa - epsilon * ca)
    return np.abs(bracket) ** 2


def gamma_offset(geometry, crystal) -> tuple[float, float]:
    """Same-beam phase offset two ways: 2 atan(eps), and the arctan formula
    atan(2 k_yd / sqrt(n_o^2 k_0^2 tan^2 theta - k_yd^2)).
    """
    radicand = (crystal.n_o * geometry.k0 * math.tan(crystal.theta)) ** 2 - geometry.k_yd**2
    if radicand <= 0:
        raise DomainError(f"arctan-formula radicand {radicand!r} <= 0")
    derived = 2.0 * math.atan(geometry.epsilon)
    formula = math.atan(2.0 * geometry.k_yd / math.sqrt(radicand))
    return derived, formula


def variant_angle(variant: str, angle):
    """Analyzer angle that reproduces a signal wave plate without the plate."""
    if variant == "none":
        return angle
    if variant == "swap":
        return 0.5 * np.pi - angle
    if variant == "pi_phase":
        return -angle
    if variant == "swap_pi":
        return angle + 0.5 * np.pi
    raise ValueError(f"variant must be one of {VARIANTS}, got {variant!r}")


class CorrelationOracle:
    """Fock-space detection probability for a state, mode and wave-plate variant.

    Forms are built once; projections are cached per analyzer angle.  The
    wave plate sits in the signal beam.
    """

    def __init__(self, state, mode="coincidence", variant="none", *, literal=False, idler_phase=0.0):
        if mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
        self.mode = mode
        self.variant = variant
        self.psi = lift(state)
        signal = waveplate_transform(beam_field_form("signal", state, literal=literal), variant)
        self._first = signal
        if mode == "coincidence":
            self._second = beam_field_form(
                "idler", state, literal=literal, idler_phase=idler_phase
            )
        else:
            self._second = signal
        self._cache: dict = {}

    def _projected(self, which: int, angle: float):
        key = (which, angle)
        if key not in self._cache:
            form = self._first if which == 0 else self._second
            self._cache[key] = project(form, AnalyzerSetting(angle, form.beam))
        return self._cache[key]

    def __call__(self, angle1: float, angle2: float) -> float:
        return fourth_order_expectation(
            self.psi, self._projected(0, float(angle1)), self._projected(1, float(angle2))
        )


@dataclass(frozen=True, eq=False)
class CorrelationScan:
    mode: str
    variant: str
    epsilon: float
    angle1: np.ndarray
    angle2: np.ndarray
    closed: np.ndarray
    oracle: np.ndarray
    steps: int

    def grid(self, values: np.ndarray) -> np.ndarray:
        return np.asarray(values).reshape(self.steps, self.steps)

    def combined_angle(self) -> np.ndarray:
        """Angle combination the correlation depends on.

        Coincidence scans use alpha - beta for the swap and pi_phase plates
        and alpha + beta otherwise.  Same-beam scans always depend on
        alpha + alpha'; a plate only shifts or mirrors the curve.
        """
        if self.mode == "coincidence" and self.variant in ("swap", "pi_phase"):
            return self.angle1 - self.angle2
        return self.angle1 + self.angle2

    def to_records(self) -> list[dict]:
        return [
            dict(zip(CSV_HEADER, (float(v) for v in row)))
            for row in zip(self.angle1, self.angle2, self.closed, self.oracle)
        ]

    def dumps(self) -> str:
        return json.dumps(self.to_records(), indent=1)

    def write_csv(self, path) -> None:
        write_csv_atomic(
            path,
            zip(self.angle1, self.angle2, self.closed, self.oracle),
        )


def format_float(x: float) -> str:
    return format(float(x), ".17g")


def write_text_atomic(path, text: str) -> None:
    """Write through a temporary file in the same directory, then rename into place."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_csv_atomic(path, rows) -> None:
    """Fixed-header CSV with 17-significant-digit values, written atomically."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in rows:
        writer.writerow([format_float(v) for v in row])
    write_text_atomic(path, buf.getvalue())


def scan_angles(steps: int) -> np.ndarray:
    if steps < 2:
        raise ValueError("a scan needs at least 2 steps per axis")
    return np.pi * np.arange(steps) / steps


def scan(state, mode="coincidence", variant="none", steps=37, *, literal=False) -> CorrelationScan:
    """Closed-form and oracle values on a steps x steps grid over [0, pi)^2."""
    oracle = CorrelationOracle(state, mode, variant, literal=literal)
    angles = scan_angles(steps)
    a1, a2 = (g.ravel() for g in np.meshgrid(angles, angles, indexing="ij"))
    eps = state.geometry.epsilon
    if mode == "coincidence":
        closed = coincidence_closed(variant_angle(variant, a1), a2, eps)
    else:
        closed = same_beam_closed(variant_angle(variant, a1), variant_angle(variant, a2), eps)
    values = np.array([oracle(x, y) for x, y in zip(a1, a2)])
    return CorrelationScan(mode, variant, eps, a1, a2, closed, values, steps)


def orthogonal_normalize(values: np.ndarray) -> np.ndarray:
    """Divide each point of a uniform [0, pi)^2 grid by the sum over its four
    orthogonal outcomes (each analyzer rotated by pi/2).
    """
    values = np.asarray(values, dtype=float)
    n = values.shape[0]
    if values.shape != (n, n) or n % 2:
        raise ValueError("need a square grid with an even number of steps")
    h = n // 2
    total = (
        values
        + np.roll(values, -h, axis=0)
        + np.roll(values, -h, axis=1)
        + np.roll(np.roll(values, -h, axis=0), -h, axis=1)
    )
    return values / total


def closed_vs_oracle(closed, oracle) -> tuple[float, float]:
    """Least-squares scale matching oracle to closed values, and the worst
    pointwise relative error after scaling.

    The error at each point is taken relative to max(|closed|, 1e-12 * peak)
    so exact zeros of the curve do not divide by rounding noise.
    """
    closed = np.asarray(closed, dtype=float)
    oracle = np.asarray(oracle, dtype=float)
    denom = float(oracle @ oracle)
    scale = float(closed @ oracle) / denom if denom else 0.0
    floor = RELATIVE_FLOOR * float(np.max(np.abs(closed)))
    rel = np.abs(scale * oracle - closed) / np.maximum(np.abs(closed), floor)
    return scale, float(np.max(rel))


@dataclass(frozen=True)
class SineSquaredFit:
    amplitude: float
    offset: float
    r_squared: float


def _wrap_half_pi(x: float) -> float:
    """Map an offset into (-pi/2, pi/2]; sin^2 has period pi."""
    y = math.remainder(x, math.pi)
    return math.pi / 2 if math.isclose(y, -math.pi / 2, abs_tol=1e-15) else y


def fit_sin2(x, y) -> SineSquaredFit:
    """Least-squares fit of A sin^2(x - x0)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    design = np.column_stack([np.ones_like(x), np.cos(2 * x), np.sin(2 * x)])
    (_, c1, c2), *_ = np.linalg.lstsq(design, y, rcond=None)
    start = np.array([2 * math.hypot(c1, c2), 0.5 * math.atan2(-c2, -c1)])

    def residual(p):
        return p[0] * np.sin(x - p[1]) ** 2 - y

    result = least_squares(residual, start, method="lm", xtol=1e-15, ftol=1e-15, gtol=1e-15)
    amplitude, offset = result.x
    ss_res = float(np.sum(residual(result.x) ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot else 1.0
    return SineSquaredFit(float(amplitude), _wrap_half_pi(float(offset)), r2)


def correlator(prob, a: float, b: float) -> float:
    """E(a, b) from the four orthogonal outcome probabilities."""
    half = 0.5 * math.pi
    pp, mm = prob(a, b), prob(a + half, b + half)
    pm, mp = prob(a, b + half), prob(a + half, b)
    total = pp + mm + pm + mp
    if total <= 0:
        raise DegenerateSettings(f"all outcomes vanish at analyzer angles ({a!r}, {b!r})")
    return (pp + mm - pm - mp) / total


def chsh_parameter(state, settings, variant="none", *, oracle=None) -> float:
    """S = E(a,b) - E(a,b') + E(a',b) + E(a',b') for settings (a, a', b, b')."""
    a, a_p, b, b_p = (float(s) for s in settings)
    prob = oracle or CorrelationOracle(state, "coincidence", variant)
    return (
        correlator(prob, a, b)
        - correlator(prob, a, b_p)
        + correlator(prob, a_p, b)
        + correlator(prob, a_p, b_p)
    )

"""JSON run configuration with explicit units in field names.

Lengths are given in millimetres, angles in degrees and wavelengths in
nanometres; everything is converted to SI units and radians on parse.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from scipy.constants import c as SPEED_OF_LIGHT

from .crystal import CrystalConfig
from .errors import ConfigError
from .state import OffsetGrid, PlaneWaveGrid, PumpBeam

SECTIONS = {"crystal", "pump", "grid", "output", "seed", "mode_phases"}
CRYSTAL_FIELDS = {
    "L_x_mm", "L_y_mm", "L_z_mm", "n_o", "n_e", "theta_deg", "chi_eff", "pump_index",
}
PUMP_FIELDS = {"kind", "wavelength_nm", "k_p_per_m", "sigma_per_m"}
GRID_FIELDS = {
    "steps", "offset_steps", "offset_span", "nx", "ny", "dkx_per_m", "dky_per_m", "parities",
}
OUTPUT_FIELDS = {"path", "format"}


@dataclass(frozen=True)
class GridConfig:
    steps: int = 37
    offset_steps: int = 33
    offset_span: float = 4.0
    nx: int = 1
    ny: int = 0
    dkx: float | None = None
    dky: float | None = None
    parities: tuple[str, ...] = ("even",)

    @property
    def single_label(self) -> bool:
        """True when the plane-wave grid holds only the degenerate even label."""
        return self.nx == 1 and self.ny == 0 and self.parities == ("even",)

    def offset_grid(self) -> OffsetGrid:
        return OffsetGrid(self.offset_steps, self.offset_span)

    def plane_wave_grid(self, crystal: CrystalConfig) -> PlaneWaveGrid:
        # default label spacing is one box-mode step, pi / L
        dkx = self.dkx if self.dkx is not None else math.pi / crystal.L_x
        dky = self.dky if self.dky is not None else math.pi / crystal.L_y
        return PlaneWaveGrid(dkx, dky, self.nx, self.ny, parities=self.parities)


@dataclass(frozen=True)
class RunConfig:
    crystal: CrystalConfig
    pump: PumpBeam
    grid: GridConfig = field(default_factory=GridConfig)
    output_path: str | None = None
    output_format: str = "csv"
    seed: int = 0
    mode_phases: dict | None = None


def _section(raw: dict, name: str, allowed: set, required: bool = True) -> dict:
    if name not in raw:
        if required:
            raise ConfigError(f"{name}: section missing")
        return {}
    value = raw[name]
    if not isinstance(value, dict):
        raise ConfigError(f"{name}: expected an object, got {type(value).__name__}")
    unknown = sorted(set(value) - allowed)
    if unknown:
        raise ConfigError(f"{name}.{unknown[0]}: unknown field")
    return value


def _number(section: dict, where: str, key: str, default=None, *, positive=False) -> float:
    if key not in section:
        if default is None:
            raise ConfigError(f"{where}.{key}: required field missing")
        return default
    value = section[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise ConfigError(f"{where}.{key}: expected a finite number, got {value!r}")
    if positive and value <= 0:
        raise ConfigError(f"{where}.{key}: must be > 0, got {value!r}")
    return float(value)


def _integer(section: dict, where: str, key: str, default: int, minimum: int) -> int:
    value = section.get(key, default)
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{where}.{key}: expected an integer, got {value!r}")
    if value < minimum:
        raise ConfigError(f"{where}.{key}: must be >= {minimum}, got {value!r}")
    return value


def _crystal(raw: dict) -> CrystalConfig:
    sec = _section(raw, "crystal", CRYSTAL_FIELDS)
    try:
        return CrystalConfig(
            L_x=_number(sec, "crystal", "L_x_mm", positive=True) * 1e-3,
            L_y=_number(sec, "crystal", "L_y_mm", positive=True) * 1e-3,
            L_z=_number(sec, "crystal", "L_z_mm", positive=True) * 1e-3,
            n_o=_number(sec, "crystal", "n_o", positive=True),
            n_e_principal=_number(sec, "crystal", "n_e", positive=True),
            theta=math.radians(_number(sec, "crystal", "theta_deg")),
            chi_eff=_number(sec, "crystal", "chi_eff", 1.0),
            pump_index=_number(sec, "crystal", "pump_index", 1.0, positive=True),
        )
    except ValueError as exc:
        raise ConfigError(f"crystal: {exc}") from None


def _pump(raw: dict, crystal: CrystalConfig) -> PumpBeam:
    sec = _section(raw, "pump", PUMP_FIELDS)
    kind = sec.get("kind", "plane")
    if kind not in ("plane", "gaussian"):
        raise ConfigError(f"pump.kind: expected 'plane' or 'gaussian', got {kind!r}")
    given = [k for k in ("wavelength_nm", "k_p_per_m") if k in sec]
    if len(given) != 1:
        raise ConfigError("pump: exactly one of wavelength_nm / k_p_per_m is required")
    if given[0] == "wavelength_nm":
        lam = _number(sec, "pump", "wavelength_nm", positive=True) * 1e-9
        omega_p = 2 * math.pi * SPEED_OF_LIGHT / lam
        k_p = crystal.pump_index * omega_p / SPEED_OF_LIGHT
    else:
        # in-crystal pump wave number; the frequency follows from pump_index
        k_p = _number(sec, "pump", "k_p_per_m", positive=True)
        omega_p = k_p * SPEED_OF_LIGHT / crystal.pump_index
    sigma = None
    if kind == "gaussian":
        sigma = _number(sec, "pump", "sigma_per_m", positive=True)
    elif "sigma_per_m" in sec:
        raise ConfigError("pump.sigma_per_m: only valid for a gaussian pump")
    return PumpBeam(kind, omega_p, k_p, sigma)


def _grid(raw: dict) -> GridConfig:
    sec = _section(raw, "grid", GRID_FIELDS, required=False)
    parities = sec.get("parities", ["even"])
    if not isinstance(parities, list) or not parities or any(p not in ("even", "odd") for p in parities):
        raise ConfigError(f"grid.parities: expected a list of 'even'/'odd', got {parities!r}")
    return GridConfig(
        steps=_integer(sec, "grid", "steps", 37, 2),
        offset_steps=_integer(sec, "grid", "offset_steps", 33, 1),
        offset_span=_number(sec, "grid", "offset_span", 4.0, positive=True),
        nx=_integer(sec, "grid", "nx", 1, 1),
        ny=_integer(sec, "grid", "ny", 0, 0),
        dkx=_number(sec, "grid", "dkx_per_m", positive=True) if "dkx_per_m" in sec else None,
        dky=_number(sec, "grid", "dky_per_m", positive=True) if "dky_per_m" in sec else None,
        parities=tuple(parities),
    )


def _mode_phases(raw: dict):
    phases = raw.get("mode_phases")
    if phases is None:
        return None
    if not isinstance(phases, dict) or set(phases) - {"even", "odd"}:
        raise ConfigError("mode_phases: expected an object with keys 'even' and/or 'odd'")
    out = {}
    for parity, values in phases.items():
        if (
            not isinstance(values, list)
            or len(values) != 4
            or any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in values)
        ):
            raise ConfigError(f"mode_phases.{parity}: expected four numbers in radians")
        out[parity] = tuple(float(v) for v in values)
    return out


def parse_config(raw: dict) -> RunConfig:
    """Validate a decoded JSON document and convert it to SI units."""
    if not isinstance(raw, dict):
        raise ConfigError("top level: expected a JSON object")
    unknown = sorted(set(raw) - SECTIONS)
    if unknown:
        raise ConfigError(f"{unknown[0]}: unknown top-level field")
    crystal = _crystal(raw)
    output = _section(raw, "output", OUTPUT_FIELDS, required=False)
    fmt = output.get("format", "csv")
    if fmt not in ("csv", "json"):
        raise ConfigError(f"output.format: expected 'csv' or 'json', got {fmt!r}")
    path = output.get("path")
    if path is not None and not isinstance(path, str):
        raise ConfigError(f"output.path: expected a string, got {path!r}")
    seed = raw.get("seed", 0)
    if isinstance(seed, bool) or not isinstance(seed, int) or seed < 0:
        raise ConfigError(f"seed: expected a non-negative integer, got {seed!r}")
    return RunConfig(
        crystal=crystal,
        pump=_pump(raw, crystal),
        grid=_grid(raw),
        output_path=path,
        output_format=fmt,
        seed=seed,
        mode_phases=_mode_phases(raw),
    )


def loads_config(text: str) -> RunConfig:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return parse_config(raw)


def load_config(path) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    return loads_config(text)

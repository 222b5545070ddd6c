import json
import math

import pytest

from finitespdc.config import load_config, loads_config, parse_config
from finitespdc.errors import ConfigError

BASE = {
    "crystal": {"L_x_mm": 0.81, "L_y_mm": 0.81, "L_z_mm": 0.81, "n_o": 1.66, "n_e": 1.55, "theta_deg": 40.0, "pump_index": 1.62},
    "pump": {"wavelength_nm": 405.0},
}


def with_changes(**sections):
    raw = json.loads(json.dumps(BASE))
    for name, value in sections.items():
        if value is None:
            raw.pop(name, None)
        elif isinstance(value, dict) and isinstance(raw.get(name), dict):
            raw[name].update(value)
        else:
            raw[name] = value
    return raw


def test_units_converted():
    cfg = parse_config(BASE)
    assert cfg.crystal.L_x == pytest.approx(0.81e-3)
    assert cfg.crystal.theta == pytest.approx(math.radians(40.0))
    assert cfg.pump.k_p == pytest.approx(1.62 * 2 * math.pi / 405e-9)
    assert cfg.grid.steps == 37 and cfg.seed == 0


def test_k_p_alternative():
    raw = with_changes(pump={"k_p_per_m": 2.5e7})
    raw["pump"].pop("wavelength_nm")
    cfg = parse_config(raw)
    assert cfg.pump.k_p == 2.5e7
    assert cfg.pump.omega_p * 1.62 / 299792458.0 == pytest.approx(2.5e7)


@pytest.mark.parametrize(
    "raw,field",
    [
        (with_changes(pump={"k_p_per_m": 1e7}), "pump"),
        (with_changes(pump={"wavelength_nm": -1}), "pump.wavelength_nm"),
        (with_changes(grid={"steps": 1}), "grid.steps"),
        (with_changes(crystal={"theta_deg": 0.0}), "crystal"),
        (with_changes(crystal={"n_o": "1.6"}), "crystal.n_o"),
        (with_changes(crystal={"L_x": 1.0}), "crystal.L_x"),
        (with_changes(pump=None), "pump"),
        (with_changes(pump={"kind": "gaussian"}), "pump.sigma_per_m"),
        (with_changes(pump={"sigma_per_m": 5.0}), "pump.sigma_per_m"),
        (with_changes(seed=-1), "seed"),
        (with_changes(output={"format": "xml"}), "output.format"),
        (with_changes(mode_phases={"even": [0, 0]}), "mode_phases.even"),
        (with_changes(extra=1), "extra"),
    ],
)
def test_field_diagnostics(raw, field):
    with pytest.raises(ConfigError, match=field.replace(".", r"\.")):
        parse_config(raw)


def test_json_line_and_column():
    with pytest.raises(ConfigError, match="line 3, column"):
        loads_config('{\n "crystal": {},\n oops\n}')


def test_mode_phases_and_grid(tmp_path):
    raw = with_changes(mode_phases={"odd": [0, 3.14159, 0, 3.14159]}, grid={"nx": 2, "parities": ["even", "odd"]})
    path = tmp_path / "c.json"
    path.write_text(json.dumps(raw))
    cfg = load_config(path)
    assert cfg.mode_phases["odd"][1] == pytest.approx(3.14159)
    grid = cfg.grid.plane_wave_grid(cfg.crystal)
    assert grid.dkx == pytest.approx(math.pi / 0.81e-3)
    assert grid.parities == ("even", "odd")


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError, match="cannot read"):
        load_config(tmp_path / "absent.json")

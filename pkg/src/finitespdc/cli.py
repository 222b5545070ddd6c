"""Command-line front end.

Exit codes: 0 success, 1 configuration or usage error, 2 physics-domain
failure (no phase match, evanescent mode), 3 oracle check above tolerance.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from .config import RunConfig, load_config
from .correlation import (
    MODES,
    CorrelationOracle,
    chsh_parameter,
    closed_vs_oracle,
    coincidence_closed,
    fit_sin2,
    format_float,
    gamma_offset,
    same_beam_closed,
    scan,
    write_text_atomic,
)
from .crystal import slope_coefficients
from .errors import ConfigError, DomainError, PhysicsDomainError, SPDCError
from .field import VARIANTS
from .phasematch import degenerate_mismatch, solve_degenerate_kyd
from .state import build_degenerate_pair_state, build_state_gaussian, build_state_planewave

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_PHYSICS = 2
EXIT_CHECK_FAILED = 3
DEFAULT_SETTINGS = (0.0, math.pi / 4, math.pi / 8, 3 * math.pi / 8)
ORACLE_TOLERANCE = 1e-9


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on usage errors; here 2 is reserved for physics."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_state(config: RunConfig):
    """Solve the phase match and build the state the config's pump implies."""
    pump = config.pump
    if pump.kind == "gaussian":
        geometry = solve_degenerate_kyd(pump.omega_p, config.crystal)
        return build_state_gaussian(pump, geometry, config.crystal, config.grid.offset_grid())
    if config.grid.single_label:
        # the lone degenerate pair; also covers collinear emission, k_yd = 0
        return build_degenerate_pair_state(solve_degenerate_kyd(pump.omega_p, config.crystal))
    grid = config.grid.plane_wave_grid(config.crystal)
    return build_state_planewave(pump, config.crystal, grid, config.mode_phases)


def _emit(text: str, path) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        write_text_atomic(path, text)


def _report(rows) -> str:
    width = max(len(k) for k, _ in rows)
    lines = []
    for key, value in rows:
        if isinstance(value, float):
            value = format_float(value)
        lines.append(f"{key:<{width}} = {value}")
    return "\n".join(lines) + "\n"


def cmd_phasematch(config: RunConfig, args) -> int:
    crystal, pump = config.crystal, config.pump
    geometry = solve_degenerate_kyd(pump.omega_p, crystal)
    slopes = slope_coefficients(geometry.k_yd, geometry.omega_s, crystal)
    residual = abs(degenerate_mismatch(geometry.k_yd, geometry.omega_s, crystal) - geometry.k_p)
    try:
        derived, formula = gamma_offset(geometry, crystal)
    except DomainError:
        derived, formula = 2.0 * math.atan(geometry.epsilon), "undefined"
    rows = [
        ("k_p", geometry.k_p),
        ("k_0", geometry.k0),
        ("k_yd", geometry.k_yd),
        ("k_yd_over_k0", geometry.k_yd / geometry.k0),
        ("epsilon", geometry.epsilon),
        ("gamma_derived", derived),
        ("gamma_formula", formula),
        ("a_ox", slopes.a_ox),
        ("a_ex", slopes.a_ex),
        ("a_oy", slopes.a_oy),
        ("a_ey", slopes.a_ey),
        ("residual", residual),
        ("residual_over_k_p", residual / geometry.k_p),
    ]
    _emit(_report(rows), args.out)
    return EXIT_OK


def cmd_state(config: RunConfig, args) -> int:
    state = build_state(config)
    _emit(state.dumps() + "\n", args.out or config.output_path)
    return EXIT_OK


def cmd_correlate(config: RunConfig, args) -> int:
    state = build_state(config)
    steps = args.steps or config.grid.steps
    if steps < 2:
        raise ConfigError("--steps must be >= 2")
    result = scan(state, args.mode, args.variant, steps)
    out = args.out or config.output_path or f"{args.mode}_{args.variant}.csv"
    if config.output_format == "json":
        write_text_atomic(out, result.dumps() + "\n")
    else:
        result.write_csv(out)
    fit = fit_sin2(result.combined_angle(), result.oracle)
    _, max_rel = closed_vs_oracle(result.closed, result.oracle)
    sys.stdout.write(
        _report(
            [
                ("mode", args.mode),
                ("variant", args.variant),
                ("points", len(result.oracle)),
                ("fit_amplitude", fit.amplitude),
                ("fit_offset", fit.offset),
                ("fit_r_squared", fit.r_squared),
                ("closed_vs_oracle_max_rel", max_rel),
                ("output", out),
            ]
        )
    )
    return EXIT_OK


def oracle_check_report(config: RunConfig, samples: int, seed: int, tolerance=ORACLE_TOLERANCE):
    """Random-angle closed-vs-oracle comparison plus the two known discrepancies.

    Returns (report text, passed).
    """
    if samples < 1:
        raise ConfigError("--samples must be >= 1")
    state = build_state(config)
    geometry = state.geometry
    eps = geometry.epsilon
    rng = np.random.default_rng(seed)
    a1, a2 = rng.uniform(0.0, math.pi, size=(2, samples))
    rows = [
        ("seed", seed),
        ("samples", samples),
        ("pump", config.pump.kind),
        ("pairs", len(state.pairs)),
        ("epsilon", eps),
    ]
    worst = 0.0
    for mode, closed_fn in zip(MODES, (coincidence_closed, same_beam_closed)):
        oracle = CorrelationOracle(state, mode)
        values = np.array([oracle(x, y) for x, y in zip(a1, a2)])
        _, max_rel = closed_vs_oracle(closed_fn(a1, a2, eps), values)
        worst = max(worst, max_rel)
        rows.append((f"{mode}_max_rel_error", max_rel))

    # coincidence prefactor: expanded bracket vs the single (1 + eps^2) factor
    test = np.array([0.3, 0.7])
    measured = float(coincidence_closed(test[0], test[1], eps) / math.sin(test.sum()) ** 2)
    single = 1.0 + eps * eps
    rows += [
        ("prefactor_measured", measured),
        ("prefactor_expanded", single * single),
        ("prefactor_single", single),
        ("prefactor_discrepancy", measured - single),
    ]
    try:
        derived, formula = gamma_offset(geometry, config.crystal)
        rows += [
            ("gamma_derived", derived),
            ("gamma_formula", formula),
            ("gamma_discrepancy", formula - derived),
        ]
    except DomainError:
        rows += [("gamma_derived", 2.0 * math.atan(eps)), ("gamma_formula", "undefined")]
    passed = worst < tolerance
    rows += [
        ("max_rel_error", worst),
        ("tolerance", float(tolerance)),
        ("status", "PASS" if passed else "FAIL"),
    ]
    return _report(rows), passed


def cmd_oracle_check(config: RunConfig, args) -> int:
    seed = config.seed if args.seed is None else args.seed
    text, passed = oracle_check_report(config, args.samples, seed, args.tolerance)
    _emit(text, args.out)
    return EXIT_OK if passed else EXIT_CHECK_FAILED


def parse_settings(text: str) -> tuple[float, ...]:
    parts = text.split(",")
    if len(parts) != 4:
        raise ConfigError(f"--settings needs four comma-separated angles, got {text!r}")
    try:
        values = tuple(float(p) for p in parts)
    except ValueError:
        raise ConfigError(f"--settings must be numbers in radians, got {text!r}") from None
    if not all(math.isfinite(v) for v in values):
        raise ConfigError("--settings must be finite")
    return values


def cmd_chsh(config: RunConfig, args) -> int:
    settings = parse_settings(args.settings) if args.settings else DEFAULT_SETTINGS
    state = build_state(config)
    s = chsh_parameter(state, settings, args.variant)
    rows = [
        ("variant", args.variant),
        ("settings", ",".join(format_float(v) for v in settings)),
        ("S", s),
        ("abs_S", abs(s)),
        ("tsirelson_bound", 2.0 * math.sqrt(2.0)),
    ]
    _emit(_report(rows), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="finitespdc", description="Finite-crystal type-II SPDC polarization simulator.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="JSON run configuration")
        p.add_argument("--out", help="output file (stdout for reports when omitted)")
        p.set_defaults(func=func)
        return p

    add("phasematch", cmd_phasematch, "solve the degenerate phase-match condition")
    add("state", cmd_state, "dump the two-photon state as JSON records")

    p = add("correlate", cmd_correlate, "scan analyzer angles and write a CSV")
    p.add_argument("--mode", choices=MODES, default="coincidence")
    p.add_argument("--variant", choices=VARIANTS, default="none")
    p.add_argument("--steps", type=int, help="angles per axis (default: config grid.steps)")

    p = add("oracle-check", cmd_oracle_check, "compare closed forms with the Fock oracle")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, help="overrides the config seed")
    p.add_argument("--tolerance", type=float, default=ORACLE_TOLERANCE)

    p = add("chsh", cmd_chsh, "evaluate the CHSH parameter")
    p.add_argument("--settings", help="a,a',b,b' in radians")
    p.add_argument("--variant", choices=VARIANTS, default="pi_phase")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = load_config(args.config)
        return args.func(config, args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except PhysicsDomainError as exc:
        print(f"physics error: {exc}", file=sys.stderr)
        return EXIT_PHYSICS
    except SPDCError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PHYSICS

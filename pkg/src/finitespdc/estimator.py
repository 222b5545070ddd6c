"""scikit-learn style facade over the correlation pipeline.

``fit`` solves the phase match and builds the two-photon state; ``predict``
maps rows of analyzer angles (angle1, angle2) to oracle detection
probabilities.  There is nothing to learn from data, so ``fit`` ignores X
apart from validating it.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.constants import c as SPEED_OF_LIGHT
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from .correlation import MODES, CorrelationOracle, coincidence_closed, same_beam_closed, variant_angle
from .crystal import CrystalConfig
from .field import VARIANTS
from .phasematch import solve_degenerate_kyd
from .state import OffsetGrid, PumpBeam, build_degenerate_pair_state, build_state_gaussian


class CorrelationEstimator(BaseEstimator):
    """Polarization correlations of a degenerate type-II source.

    Parameters mirror the run configuration in SI units: lengths in metres,
    ``theta`` in radians, ``signal_wavelength`` in metres (the pump runs at
    twice the signal frequency).  ``sigma=None`` selects the single
    degenerate pair; a positive ``sigma`` (rad/m) builds the Gaussian-pump
    state.
    """

    def __init__(
        self,
        L=1e-3,
        n_o=1.66,
        n_e=1.55,
        theta=0.7,
        pump_index=1.62,
        signal_wavelength=810e-9,
        sigma=None,
        mode="coincidence",
        variant="none",
        offset_steps=9,
    ):
        self.L = L
        self.n_o = n_o
        self.n_e = n_e
        self.theta = theta
        self.pump_index = pump_index
        self.signal_wavelength = signal_wavelength
        self.sigma = sigma
        self.mode = mode
        self.variant = variant
        self.offset_steps = offset_steps

    def _validate_params(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}, got {self.variant!r}")
        if not self.signal_wavelength > 0:
            raise ValueError("signal_wavelength must be positive")

    def fit(self, X=None, y=None):
        self._validate_params()
        if X is not None:
            check_array(X, ensure_min_features=2)
        crystal = CrystalConfig(
            self.L, self.L, self.L, self.n_o, self.n_e, self.theta, pump_index=self.pump_index
        )
        omega_p = 4.0 * math.pi * SPEED_OF_LIGHT / self.signal_wavelength
        geometry = solve_degenerate_kyd(omega_p, crystal)
        if self.sigma is None:
            state = build_degenerate_pair_state(geometry)
        else:
            pump = PumpBeam.for_crystal(omega_p, crystal, "gaussian", self.sigma)
            state = build_state_gaussian(pump, geometry, crystal, OffsetGrid(self.offset_steps))
        self.crystal_ = crystal
        self.geometry_ = geometry
        self.state_ = state
        self.epsilon_ = geometry.epsilon
        self.oracle_ = CorrelationOracle(state, self.mode, self.variant)
        self.n_features_in_ = 2
        return self

    def _angles(self, X):
        check_is_fitted(self, "oracle_")
        X = check_array(X, dtype=float)
        if X.shape[1] != 2:
            raise ValueError(f"X must have 2 columns (angle1, angle2), got {X.shape[1]}")
        return X

    def predict(self, X):
        """Oracle detection probability for each (angle1, angle2) row."""
        X = self._angles(X)
        return np.array([self.oracle_(a, b) for a, b in X])

    def predict_closed(self, X):
        """Closed-form values at the same rows, up to the overall constant."""
        X = self._angles(X)
        a1 = variant_angle(self.variant, X[:, 0])
        if self.mode == "coincidence":
            return coincidence_closed(a1, X[:, 1], self.epsilon_)
        return same_beam_closed(a1, variant_angle(self.variant, X[:, 1]), self.epsilon_)

import math

import pytest
from scipy.constants import c

from finitespdc.crystal import CrystalConfig
from finitespdc.phasematch import solve_degenerate_kyd
from finitespdc.state import build_degenerate_pair_state

LAMBDA_S = 810e-9
OMEGA_S = 2 * math.pi * c / LAMBDA_S
K0 = OMEGA_S / c
BOX = 1000 * LAMBDA_S


def make_crystal(n_o=1.66, n_e=1.55, theta=0.7, pump_index=1.62, L=BOX, **kw):
    return CrystalConfig(L, L, L, n_o, n_e, theta, pump_index=pump_index, **kw)


@pytest.fixture(scope="session")
def crystal():
    return make_crystal()


@pytest.fixture(scope="session")
def geometry(crystal):
    return solve_degenerate_kyd(2 * OMEGA_S, crystal)


@pytest.fixture(scope="session")
def pair_state(geometry):
    return build_degenerate_pair_state(geometry)


@pytest.fixture(scope="session")
def flat_state():
    """Degenerate pair in an isotropic crystal: k_yd = 0, so epsilon = 0."""
    iso = make_crystal(n_o=1.5, n_e=1.5, pump_index=1.5)
    return build_degenerate_pair_state(solve_degenerate_kyd(2 * OMEGA_S, iso))

import logging

import pytest
from hypothesis import settings

from weldtherm.core import DECOUPLING_N_SOFT, MaterialProps, ProcessParams

settings.register_profile("weldtherm", deadline=None, max_examples=40)
settings.load_profile("weldtherm")

RHO, CP = 4420.0, 560.0
ANCHOR_D = 4.52e-6
ANCHOR_K = ANCHOR_D * RHO * CP


@pytest.fixture(autouse=True)
def _quiet_handoff(caplog):
    # moderate-T_a test materials cross the hand-off threshold immediately
    caplog.set_level(logging.ERROR, logger="weldtherm.soft")


@pytest.fixture
def anchor_material():
    return MaterialProps(RHO, CP, ANCHOR_K, 1e8, 1350.0, 5000.0)


@pytest.fixture
def anchor_process():
    return ProcessParams(5e7, 0.01, 1.0, 0.018, 300.0, M=28.024)


@pytest.fixture
def ti_material():
    """Titanium-like set used where M is derived rather than imposed."""
    return MaterialProps(RHO, CP, 7.0, 2.0e6, 1900.0, 20000.0)


@pytest.fixture
def moderate_soft():
    """Soft test material with T_a / T_e = 15."""
    m = MaterialProps(RHO, CP, ANCHOR_K, 1e5, 1350.0, 4500.0)
    p = ProcessParams(5e7, 0.01, 1.0, 0.005, 300.0, model="soft", N_mode="decoupling_constant")
    return m, p, DECOUPLING_N_SOFT


@pytest.fixture
def stiff_soft():
    """Soft material with a large activation temperature, T_a / T_inf near 18."""
    m = MaterialProps(RHO, CP, ANCHOR_K, 1e5, 1350.0, 20000.0)
    p = ProcessParams(5e7, 0.01, 1.0, 0.008, 300.0, model="soft", N_mode="decoupling_constant")
    return m, p, DECOUPLING_N_SOFT

import numpy as np
import pytest

from qlimit.interferometer import InterferometerParams, assemble_detector


@pytest.fixture(scope="session")
def tuned():
    return assemble_detector(InterferometerParams.fig3(0.0))


@pytest.fixture(scope="session")
def detuned():
    return assemble_detector(InterferometerParams.fig3(400.0))


@pytest.fixture(scope="session")
def omega_grid():
    return 2 * np.pi * np.geomspace(10.0, 1e4, 600)

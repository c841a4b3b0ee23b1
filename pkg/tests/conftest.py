import numpy as np
import pytest

from sea_passivity import ControllerGains, PlantParams, RenderTarget

ACCEPTANCE_LINES = []


@pytest.fixture
def ref_plant():
    return PlantParams(J=0.2, b=3.0, K=250.0)


@pytest.fixture
def null_gains():
    return ControllerGains(Pm=20.0, Im=10.0, Pt=5.0, It=5.0)


@pytest.fixture
def spring_gains():
    return ControllerGains(Pm=20.0, Im=100.0, Pt=30.0, It=5.0)


@pytest.fixture
def spring50():
    return RenderTarget.spring(50.0)


def log_uniform(rng, lo, hi, size=None):
    return np.exp(rng.uniform(np.log(lo), np.log(hi), size))


def random_config(rng, lo=1e-2, hi=1e3):
    plant = PlantParams(*(float(v) for v in log_uniform(rng, lo, hi, 3)))
    gains = ControllerGains(*(float(v) for v in log_uniform(rng, lo, hi, 4)))
    return plant, gains


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

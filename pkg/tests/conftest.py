import numpy as np
import pytest

from src.app.forward.schema.forward import WaveContext
from src.app.geometry.schema.geometry import ArcSample
from src.app.geometry.service.geometry import make_curve_arc, make_line_arc
from src.app.msr.service.msr import make_directions


@pytest.fixture
def ctx():
    return WaveContext.from_wavelength(0.4)


@pytest.fixture
def line_arc():
    return make_line_arc()


@pytest.fixture
def curve_arc():
    return make_curve_arc()


@pytest.fixture
def dirs20():
    return make_directions(20)


@pytest.fixture
def dirs64():
    return make_directions(64)


@pytest.fixture
def single_point():
    return ArcSample(points=np.array([[0.0, 0.0]]), normals=np.array([[0.0, 1.0]]), label="point")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)

import math

import numpy as np
import pytest
from scipy import optimize

from src.app.geometry.schema.geometry import Arc, ArcSample, BuiltinArcSpec, CoordinateSeries, ParametricArcSpec
from src.app.geometry.service import geometry as geometry_service
from src.app.geometry.service.geometry import (
    ARC_CACHE_SIZE,
    arc_from_spec,
    arc_length,
    distance_to_arc,
    parameter_at_length,
    polyline,
    sample_arc,
    validate_arc,
)
from src.core.exceptions import ConfigurationError, PreconditionError


def gauss_legendre_length(arc: Arc, nodes: int) -> float:
    s, w = np.polynomial.legendre.leggauss(nodes)
    return float(np.sum(w * arc.speed(s)))


def test_line_arc_geometry(line_arc):
    np.testing.assert_allclose(line_arc(0.0)[0], [0.0, 0.3])
    np.testing.assert_allclose(line_arc([-1.0, 1.0]), [[-0.5, 0.3], [0.5, 0.3]])
    np.testing.assert_allclose(line_arc.normal([-0.7, 0.2]), [[0.0, 1.0], [0.0, 1.0]])
    assert abs(arc_length(line_arc) - 1.0) < 1e-12


def test_curve_arc_geometry(curve_arc):
    np.testing.assert_allclose(curve_arc(0.0)[0], [0.0, 0.4], atol=1e-15)
    np.testing.assert_allclose(curve_arc(1.0)[0], [1.0, 0.2], atol=1e-15)
    normals = curve_arc.normal(np.linspace(-1, 1, 11))
    np.testing.assert_allclose(np.linalg.norm(normals, axis=-1), 1.0)
    assert np.ptp(normals[:, 0]) > 0.1


def test_curve_length_against_dense_polyline(curve_arc):
    points = polyline(curve_arc, 200_001)
    dense = np.sum(np.linalg.norm(np.diff(points, axis=0), axis=-1))
    assert abs(arc_length(curve_arc) - dense) / dense < 1e-6


def test_length_is_resolved(curve_arc):
    assert abs(gauss_legendre_length(curve_arc, 400) - arc_length(curve_arc)) < 1e-8
    assert abs(gauss_legendre_length(curve_arc, 200) - gauss_legendre_length(curve_arc, 400)) < 1e-8


def test_parameter_at_length(curve_arc):
    total = arc_length(curve_arc)
    assert parameter_at_length(curve_arc, 0.0) == pytest.approx(-1.0, abs=1e-12)
    assert parameter_at_length(curve_arc, total) == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(PreconditionError):
        parameter_at_length(curve_arc, total * 1.01)


def test_line_sample_midpoints(line_arc, ctx):
    sample = sample_arc(line_arc, ctx.wavelength)
    assert sample.count == 5
    np.testing.assert_allclose(sample.points[:, 0], [-0.4, -0.2, 0.0, 0.2, 0.4], atol=1e-10)
    np.testing.assert_allclose(sample.points[:, 1], 0.3)
    np.testing.assert_allclose(sample.normals, np.tile([0.0, 1.0], (5, 1)), atol=1e-12)

    spacing = np.linalg.norm(np.diff(sample.points, axis=0), axis=-1)
    assert np.all(np.abs(spacing - ctx.wavelength / 2) <= 0.1 * ctx.wavelength / 2)


def test_curve_sample_count_and_spacing(curve_arc):
    wavelength = 0.5
    sample = sample_arc(curve_arc, wavelength)
    assert sample.count == math.ceil(arc_length(curve_arc) / (wavelength / 2))

    spacing = np.linalg.norm(np.diff(sample.points, axis=0), axis=-1)
    assert np.all(spacing <= wavelength / 2 + 1e-12)


def test_sample_points_lie_on_arc(curve_arc):
    sample = sample_arc(curve_arc, 0.4)
    grid = np.linspace(-1.0, 1.0, 20_001)
    dense = curve_arc(grid)
    for point in sample.points:
        s0 = grid[np.argmin(np.linalg.norm(dense - point, axis=-1))]
        result = optimize.minimize_scalar(
            lambda s, p=point: float(np.sum((curve_arc(s)[0] - p) ** 2)),
            bounds=(max(-1.0, s0 - 1e-3), min(1.0, s0 + 1e-3)),
            method="bounded",
            options={"xatol": 1e-12},
        )
        assert math.sqrt(result.fun) < 1e-8


@pytest.mark.parametrize("wavelength", [0.0, -0.1, 1.5])
def test_sample_preconditions(line_arc, wavelength):
    with pytest.raises(PreconditionError):
        sample_arc(line_arc, wavelength)


def test_rejects_cusp():
    # stalls on |s| <= 0.1
    cusp = Arc(
        label="cusp",
        position=lambda s: np.stack([np.sign(s) * np.maximum(np.abs(s) - 0.1, 0.0), np.zeros_like(s)], axis=-1),
        derivative=lambda s: np.stack([np.where(np.abs(s) > 0.1, 1.0, 0.0), np.zeros_like(s)], axis=-1),
    )
    with pytest.raises(ConfigurationError, match="cusp"):
        validate_arc(cusp)


def test_rejects_self_intersection():
    loop = Arc(
        label="loop",
        position=lambda s: np.stack([np.cos(2 * np.pi * s), np.sin(2 * np.pi * s)], axis=-1),
        derivative=lambda s: np.stack([-2 * np.pi * np.sin(2 * np.pi * s), 2 * np.pi * np.cos(2 * np.pi * s)], axis=-1),
    )
    with pytest.raises(ConfigurationError, match="injective"):
        validate_arc(loop)


def test_parametric_spec_reproduces_line(line_arc):
    spec = ParametricArcSpec(x=CoordinateSeries(polynomial=[0.0, 0.5]), y=CoordinateSeries(polynomial=[0.3]))
    arc = arc_from_spec(spec)
    s = np.linspace(-1, 1, 7)
    np.testing.assert_allclose(arc(s), line_arc(s))
    np.testing.assert_allclose(arc.normal(s), line_arc.normal(s))


def test_parametric_spec_reproduces_curve(curve_arc):
    spec = ParametricArcSpec(
        x=CoordinateSeries(polynomial=[0.0, 1.0]),
        y=CoordinateSeries(cosine=[0.5, 0.0, -0.1], sine=[0.2]),
    )
    arc = arc_from_spec(spec)
    s = np.linspace(-1, 1, 9)
    np.testing.assert_allclose(arc(s), curve_arc(s), atol=1e-14)
    np.testing.assert_allclose(arc.speed(s), curve_arc.speed(s), atol=1e-13)


def test_builtin_spec():
    assert arc_from_spec(BuiltinArcSpec(name="curve")).label == "curve"


def test_distance_to_arc(line_arc):
    distance = distance_to_arc([[0.0, 0.5], [0.0, 0.3], [0.8, 0.3]], line_arc)
    np.testing.assert_allclose(distance, [0.2, 0.0, 0.3], atol=1e-9)
    assert distance_to_arc(np.zeros((3, 4, 2)), line_arc).shape == (3, 4)


def test_sample_normalizes_normals():
    sample = ArcSample(points=[[0.0, 0.0]], normals=[[0.0, 3.0]])
    np.testing.assert_allclose(sample.normals, [[0.0, 1.0]])
    with pytest.raises(ValueError):
        ArcSample(points=[[0.0, 0.0], [1.0, 0.0]], normals=[[0.0, 1.0]])


def test_length_and_distance_caches_are_bounded():
    spec = ParametricArcSpec(x=CoordinateSeries(polynomial=[0.0, 0.5]), y=CoordinateSeries(polynomial=[0.3]))
    for _ in range(2 * ARC_CACHE_SIZE):
        arc = arc_from_spec(spec)
        assert arc_length(arc) == pytest.approx(1.0)
        assert distance_to_arc([[0.0, 0.0]], arc)[0] == pytest.approx(0.3)
    assert geometry_service._cached_length.cache_info().currsize <= ARC_CACHE_SIZE
    assert geometry_service._arc_tree.cache_info().currsize <= ARC_CACHE_SIZE

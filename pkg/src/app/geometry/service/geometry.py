import logging
import math
from functools import lru_cache

import numpy as np
from numpy.polynomial import Polynomial
from numpy.typing import ArrayLike, NDArray
from scipy import integrate, optimize
from scipy.spatial import KDTree
from scipy.spatial.distance import pdist

from src.app.geometry.schema.geometry import (
    Arc,
    ArcSample,
    ArcSpec,
    BuiltinArcSpec,
    CoordinateSeries,
    ParametricArcSpec,
)
from src.core.config import settings
from src.core.exceptions import ConfigurationError, PreconditionError

logger = logging.getLogger(__name__)

# keyed by identity, and arcs built from a config are new objects on every call
ARC_CACHE_SIZE = 16


def validate_arc(arc: Arc) -> Arc:
    """Reject arcs with a cusp or a self-intersection on a dense parameter grid."""
    s = np.linspace(-1.0, 1.0, settings.numerics.injectivity_samples)

    speed = arc.speed(s)
    if not np.all(np.isfinite(speed)) or np.min(speed) <= 0:
        raise ConfigurationError(f"Arc '{arc.label}' has a cusp: |gamma'(s)| vanishes on [-1, 1]")

    points = arc(s)
    if not np.all(np.isfinite(points)):
        raise ConfigurationError(f"Arc '{arc.label}' has non-finite points")
    if np.min(pdist(points)) <= 1e-12:
        raise ConfigurationError(f"Arc '{arc.label}' is not injective on [-1, 1]")

    return arc


def make_line_arc() -> Arc:
    """{[s, 0.3] : -0.5 <= s <= 0.5}, parametrized over [-1, 1]."""

    def position(s):
        return np.stack([0.5 * s, np.full_like(s, 0.3)], axis=-1)

    def derivative(s):
        return np.stack([np.full_like(s, 0.5), np.zeros_like(s)], axis=-1)

    return validate_arc(Arc(label="line", position=position, derivative=derivative))


def make_curve_arc() -> Arc:
    """{[s, 0.5 cos(pi s/2) + 0.2 sin(pi s/2) - 0.1 cos(3 pi s/2)] : -1 <= s <= 1}."""
    w = 0.5 * math.pi

    def position(s):
        y = 0.5 * np.cos(w * s) + 0.2 * np.sin(w * s) - 0.1 * np.cos(3 * w * s)
        return np.stack([s, y], axis=-1)

    def derivative(s):
        dy = -0.5 * w * np.sin(w * s) + 0.2 * w * np.cos(w * s) + 0.3 * w * np.sin(3 * w * s)
        return np.stack([np.ones_like(s), dy], axis=-1)

    return validate_arc(Arc(label="curve", position=position, derivative=derivative))


def _series(coefficients: CoordinateSeries):
    poly = Polynomial(coefficients.polynomial or [0.0])
    dpoly = poly.deriv()
    w = coefficients.frequency
    cos_terms = np.asarray(coefficients.cosine, dtype=np.float64)
    sin_terms = np.asarray(coefficients.sine, dtype=np.float64)

    def value(s):
        out = poly(s)
        for j, a in enumerate(cos_terms, start=1):
            out = out + a * np.cos(j * w * s)
        for j, b in enumerate(sin_terms, start=1):
            out = out + b * np.sin(j * w * s)
        return out

    def derivative(s):
        out = dpoly(s) + np.zeros_like(s)
        for j, a in enumerate(cos_terms, start=1):
            out = out - a * j * w * np.sin(j * w * s)
        for j, b in enumerate(sin_terms, start=1):
            out = out + b * j * w * np.cos(j * w * s)
        return out

    return value, derivative


def arc_from_spec(spec: ArcSpec) -> Arc:
    match spec:
        case BuiltinArcSpec(name="line"):
            return make_line_arc()
        case BuiltinArcSpec(name="curve"):
            return make_curve_arc()
        case ParametricArcSpec():
            x, dx = _series(spec.x)
            y, dy = _series(spec.y)
            return validate_arc(
                Arc(
                    label=spec.label,
                    position=lambda s: np.stack([x(s), y(s)], axis=-1),
                    derivative=lambda s: np.stack([dx(s), dy(s)], axis=-1),
                )
            )
        case _:
            raise ConfigurationError(f"Unknown arc specification: {spec!r}")


def _partial_length(arc: Arc, lower: float, upper: float) -> float:
    tol = settings.numerics.arc_length_tolerance
    value, _ = integrate.quad(lambda s: arc.speed(s)[0], lower, upper, epsabs=tol, epsrel=tol, limit=200)
    return value


@lru_cache(maxsize=ARC_CACHE_SIZE)
def _cached_length(arc: Arc) -> float:
    return _partial_length(arc, -1.0, 1.0)


def arc_length(arc: Arc) -> float:
    """Length of the arc by adaptive Gauss-Kronrod quadrature of |gamma'(s)|."""
    return _cached_length(arc)


def parameter_at_length(arc: Arc, target: float) -> float:
    """Parameter s with arc length `target` measured from gamma(-1)."""
    total = arc_length(arc)
    if not 0 <= target <= total:
        raise PreconditionError(f"Arc length {target} outside [0, {total}]")
    return optimize.brentq(lambda s: _partial_length(arc, -1.0, s) - target, -1.0, 1.0, xtol=1e-14, rtol=1e-14)


def sample_arc(arc: Arc, wavelength: float) -> ArcSample:
    """Split the arc into M = ceil(L / (lambda/2)) equal-length segments and take their midpoints."""
    if not wavelength > 0:
        raise PreconditionError(f"Wavelength must be positive, got {wavelength}")

    length = arc_length(arc)
    if wavelength > length:
        raise PreconditionError(f"Wavelength {wavelength} exceeds the arc length {length:.6g}")

    # the relative slack keeps L = n * lambda/2 from rounding up to n + 1 segments
    count = math.ceil(length / (wavelength / 2) * (1 - 1e-12))
    targets = (np.arange(count) + 0.5) * length / count
    parameters = np.array([parameter_at_length(arc, t) for t in targets])

    logger.debug("Sampled arc '%s': L=%.6g, lambda=%.4g, M=%d", arc.label, length, wavelength, count)
    return ArcSample(
        points=arc(parameters),
        normals=arc.normal(parameters),
        parameters=parameters,
        arc_length=length,
        label=arc.label,
    )


def polyline(arc: Arc, count: int | None = None) -> NDArray[np.float64]:
    return arc(np.linspace(-1.0, 1.0, count or settings.numerics.distance_samples))


@lru_cache(maxsize=ARC_CACHE_SIZE)
def _arc_tree(arc: Arc) -> KDTree:
    return KDTree(polyline(arc))


def distance_to_arc(points: ArrayLike, arc: Arc) -> NDArray[np.float64]:
    """Euclidean distance from each point to a dense polyline of the arc."""
    points = np.asarray(points, dtype=np.float64)
    distance, _ = _arc_tree(arc).query(points.reshape(-1, 2))
    return distance.reshape(points.shape[:-1])

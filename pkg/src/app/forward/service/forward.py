import cmath
import logging
import math

import numpy as np
from numpy.typing import ArrayLike, NDArray

from src.app.forward.schema.forward import DensitySolution, SolverMode, WaveContext
from src.app.geometry.schema.geometry import ArcSample
from src.app.special_fn.service.bessel import hankel1
from src.core.exceptions import SingularKernelError

logger = logging.getLogger(__name__)


def far_field_constant(ctx: WaveContext) -> complex:
    """sqrt(k / 8 pi) * exp(-i pi / 4)."""
    return math.sqrt(ctx.k / (8 * math.pi)) * cmath.exp(-0.25j * math.pi)


def incident_field(x: ArrayLike, theta: ArrayLike, ctx: WaveContext) -> complex | NDArray[np.complex128]:
    """Plane wave exp(i k theta . x); x may carry leading batch dimensions."""
    x = np.asarray(x, dtype=np.float64)
    value = np.exp(1j * ctx.k * (x @ np.asarray(theta, dtype=np.float64)))
    return complex(value) if value.ndim == 0 else value


def fundamental_solution(x: ArrayLike, y: ArrayLike, ctx: WaveContext) -> complex | NDArray[np.complex128]:
    """Phi(x, y) = -(i/4) H0^(1)(k |x - y|)."""
    r = np.linalg.norm(np.asarray(x, dtype=np.float64) - np.asarray(y, dtype=np.float64), axis=-1)
    if np.any(r == 0):
        raise SingularKernelError("fundamental_solution: x and y coincide")
    return -0.25j * hankel1(0, ctx.k * r)


def kirchhoff_density(sample: ArcSample, theta: ArrayLike, ctx: WaveContext) -> DensitySolution:
    """Physical-optics surrogate phi(y_m) = 2 exp(i k theta . y_m) with unit weights.

    Gives the factorized MSR structure quickly; not a physically accurate density.
    """
    theta = np.asarray(theta, dtype=np.float64)
    return DensitySolution(
        incident_direction=theta,
        nodes=sample.points,
        normals=sample.normals,
        values=2.0 * np.exp(1j * ctx.k * (sample.points @ theta)),
        weights=np.ones(sample.count),
        mode=SolverMode.KIRCHHOFF,
    )


def asymptotic_density(sample: ArcSample, theta: ArrayLike, ctx: WaveContext) -> DensitySolution:
    """Small-segment density phi(y_m) = 2 (theta . nu_m) exp(i k theta . y_m) with unit weights.

    Left and right singular vectors of the resulting MSR matrix both lie in the
    span of the illumination vectors.
    """
    theta = np.asarray(theta, dtype=np.float64)
    return DensitySolution(
        incident_direction=theta,
        nodes=sample.points,
        normals=sample.normals,
        values=2.0 * (sample.normals @ theta) * np.exp(1j * ctx.k * (sample.points @ theta)),
        weights=np.ones(sample.count),
        mode=SolverMode.ASYMPTOTIC,
    )


def far_field_operator(density: DensitySolution, varthetas: ArrayLike, ctx: WaveContext) -> NDArray[np.complex128]:
    """Rows map density values at the nodes to psi_inf at each observation direction."""
    varthetas = np.atleast_2d(np.asarray(varthetas, dtype=np.float64))
    obliquity = varthetas @ density.normals.T
    phase = np.exp(-1j * ctx.k * (varthetas @ density.nodes.T))
    return -far_field_constant(ctx) * obliquity * phase * density.weights


def far_field(density: DensitySolution, vartheta: ArrayLike, ctx: WaveContext) -> complex | NDArray[np.complex128]:
    """psi_inf(vartheta, theta) from the double-layer density by quadrature over the arc."""
    single = np.ndim(vartheta) == 1
    values = far_field_operator(density, vartheta, ctx) @ density.values
    return complex(values[0]) if single else values

import logging
import math

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import ndimage
from scipy.spatial import KDTree

from src.app.forward.schema.forward import WaveContext
from src.app.geometry.schema.geometry import Arc, ArcSample
from src.app.geometry.service.geometry import distance_to_arc
from src.app.imaging.schema.imaging import (
    ContrastStats,
    FixedSchemeSpec,
    FixedXi,
    GridSpec,
    ImageGrid,
    IncidentAligned,
    IncidentSchemeSpec,
    NormalSchemeSpec,
    OracleNormal,
    SchemeSpec,
    TestVectorScheme,
)
from src.app.msr.schema.msr import DirectionSet
from src.app.spectral.schema.spectral import SvdBasis
from src.core.config import settings
from src.core.exceptions import ConfigurationError, PreconditionError
from src.core.workers.pool import parallel_map

logger = logging.getLogger(__name__)


def resolve_scheme(spec: SchemeSpec, reference: ArcSample | None = None) -> TestVectorScheme:
    match spec:
        case FixedSchemeSpec(angle=angle):
            return FixedXi.from_angle(angle)
        case IncidentSchemeSpec():
            return IncidentAligned()
        case NormalSchemeSpec():
            if reference is None:
                raise ConfigurationError("The normal-aligned scheme needs a sampled reference arc")
            return OracleNormal(reference)
        case _:
            raise ConfigurationError(f"Unknown test-vector scheme: {spec!r}")


def _direction_weights(points: NDArray[np.float64], dirs: DirectionSet, scheme: TestVectorScheme) -> NDArray:
    """theta_n . c_n, shaped to broadcast against (points, N)."""
    match scheme:
        case FixedXi(xi=xi):
            return (dirs.incident @ xi)[None, :]
        case IncidentAligned():
            return np.ones((1, dirs.count))
        case OracleNormal(reference=sample):
            _, nearest = KDTree(sample.points).query(points)
            return sample.normals[nearest] @ dirs.incident.T
        case _:
            raise ConfigurationError(f"Unknown test-vector scheme: {scheme!r}")


def test_vectors(
    points: ArrayLike, dirs: DirectionSet, ctx: WaveContext, scheme: TestVectorScheme
) -> NDArray[np.complex128]:
    """Row p is W(x_p) with W_n(x) = sqrt(2/N) (theta_n . c_n) exp(i k theta_n . x)."""
    points = np.atleast_2d(np.asarray(points, dtype=np.float64))
    weights = _direction_weights(points, dirs, scheme)
    return math.sqrt(2 / dirs.count) * weights * np.exp(1j * ctx.k * (points @ dirs.incident.T))


def test_vector(x: ArrayLike, dirs: DirectionSet, ctx: WaveContext, scheme: TestVectorScheme) -> NDArray:
    return test_vectors(x, dirs, ctx, scheme)[0]


def imaging_values(
    points: ArrayLike, basis: SvdBasis, dirs: DirectionSet, ctx: WaveContext, scheme: TestVectorScheme
) -> NDArray[np.float64]:
    """F(x) = |sum_m (W* U_m)(W* conj(V_m))| at each point."""
    w = test_vectors(points, dirs, ctx, scheme).conj()
    left = w @ basis.signal_left
    right = w @ basis.signal_right.conj()
    return np.abs(np.sum(left * right, axis=-1))


def imaging_value(
    x: ArrayLike, basis: SvdBasis, dirs: DirectionSet, ctx: WaveContext, scheme: TestVectorScheme
) -> float:
    return float(imaging_values(x, basis, dirs, ctx, scheme)[0])


def _axis(bounds: tuple[float, float], step: float) -> NDArray[np.float64]:
    lower, upper = bounds
    if upper < lower:
        raise ConfigurationError(f"Empty grid range {bounds}")
    count = int(math.floor((upper - lower) / step + 1e-9)) + 1
    return lower + step * np.arange(count)


def grid_axes(spec: GridSpec, ctx: WaveContext) -> tuple[NDArray[np.float64], NDArray[np.float64], float]:
    config = settings.imaging
    step = spec.step or config.step_fraction * ctx.wavelength

    limit = config.max_step_fraction * ctx.wavelength
    if step > limit:
        message = f"Grid step {step:.4g} is coarser than lambda/{1 / config.max_step_fraction:g} = {limit:.4g}"
        if config.strict:
            raise ConfigurationError(message)
        logger.warning(message)

    return _axis(spec.x_range or config.extent, step), _axis(spec.y_range or config.extent, step), step


def imaging_map(
    basis: SvdBasis,
    dirs: DirectionSet,
    ctx: WaveContext,
    scheme: TestVectorScheme,
    grid: GridSpec | None = None,
    label: str = "",
) -> ImageGrid:
    xs, ys, step = grid_axes(grid or GridSpec(), ctx)

    def evaluate(rows: NDArray[np.float64]) -> NDArray[np.float64]:
        gx, gy = np.meshgrid(xs, rows)
        points = np.stack([gx, gy], axis=-1).reshape(-1, 2)
        return imaging_values(points, basis, dirs, ctx, scheme).reshape(rows.size, xs.size)

    chunks = np.array_split(ys, min(ys.size, 4 * settings.workers))
    values = np.concatenate(parallel_map(evaluate, chunks), axis=0)

    logger.debug("Imaged %s on %dx%d grid (step %.4g)", label or type(scheme).__name__, ys.size, xs.size, step)
    return ImageGrid(
        xs=xs,
        ys=ys,
        step=step,
        values=values,
        scheme=label or type(scheme).__name__,
        parameters={"N": dirs.count, "lambda": ctx.wavelength, "M": basis.signal_rank},
    )


def contrast(grid: ImageGrid, arc: Arc, ctx: WaveContext) -> ContrastStats:
    """Mean of F within lambda/8 of the arc against its mean beyond lambda/2."""
    config = settings.imaging
    distance = distance_to_arc(grid.points, arc)
    on_arc = distance <= config.on_arc_fraction * ctx.wavelength
    off_arc = distance > config.off_arc_fraction * ctx.wavelength
    if not on_arc.any() or not off_arc.any():
        raise PreconditionError("Grid does not cover both on-arc and off-arc nodes")

    on_mean = float(np.mean(grid.values[on_arc]))
    off_mean = float(np.mean(grid.values[off_arc]))
    off_p95 = float(np.percentile(grid.values[off_arc], 95))
    peak = grid.argmax()

    return ContrastStats(
        on_arc_mean=on_mean,
        off_arc_mean=off_mean,
        ratio=on_mean / off_mean if off_mean > 0 else math.inf,
        off_arc_p95=off_p95,
        degenerate=on_mean <= off_p95,
        argmax=(float(peak[0]), float(peak[1])),
        argmax_distance=float(distance_to_arc(peak, arc)),
    )


def local_maxima(grid: ImageGrid, count: int) -> list[tuple[float, float, float]]:
    """Strongest `count` local maxima over 3x3 neighbourhoods, as (x, y, value)."""
    values = grid.values
    peaks = (ndimage.maximum_filter(values, size=3, mode="nearest") == values) & (values > 0)
    rows, cols = np.nonzero(peaks)
    order = np.argsort(values[rows, cols], kind="stable")[::-1][:count]
    return [(float(grid.xs[cols[i]]), float(grid.ys[rows[i]]), float(values[rows[i], cols[i]])) for i in order]

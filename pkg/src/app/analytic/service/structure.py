import logging

import numpy as np
from numpy.typing import ArrayLike, NDArray

from src.app.analytic.schema.analytic import ComparisonReport, ComparisonStats, StructureForm
from src.app.forward.schema.forward import SolverMode, WaveContext
from src.app.forward.service.forward import asymptotic_density, kirchhoff_density
from src.app.geometry.schema.geometry import Arc, ArcSample
from src.app.geometry.service.geometry import sample_arc
from src.app.imaging.schema.imaging import (
    FixedSchemeSpec,
    GridSpec,
    ImageGrid,
    IncidentSchemeSpec,
    NormalSchemeSpec,
    SchemeSpec,
)
from src.app.imaging.service.imaging import imaging_map, resolve_scheme
from src.app.msr.schema.msr import DirectionSet
from src.app.msr.service.msr import assemble_from_densities
from src.app.special_fn.service.bessel import bessel_j
from src.app.spectral.schema.spectral import ExplicitRank
from src.app.spectral.service.spectral import decompose, select_rank
from src.core.exceptions import ConfigurationError, PreconditionError

logger = logging.getLogger(__name__)

PEAK_LEVEL = 0.999


def scheme_case(scheme: SchemeSpec) -> tuple[int, NDArray[np.float64] | None]:
    """Structure case and fixed vector xi predicted for a test-vector scheme."""
    match scheme:
        case NormalSchemeSpec():
            return 1, None
        case IncidentSchemeSpec():
            return 2, None
        case FixedSchemeSpec(angle=angle):
            return 3, np.array([np.cos(angle), np.sin(angle)])
        case _:
            raise ConfigurationError(f"Unknown test-vector scheme: {scheme!r}")


def structure_prediction(
    case: int,
    x: ArrayLike,
    sample: ArcSample,
    xi: ArrayLike | None,
    ctx: WaveContext,
    form: StructureForm = "printed",
) -> float | NDArray[np.float64]:
    """Bessel-function structure of F(x) summed over the sample points.

    `printed` evaluates the three stated structures verbatim; `corrected`
    evaluates the squares of 2 W(x)*W(y_m) built from the closed form the
    circle-integral oracles agree with. Where x = y_m the unit vector
    (x - y_m)/|x - y_m| is replaced by 0, the continuous limit of every term.
    """
    if case not in (1, 2, 3):
        raise PreconditionError(f"Structure case must be 1, 2 or 3, got {case}")
    if case == 3 and xi is None:
        raise PreconditionError("Structure case 3 needs a fixed vector xi")
    if form not in ("printed", "corrected"):
        raise PreconditionError(f"Unknown structure form {form!r}")

    x = np.asarray(x, dtype=np.float64)
    single = x.ndim == 1
    points = np.atleast_2d(x)

    d = points[:, None, :] - sample.points[None, :, :]
    r = np.linalg.norm(d, axis=-1)
    safe = np.where(r > 0, r, 1.0)
    dhat = np.where((r > 0)[..., None], d / safe[..., None], 0.0)

    z = ctx.k * r
    j0, j1, j2 = bessel_j(0, z), bessel_j(1, z), bessel_j(2, z)
    dn = np.einsum("pmi,mi->pm", dhat, sample.normals)
    sign = -1.0 if form == "printed" else 1.0

    if case == 1 and form == "printed":
        terms = j0**2
    elif case == 1:
        terms = (j0 + j2 - 2 * dn**2 * j2) ** 2
    elif case == 2:
        terms = (2.0 if form == "printed" else 4.0) * dn**2 * j1**2
    else:
        xi = np.asarray(xi, dtype=np.float64)
        xi = xi / np.linalg.norm(xi)
        nu_xi = sample.normals @ xi
        dxi = dhat @ xi
        terms = (nu_xi[None, :] * (j0 + sign * j2) - 2 * dn * dxi * j2) ** 2

    values = np.sum(terms, axis=-1)
    return float(values[0]) if single else values


def _peak(image: ImageGrid, values: NDArray[np.float64]) -> NDArray[np.float64]:
    i, j = np.unravel_index(np.argmax(values), values.shape)
    return np.array([image.xs[j], image.ys[i]])


def _compare(image: ImageGrid, prediction: NDArray[np.float64]) -> ComparisonStats:
    diff = np.abs(image.values - prediction)
    a, b = image.values.ravel(), prediction.ravel()
    correlation = float(np.corrcoef(a, b)[0, 1]) if a.std() > 0 and b.std() > 0 else 0.0

    # ties in the prediction count as peaks
    near_peak = prediction >= PEAK_LEVEL * prediction.max()
    candidates = image.points[near_peak]
    distance = np.min(np.linalg.norm(candidates - image.argmax(), axis=-1))

    peak = _peak(image, prediction)
    return ComparisonStats(
        max_abs_diff=float(diff.max()),
        p95_abs_diff=float(np.percentile(diff, 95)),
        correlation=correlation,
        prediction_peak=(float(peak[0]), float(peak[1])),
        peak_distance=float(distance),
    )


def compare_structure(image: ImageGrid, sample: ArcSample, ctx: WaveContext, scheme: SchemeSpec) -> ComparisonReport:
    """Pipeline map against the printed and corrected structures on the same grid."""
    case, xi = scheme_case(scheme)
    points = image.points.reshape(-1, 2)

    forms = {
        form: _compare(image, structure_prediction(case, points, sample, xi, ctx, form).reshape(image.values.shape))
        for form in ("printed", "corrected")
    }
    peak = image.argmax()
    report = ComparisonReport(
        scheme=scheme.name,
        case=case,
        n=image.parameters["N"],
        wavelength=ctx.wavelength,
        signal_rank=image.parameters["M"],
        pipeline_peak=(float(peak[0]), float(peak[1])),
        printed=forms["printed"],
        corrected=forms["corrected"],
    )
    logger.debug(
        "Structure case %d for %s: max diff printed %.3e, corrected %.3e",
        case,
        scheme.name,
        report.printed.max_abs_diff,
        report.corrected.max_abs_diff,
    )
    return report


def theorem_vs_pipeline_report(
    arc: Arc,
    dirs: DirectionSet,
    ctx: WaveContext,
    scheme: SchemeSpec,
    grid: GridSpec | None = None,
    sample: ArcSample | None = None,
    mode: SolverMode = SolverMode.ASYMPTOTIC,
) -> ComparisonReport:
    """Image noiseless synthetic data of the sampled arc and compare it with the structure theorem.

    The signal rank is the number of sample points.
    """
    match SolverMode(mode):
        case SolverMode.ASYMPTOTIC:
            density = asymptotic_density
        case SolverMode.KIRCHHOFF:
            density = kirchhoff_density
        case _:
            raise PreconditionError("Structure comparison needs synthetic (kirchhoff or asymptotic) data")

    sample = sample or sample_arc(arc, ctx.wavelength)
    entries = assemble_from_densities([density(sample, theta, ctx) for theta in dirs.incident], dirs, ctx)
    basis = select_rank(decompose(entries), ExplicitRank(rank=min(sample.count, dirs.count)))

    image = imaging_map(basis, dirs, ctx, resolve_scheme(scheme, sample), grid, label=scheme.name)
    return compare_structure(image, sample, ctx, scheme)

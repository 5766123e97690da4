import logging
import math

import numpy as np
from numpy.typing import NDArray

from src.app.forward.schema.forward import DensitySolution, SolverMode, WaveContext
from src.app.forward.service.bie import NeumannArcSolver
from src.app.forward.service.forward import asymptotic_density, far_field_operator, kirchhoff_density
from src.app.geometry.schema.geometry import Arc, ArcSample
from src.app.geometry.service.geometry import sample_arc
from src.app.msr.schema.msr import DirectionSet, MsrMatrix
from src.core.exceptions import ConfigurationError, PreconditionError
from src.core.utils.rng import generator
from src.core.workers.pool import parallel_map

logger = logging.getLogger(__name__)


def make_directions(n: int) -> DirectionSet:
    """theta_n = -[cos(2 pi (n-1)/N), sin(2 pi (n-1)/N)], vartheta_j = -theta_j."""
    if n < 4:
        raise ConfigurationError(f"At least 4 directions are required, got {n}")

    angles = 2 * math.pi * np.arange(n) / n
    incident = -np.stack([np.cos(angles), np.sin(angles)], axis=-1)
    return DirectionSet(incident=incident, observation=-incident)


def illumination_vectors(sample: ArcSample, dirs: DirectionSet, ctx: WaveContext) -> NDArray[np.complex128]:
    """Row m is E_m = [(theta_n . nu_m) exp(i k theta_n . y_m)]_n."""
    obliquity = sample.normals @ dirs.incident.T
    return obliquity * np.exp(1j * ctx.k * (sample.points @ dirs.incident.T))


def _densities(arc: Arc, dirs: DirectionSet, ctx: WaveContext, mode: SolverMode, nodes: int | None):
    match mode:
        case SolverMode.BIE:
            solver = NeumannArcSolver(arc, ctx, nodes)
            chunks = np.array_split(dirs.incident, min(dirs.count, 4))
            return [d for chunk in parallel_map(solver.solve_many, chunks) for d in chunk]
        case SolverMode.KIRCHHOFF:
            sample = sample_arc(arc, ctx.wavelength)
            return [kirchhoff_density(sample, theta, ctx) for theta in dirs.incident]
        case SolverMode.ASYMPTOTIC:
            sample = sample_arc(arc, ctx.wavelength)
            return [asymptotic_density(sample, theta, ctx) for theta in dirs.incident]
        case _:
            raise ConfigurationError(f"Unknown solver mode: {mode!r}")


def assemble_from_densities(
    densities: list[DensitySolution], dirs: DirectionSet, ctx: WaveContext
) -> NDArray[np.complex128]:
    """Column l holds psi_inf(vartheta_j, theta_l) for every j."""
    if len(densities) != dirs.count:
        raise PreconditionError(f"{len(densities)} densities for {dirs.count} directions")

    # all densities share nodes, normals and weights
    operator = far_field_operator(densities[0], dirs.observation, ctx)
    values = np.stack([d.values for d in densities], axis=-1)
    return operator @ values


def assemble(
    arc: Arc, dirs: DirectionSet, ctx: WaveContext, mode: SolverMode, nodes: int | None = None
) -> MsrMatrix:
    densities = _densities(arc, dirs, ctx, SolverMode(mode), nodes)
    entries = assemble_from_densities(densities, dirs, ctx)
    if not np.all(np.isfinite(entries)):
        raise PreconditionError("MSR matrix has non-finite entries")

    logger.debug("Assembled %dx%d MSR matrix for '%s' in %s mode", dirs.count, dirs.count, arc.label, mode)
    return MsrMatrix(entries=entries, directions=dirs, ctx=ctx, mode=SolverMode(mode))


def add_awgn(matrix: MsrMatrix, snr_db: float, seed: int) -> MsrMatrix:
    """Add circular complex Gaussian noise with power mean|K|^2 / 10^(snr_db/10)."""
    if math.isnan(snr_db) or snr_db == -math.inf:
        raise PreconditionError(f"SNR must be finite or +inf, got {snr_db}")
    if snr_db == math.inf:
        return matrix.with_entries(matrix.entries.copy(), snr_db=snr_db, seed=seed)

    signal_power = float(np.mean(np.abs(matrix.entries) ** 2))
    noise_power = signal_power / 10 ** (snr_db / 10)

    rng = generator(seed)
    shape = matrix.entries.shape
    noise = math.sqrt(noise_power / 2) * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))

    logger.debug("AWGN at %.4g dB: signal power %.4e, noise power %.4e", snr_db, signal_power, noise_power)
    return matrix.with_entries(matrix.entries + noise, snr_db=snr_db, seed=seed)

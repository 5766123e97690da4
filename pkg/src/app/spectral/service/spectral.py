import logging

import numpy as np
from scipy import linalg

from src.app.msr.schema.msr import MsrMatrix
from src.app.spectral.schema.spectral import ExplicitRank, RankPolicy, SvdBasis, ThresholdRank
from src.core.exceptions import ConfigurationError, DecompositionError, RankSelectionError

logger = logging.getLogger(__name__)


def decompose(matrix: MsrMatrix | np.ndarray) -> SvdBasis:
    """Full SVD with descending singular values; no rank selected."""
    entries = matrix.entries if isinstance(matrix, MsrMatrix) else np.asarray(matrix)
    if not np.all(np.isfinite(entries)):
        raise DecompositionError("Cannot decompose a matrix with non-finite entries")

    try:
        u, s, vh = linalg.svd(entries, lapack_driver="gesdd")
    except linalg.LinAlgError:
        logger.warning("gesdd did not converge, retrying with gesvd")
        try:
            u, s, vh = linalg.svd(entries, lapack_driver="gesvd")
        except linalg.LinAlgError as e:
            norm = np.linalg.norm(entries)
            raise DecompositionError(f"SVD failed for a {entries.shape} matrix with norm {norm:.3e}: {e}")

    logger.debug("SVD of %s matrix: sigma_1=%.4e, sigma_N=%.4e", entries.shape, s[0], s[-1])
    return SvdBasis(singular_values=s, left_vectors=u, right_vectors=vh.conj().T)


def select_rank(basis: SvdBasis, policy: RankPolicy) -> SvdBasis:
    match policy:
        case ExplicitRank(rank=rank):
            if rank > basis.count:
                raise ConfigurationError(f"Signal rank {rank} exceeds the number of directions {basis.count}")
        case ThresholdRank(tau=tau):
            sigma = basis.singular_values
            rank = int(np.count_nonzero(sigma >= tau * sigma[0])) if sigma[0] > 0 else 0
            if rank == 0:
                raise RankSelectionError("no signal subspace")
        case _:
            raise ConfigurationError(f"Unknown rank policy: {policy!r}")

    logger.debug("Selected signal rank %d with %r", rank, policy)
    return basis.with_rank(rank)


def reconstruction_error(basis: SvdBasis, matrix: MsrMatrix | np.ndarray) -> float:
    """||K - U diag(sigma) V*|| / ||K|| over the full spectrum."""
    entries = matrix.entries if isinstance(matrix, MsrMatrix) else np.asarray(matrix)
    rebuilt = (basis.left_vectors * basis.singular_values) @ basis.right_vectors.conj().T
    return float(np.linalg.norm(entries - rebuilt) / np.linalg.norm(entries))


def orthonormality_residuals(basis: SvdBasis) -> tuple[float, float]:
    """max |U*U - I| and max |V*V - I|."""
    eye = np.eye(basis.count)
    u, v = basis.left_vectors, basis.right_vectors
    return float(np.max(np.abs(u.conj().T @ u - eye))), float(np.max(np.abs(v.conj().T @ v - eye)))

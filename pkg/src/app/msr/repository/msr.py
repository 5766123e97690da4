import logging
from pathlib import Path

import numpy as np
import orjson
from pydantic import ValidationError

from src.app.forward.schema.forward import WaveContext
from src.app.msr.schema.msr import MsrDocument, MsrMatrix
from src.app.msr.service.msr import make_directions
from src.core.exceptions import ArtifactError
from src.core.models.base import ArtifactMetadata
from src.core.models.repository import BaseArtifactRepository

logger = logging.getLogger(__name__)


def to_document(matrix: MsrMatrix, metadata: ArtifactMetadata | None = None) -> MsrDocument:
    flat = matrix.entries.reshape(-1)
    return MsrDocument(
        n=matrix.count,
        k=matrix.ctx.k,
        wavelength=matrix.ctx.wavelength,
        mode=matrix.mode,
        seed=matrix.seed,
        snr_db=matrix.snr_db,
        entries=[(float(z.real), float(z.imag)) for z in flat],
        metadata=metadata,
    )


def from_document(document: MsrDocument) -> MsrMatrix:
    n = document.n
    if len(document.entries) != n * n:
        raise ArtifactError(f"MSR container holds {len(document.entries)} entries, expected {n * n}")

    pairs = np.asarray(document.entries, dtype=np.float64).reshape(n, n, 2)
    entries = np.empty((n, n), dtype=np.complex128)
    entries.real, entries.imag = pairs[..., 0], pairs[..., 1]
    return MsrMatrix(
        entries=entries,
        directions=make_directions(n),
        ctx=WaveContext(wavenumber=document.k, wavelength=document.wavelength),
        mode=document.mode,
        snr_db=document.snr_db,
        seed=document.seed,
    )


class MsrRepository(BaseArtifactRepository[MsrMatrix]):
    def save(self, name: str, item: MsrMatrix, metadata: ArtifactMetadata | None = None) -> Path:
        # orjson writes the shortest round-trip repr of every double
        return self.write_json(name, to_document(item, metadata))

    def load(self, path: Path) -> MsrMatrix:
        try:
            document = MsrDocument.model_validate(orjson.loads(self.read_bytes(path)))
        except (orjson.JSONDecodeError, ValidationError) as e:
            raise ArtifactError(f"Invalid MSR container {path}: {e}")

        logger.debug("Loaded %dx%d MSR matrix from %s", document.n, document.n, path)
        return from_document(document)

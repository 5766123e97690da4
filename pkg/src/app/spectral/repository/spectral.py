from pathlib import Path

from src.app.spectral.schema.spectral import SvdBasis
from src.core.models.base import ArtifactMetadata
from src.core.models.repository import BaseArtifactRepository


class SpectrumRepository(BaseArtifactRepository[SvdBasis]):
    def save(self, name: str, item: SvdBasis, metadata: ArtifactMetadata | None = None) -> Path:
        rows = ((i, float(value)) for i, value in enumerate(item.singular_values, start=1))
        return self.write_csv(name, ("index", "value"), rows, metadata)

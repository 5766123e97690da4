from pathlib import Path

import numpy as np

from src.app.imaging.schema.imaging import ContrastStats, ImageGrid, ImageSidecar
from src.core.models.base import ArtifactMetadata
from src.core.models.repository import BaseArtifactRepository


def to_pgm(grid: ImageGrid, metadata: ArtifactMetadata | None = None) -> bytes:
    """8-bit binary PGM scaled to [0, max F]; the first raster row is the largest y."""
    values = grid.values
    peak = float(values.max())
    scaled = np.zeros_like(values) if peak <= 0 else values / peak
    pixels = np.rint(np.clip(scaled, 0, 1) * 255).astype(np.uint8)[::-1]

    header = ["P5"]
    if metadata is not None:
        header += [f"# {line}" for line in metadata.header_lines()]
    header += [f"# max={peak!r}", f"{pixels.shape[1]} {pixels.shape[0]}", "255"]
    return ("\n".join(header) + "\n").encode("ascii") + pixels.tobytes()


class ImageRepository(BaseArtifactRepository[ImageGrid]):
    def save(
        self,
        name: str,
        item: ImageGrid,
        metadata: ArtifactMetadata,
        stats: ContrastStats | None = None,
    ) -> Path:
        gx, gy = np.meshgrid(item.xs, item.ys)
        rows = zip(gx.ravel().tolist(), gy.ravel().tolist(), item.values.ravel().tolist(), strict=True)
        self.write_csv(f"{name}.csv", ("x", "y", "value"), rows, metadata)
        self.write_bytes(f"{name}.pgm", to_pgm(item, metadata))

        sidecar = ImageSidecar(
            scheme=item.scheme,
            n=item.parameters["N"],
            wavelength=item.parameters["lambda"],
            seed=metadata.seed,
            signal_rank=item.parameters["M"],
            step=item.step,
            x_range=item.x_range,
            y_range=item.y_range,
            contrast=stats,
            metadata=metadata,
        )
        return self.write_json(f"{name}.json", sidecar)

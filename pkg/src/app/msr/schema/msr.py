from dataclasses import dataclass, replace
from typing import Annotated

import numpy as np
from numpy.typing import NDArray
from pydantic import Field

from src.app.forward.schema.forward import SolverMode, WaveContext
from src.core.models.base import ArtifactMetadata, Base


@dataclass(frozen=True, eq=False)
class DirectionSet:
    """Full-view incident directions theta_n and observation directions -theta_n."""

    incident: NDArray[np.float64]
    observation: NDArray[np.float64]

    @property
    def count(self) -> int:
        return self.incident.shape[0]


@dataclass(frozen=True, eq=False)
class MsrMatrix:
    """K[j, l] = psi_inf(vartheta_j, theta_l)."""

    entries: NDArray[np.complex128]
    directions: DirectionSet
    ctx: WaveContext
    mode: SolverMode
    snr_db: float | None = None
    seed: int | None = None

    @property
    def count(self) -> int:
        return self.directions.count

    def with_entries(self, entries: NDArray[np.complex128], **changes) -> "MsrMatrix":
        return replace(self, entries=entries, **changes)


class MsrDocument(Base):
    """JSON container of an MSR matrix; entries are row-major [re, im] pairs."""

    n: Annotated[int, Field(alias="N", ge=4)]
    k: Annotated[float, Field(gt=0)]
    wavelength: Annotated[float, Field(alias="lambda", gt=0)]
    mode: SolverMode
    seed: int | None = Field(default=None)
    snr_db: float | None = Field(default=None)
    entries: list[tuple[float, float]]
    metadata: ArtifactMetadata | None = Field(default=None)

import math
from pathlib import Path
from typing import Annotated

from pydantic import Field, field_validator

from src.app.analytic.schema.analytic import AppendixReport, IdentitySummary
from src.app.forward.schema.forward import SolverMode
from src.app.geometry.schema.geometry import ArcSpec, BuiltinArcSpec
from src.app.imaging.schema.imaging import ContrastStats, FixedSchemeSpec, GridSpec, IncidentSchemeSpec, SchemeSpec
from src.app.spectral.schema.spectral import RankPolicy, ThresholdRank
from src.core.config import settings
from src.core.models.base import ArtifactMetadata, Base
from src.core.utils.pydantichelper import partial_model


def example_schemes() -> list[SchemeSpec]:
    angles = (math.pi / 2, math.pi / 3, math.pi / 4, math.pi / 6, 0.0)
    return [*(FixedSchemeSpec(angle=a) for a in angles), IncidentSchemeSpec()]


class ExperimentConfig(Base):
    arc: ArcSpec = Field(default_factory=lambda: BuiltinArcSpec(name="line"))
    n: Annotated[int, Field(alias="N", default=20, ge=4)]
    wavelength: Annotated[float, Field(alias="lambda", default=0.4, gt=0)]
    snr_db: float | None = Field(default=20.0, description="None for noiseless data")
    seed: Annotated[int, Field(default=0, ge=0)]
    mode: SolverMode = Field(default=SolverMode.BIE)
    nodes: Annotated[int | None, Field(default=None, ge=16)]
    schemes: list[SchemeSpec] = Field(default_factory=example_schemes, min_length=1)
    rank: RankPolicy = Field(default_factory=lambda: ThresholdRank(tau=settings.rank_threshold))
    grid: GridSpec = Field(default_factory=GridSpec)
    output_dir: Path = Field(default_factory=lambda: settings.output_dir)
    verify_identities: bool = Field(default=False)
    compare_structure: bool = Field(default=True, description="Only applies to noiseless synthetic data")

    @field_validator("nodes")
    def even_nodes(cls, v):
        if v is not None and v % 2:
            raise ValueError("nodes must be even")
        return v


PartialExperimentConfig = partial_model(ExperimentConfig)

PRESETS: dict[str, dict] = {
    "example1": {"arc": {"kind": "builtin", "name": "line"}, "N": 20, "lambda": 0.4, "snr_db": 20.0},
    "example2": {"arc": {"kind": "builtin", "name": "curve"}, "N": 32, "lambda": 0.5, "snr_db": 20.0},
}


class SchemeResult(Base):
    scheme: str
    contrast: ContrastStats
    artifacts: list[str]


class RunSummary(Base):
    metadata: ArtifactMetadata
    n: Annotated[int, Field(alias="N")]
    wavelength: Annotated[float, Field(alias="lambda")]
    mode: SolverMode
    snr_db: float | None
    noise_seed: int | None
    signal_rank: Annotated[int, Field(alias="M")]
    singular_values: list[float]
    schemes: list[SchemeResult]
    identities: IdentitySummary | None = Field(default=None)
    appendix: AppendixReport | None = Field(default=None)
    artifacts: list[str]

    @property
    def passed(self) -> bool:
        identities_ok = self.identities is None or self.identities.passed
        appendix_ok = self.appendix is None or self.appendix.passed
        return identities_ok and appendix_ok

from pathlib import Path

from pydantic import BaseModel

from src.app.analytic.schema.analytic import IdentityReport
from src.core.models.base import ArtifactMetadata
from src.core.models.repository import BaseArtifactRepository

IDENTITY_COLUMNS = (
    "case",
    "xi_x",
    "xi_y",
    "zeta_x",
    "zeta_y",
    "x",
    "y",
    "k",
    "N",
    "sum_vs_quadrature",
    "quadrature_vs_printed",
    "quadrature_vs_series",
    "quadrature_vs_corrected",
)


class AnalyticRepository(BaseArtifactRepository[list[IdentityReport]]):
    def save(self, name: str, item: list[IdentityReport], metadata: ArtifactMetadata) -> Path:
        rows = (
            (
                r.case,
                *r.xi,
                *r.zeta,
                *r.x,
                r.k,
                r.n,
                r.residual_lhs_vs_quadrature,
                r.residual_quadrature_vs_printed,
                r.residual_quadrature_vs_series,
                r.residual_quadrature_vs_corrected,
            )
            for r in item
        )
        return self.write_csv(name, IDENTITY_COLUMNS, rows, metadata)

    def save_report(self, name: str, report: BaseModel, metadata: ArtifactMetadata) -> Path:
        payload = report.model_dump(mode="json", by_alias=True)
        return self.write_json(name, {**payload, "metadata": metadata.model_dump(mode="json")})

from typing import Annotated, Literal, NamedTuple

from pydantic import Field

from src.core.models.base import Base

type StructureForm = Literal["printed", "corrected"]


class ClosedForm(NamedTuple):
    value: complex
    origin_limit: bool


class IdentityReport(Base):
    """Both sides of the direction-sum identity at one (xi, zeta, x, N).

    `printed_closed_form` is the printed closed form of the applicable case:
    the two-vector form when xi != zeta, the half-J0 form otherwise.
    """

    case: Literal[1, 2]
    xi: tuple[float, float]
    zeta: tuple[float, float]
    x: tuple[float, float]
    k: float
    n: int

    lhs: complex
    quadrature: complex
    series: complex
    printed_closed_form: complex
    corrected: complex
    origin_limit: bool = Field(default=False)

    residual_lhs_vs_quadrature: Annotated[float, Field(ge=0)]
    residual_quadrature_vs_series: Annotated[float, Field(ge=0)]
    residual_quadrature_vs_printed: Annotated[float, Field(ge=0)]
    residual_quadrature_vs_corrected: Annotated[float, Field(ge=0)]


class SweepSpec(Base):
    tuples: Annotated[int, Field(default=200, ge=1)]
    n_values: list[Annotated[int, Field(ge=8)]] = Field(default_factory=lambda: [32, 64, 128, 256])
    max_kx: Annotated[float, Field(default=20.0, ge=0)]
    wavelength: Annotated[float, Field(default=0.4, gt=0)]
    seed: int = Field(default=0)
    equal_fraction: Annotated[float, Field(default=0.25, ge=0, le=1)]
    origin_rows: Annotated[int, Field(default=4, ge=0)]
    tolerance: Annotated[float, Field(default=1e-3, gt=0)]
    series_tolerance: Annotated[float, Field(default=1e-9, gt=0)]


class IdentitySummary(Base):
    rows: int
    n_max: int
    max_lhs_vs_quadrature: float = Field(description="At the largest N of the sweep")
    max_quadrature_vs_series: float
    max_origin_residual: float
    max_quadrature_vs_identity1: float
    max_quadrature_vs_identity2: float
    max_quadrature_vs_corrected: float
    passed: bool


class ComparisonStats(Base):
    max_abs_diff: float
    p95_abs_diff: float
    correlation: float
    prediction_peak: tuple[float, float]
    peak_distance: float


class ComparisonReport(Base):
    scheme: str
    case: Literal[1, 2, 3]
    n: Annotated[int, Field(alias="N")]
    wavelength: Annotated[float, Field(alias="lambda")]
    signal_rank: Annotated[int, Field(alias="M")]
    pipeline_peak: tuple[float, float]
    printed: ComparisonStats
    corrected: ComparisonStats


class AppendixCheck(Base):
    name: str
    printed: str
    residual: float
    tolerance: float
    passed: bool
    enforced: bool = Field(default=True, description="False for printed claims that are reported only")


class AppendixReport(Base):
    checks: list[AppendixCheck]

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks if check.enforced)

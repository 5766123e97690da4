import math
from dataclasses import dataclass, field
from typing import Annotated, Literal

import numpy as np
from numpy.typing import NDArray
from pydantic import Field

from src.app.geometry.schema.geometry import ArcSample
from src.core.models.base import ArtifactMetadata, Base


class FixedSchemeSpec(Base):
    kind: Literal["fixed"] = "fixed"
    angle: float = Field(description="Angle of xi in radians")

    @property
    def name(self) -> str:
        return f"xi{round(math.degrees(self.angle), 6):g}"


class IncidentSchemeSpec(Base):
    kind: Literal["incident"] = "incident"

    @property
    def name(self) -> str:
        return "incident"


class NormalSchemeSpec(Base):
    kind: Literal["normal"] = "normal"

    @property
    def name(self) -> str:
        return "normal"


SchemeSpec = Annotated[FixedSchemeSpec | IncidentSchemeSpec | NormalSchemeSpec, Field(discriminator="kind")]


@dataclass(frozen=True, eq=False)
class FixedXi:
    """c_n = xi for every direction."""

    xi: NDArray[np.float64]

    def __post_init__(self):
        xi = np.asarray(self.xi, dtype=np.float64)
        object.__setattr__(self, "xi", xi / np.linalg.norm(xi))

    @classmethod
    def from_angle(cls, angle: float) -> "FixedXi":
        return cls(np.array([math.cos(angle), math.sin(angle)]))


@dataclass(frozen=True)
class IncidentAligned:
    """c_n = theta_n."""


@dataclass(frozen=True, eq=False)
class OracleNormal:
    """c_n = nu at the sample point nearest to x."""

    reference: ArcSample


type TestVectorScheme = FixedXi | IncidentAligned | OracleNormal


class GridSpec(Base):
    """Rectangular grid; `step` defaults to a fraction of the wavelength."""

    x_range: tuple[float, float] | None = Field(default=None)
    y_range: tuple[float, float] | None = Field(default=None)
    step: Annotated[float | None, Field(default=None, gt=0)]


@dataclass(frozen=True, eq=False)
class ImageGrid:
    """values[i, j] = F(xs[j], ys[i])."""

    xs: NDArray[np.float64]
    ys: NDArray[np.float64]
    step: float
    values: NDArray[np.float64]
    scheme: str = ""
    parameters: dict = field(default_factory=dict)

    @property
    def x_range(self) -> tuple[float, float]:
        return float(self.xs[0]), float(self.xs[-1])

    @property
    def y_range(self) -> tuple[float, float]:
        return float(self.ys[0]), float(self.ys[-1])

    @property
    def points(self) -> NDArray[np.float64]:
        gx, gy = np.meshgrid(self.xs, self.ys)
        return np.stack([gx, gy], axis=-1)

    def argmax(self) -> NDArray[np.float64]:
        i, j = np.unravel_index(np.argmax(self.values), self.values.shape)
        return np.array([self.xs[j], self.ys[i]])


class ContrastStats(Base):
    on_arc_mean: float
    off_arc_mean: float
    ratio: float
    off_arc_p95: float
    degenerate: bool = Field(description="On-arc mean does not exceed the off-arc 95th percentile")
    argmax: tuple[float, float]
    argmax_distance: float


class ImageSidecar(Base):
    scheme: str
    n: Annotated[int, Field(alias="N")]
    wavelength: Annotated[float, Field(alias="lambda")]
    seed: int | None = Field(default=None)
    signal_rank: Annotated[int, Field(alias="M")]
    step: float
    x_range: tuple[float, float]
    y_range: tuple[float, float]
    contrast: ContrastStats | None = Field(default=None)
    metadata: ArtifactMetadata

import math
from dataclasses import dataclass
from enum import Enum
from typing import Annotated, Self

import numpy as np
from numpy.typing import NDArray
from pydantic import Field, model_validator

from src.core.models.base import Base


class SolverMode(str, Enum):
    BIE = "bie"
    KIRCHHOFF = "kirchhoff"
    ASYMPTOTIC = "asymptotic"


class WaveContext(Base):
    wavenumber: Annotated[float, Field(gt=0)]
    wavelength: Annotated[float, Field(gt=0)]

    @model_validator(mode="after")
    def consistent(self) -> Self:
        if abs(self.wavenumber * self.wavelength - 2 * math.pi) > 1e-12:
            raise ValueError("wavenumber * wavelength must equal 2 pi")
        return self

    @classmethod
    def from_wavelength(cls, wavelength: float) -> Self:
        return cls(wavenumber=2 * math.pi / wavelength, wavelength=wavelength)

    @property
    def k(self) -> float:
        return self.wavenumber


@dataclass(frozen=True, eq=False)
class DensitySolution:
    """Density phi(y, theta) on quadrature nodes of the arc.

    `weights` are arc-length quadrature weights: the integral of f over the arc
    is sum(weights * f(nodes)).
    """

    incident_direction: NDArray[np.float64]
    nodes: NDArray[np.float64]
    normals: NDArray[np.float64]
    values: NDArray[np.complex128]
    weights: NDArray[np.float64]
    mode: SolverMode

    @property
    def count(self) -> int:
        return self.nodes.shape[0]

    def scaled(self, factor: complex) -> "DensitySolution":
        return DensitySolution(
            incident_direction=self.incident_direction,
            nodes=self.nodes,
            normals=self.normals,
            values=self.values * factor,
            weights=self.weights,
            mode=self.mode,
        )

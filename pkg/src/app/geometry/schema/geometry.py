import math
from collections.abc import Callable
from dataclasses import dataclass, field
from typing import Annotated, Literal

import numpy as np
from numpy.typing import NDArray
from pydantic import Field

from src.core.models.base import Base

type Curve = Callable[[NDArray[np.float64]], NDArray[np.float64]]


@dataclass(frozen=True, eq=False)
class Arc:
    """Parametric arc gamma(s), -1 <= s <= 1.

    `position` and `derivative` map an array of parameters of shape (n,) to
    points of shape (n, 2).
    """

    label: str
    position: Curve
    derivative: Curve

    def __call__(self, s) -> NDArray[np.float64]:
        return self.position(np.atleast_1d(np.asarray(s, dtype=np.float64)))

    def speed(self, s) -> NDArray[np.float64]:
        return np.linalg.norm(self.derivative(np.atleast_1d(np.asarray(s, dtype=np.float64))), axis=-1)

    def tangent(self, s) -> NDArray[np.float64]:
        d = self.derivative(np.atleast_1d(np.asarray(s, dtype=np.float64)))
        return d / np.linalg.norm(d, axis=-1, keepdims=True)

    def normal(self, s) -> NDArray[np.float64]:
        # tangent rotated by +90 degrees
        t = self.tangent(s)
        return np.stack([-t[:, 1], t[:, 0]], axis=-1)


@dataclass(frozen=True, eq=False)
class ArcSample:
    """Points y_m spaced by about half a wavelength along the arc, with unit normals."""

    points: NDArray[np.float64]
    normals: NDArray[np.float64]
    parameters: NDArray[np.float64] = field(default_factory=lambda: np.empty(0))
    arc_length: float = math.nan
    label: str = ""

    def __post_init__(self):
        points = np.atleast_2d(np.asarray(self.points, dtype=np.float64))
        normals = np.atleast_2d(np.asarray(self.normals, dtype=np.float64))
        if points.shape != normals.shape or points.shape[-1] != 2:
            raise ValueError(f"points {points.shape} and normals {normals.shape} must both be (M, 2)")
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "normals", normals / np.linalg.norm(normals, axis=-1, keepdims=True))

    @property
    def count(self) -> int:
        return self.points.shape[0]


class CoordinateSeries(Base):
    """c(s) = sum_j polynomial[j] s^j + sum_j cosine[j] cos((j+1) w s) + sine[j] sin((j+1) w s)."""

    polynomial: list[float] = Field(default_factory=list)
    cosine: list[float] = Field(default_factory=list)
    sine: list[float] = Field(default_factory=list)
    frequency: Annotated[float, Field(default=math.pi / 2, gt=0)]


class BuiltinArcSpec(Base):
    kind: Literal["builtin"] = "builtin"
    name: Literal["line", "curve"]


class ParametricArcSpec(Base):
    kind: Literal["parametric"] = "parametric"
    label: str = Field(default="parametric")
    x: CoordinateSeries
    y: CoordinateSeries


ArcSpec = Annotated[BuiltinArcSpec | ParametricArcSpec, Field(discriminator="kind")]

from dataclasses import dataclass, replace
from typing import Annotated, Literal

import numpy as np
from numpy.typing import NDArray
from pydantic import Field

from src.core.models.base import Base


@dataclass(frozen=True, eq=False)
class SvdBasis:
    """K = U diag(sigma) V*, columns of U and V are the singular vectors.

    `signal_rank` is None until a rank policy has been applied.
    """

    singular_values: NDArray[np.float64]
    left_vectors: NDArray[np.complex128]
    right_vectors: NDArray[np.complex128]
    signal_rank: int | None = None

    @property
    def count(self) -> int:
        return self.singular_values.size

    @property
    def signal_left(self) -> NDArray[np.complex128]:
        return self.left_vectors[:, : self._rank()]

    @property
    def signal_right(self) -> NDArray[np.complex128]:
        return self.right_vectors[:, : self._rank()]

    def _rank(self) -> int:
        if self.signal_rank is None:
            raise ValueError("Signal rank has not been selected")
        return self.signal_rank

    def with_rank(self, rank: int) -> "SvdBasis":
        return replace(self, signal_rank=rank)


class ExplicitRank(Base):
    kind: Literal["explicit"] = "explicit"
    rank: Annotated[int, Field(ge=1)]


class ThresholdRank(Base):
    kind: Literal["threshold"] = "threshold"
    tau: Annotated[float, Field(gt=0, le=1)]


RankPolicy = Annotated[ExplicitRank | ThresholdRank, Field(discriminator="kind")]

"""Bessel and Hankel functions used by the kernels and the closed-form structures.

Values come from `scipy.special` (Cephes/AMOS); this module only fixes the
orders the rest of the package needs and enforces the argument domain.
"""

import logging

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import special

from src.app.special_fn.schema.bessel import BesselTriple
from src.core.exceptions import DomainError

logger = logging.getLogger(__name__)

BESSEL_ORDERS = (0, 1, 2)
HANKEL_ORDERS = (0, 1)


def _as_argument(z: ArrayLike, name: str) -> NDArray[np.float64]:
    arr = np.asarray(z, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name}: argument must be finite")
    return arr


def _unwrap(value: NDArray, scalar: bool):
    return value.item() if scalar else value


def bessel_j(order: int, z: ArrayLike) -> float | NDArray[np.float64]:
    """J_order(z) for order in {0, 1, 2} and z >= 0."""
    if order not in BESSEL_ORDERS:
        raise DomainError(f"bessel_j: order {order} not in {BESSEL_ORDERS}")

    arr = _as_argument(z, "bessel_j")
    if np.any(arr < 0):
        raise DomainError("bessel_j: argument must be nonnegative (callers pass k*|x|)")

    match order:
        case 0:
            value = special.j0(arr)
        case 1:
            value = special.j1(arr)
        case _:
            value = special.jv(2, arr)

    return _unwrap(np.asarray(value), np.ndim(z) == 0)


def hankel1(order: int, z: ArrayLike) -> complex | NDArray[np.complex128]:
    """H^(1)_order(z) = J_order(z) + i Y_order(z) for order in {0, 1} and z > 0."""
    if order not in HANKEL_ORDERS:
        raise DomainError(f"hankel1: order {order} not in {HANKEL_ORDERS}")

    arr = _as_argument(z, "hankel1")
    if np.any(arr <= 0):
        raise DomainError("hankel1: argument must be positive, the kernel is logarithmically singular at 0")

    return _unwrap(np.asarray(special.hankel1(order, arr)), np.ndim(z) == 0)


def bessel_triple(z: float) -> BesselTriple:
    z = float(_as_argument(z, "bessel_triple"))
    return BesselTriple(z=z, j0=bessel_j(0, z), j1=bessel_j(1, z), j2=bessel_j(2, z))

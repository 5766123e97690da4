"""Direction averages of (theta . xi)(theta . zeta) exp(i k theta . x).

Three independent evaluations are provided: the exact finite sum over the
full-view direction set, a periodic trapezoid rule on the unit circle, and a
truncated Jacobi-Anger series. The printed closed forms are evaluated verbatim
next to the closed form the oracles agree with.
"""

import logging
import math

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import special

from src.app.analytic.schema.analytic import ClosedForm, IdentityReport
from src.app.forward.schema.forward import WaveContext
from src.app.msr.service.msr import make_directions
from src.app.special_fn.service.bessel import bessel_j
from src.core.config import settings
from src.core.exceptions import PreconditionError, QuadratureError

logger = logging.getLogger(__name__)

SERIES_MARGIN = 40


def _vector(v: ArrayLike) -> NDArray[np.float64]:
    return np.asarray(v, dtype=np.float64).reshape(2)


def _unit(v: ArrayLike) -> NDArray[np.float64]:
    v = _vector(v)
    return v / np.linalg.norm(v)


def _circle(count: int) -> NDArray[np.float64]:
    alpha = 2 * math.pi * np.arange(count) / count
    return np.stack([np.cos(alpha), np.sin(alpha)], axis=-1)


def _average(theta: NDArray[np.float64], xi, zeta, x, ctx: WaveContext) -> complex:
    values = (theta @ xi) * (theta @ zeta) * np.exp(1j * ctx.k * (theta @ x))
    return complex(np.mean(values))


def discrete_sum(xi: ArrayLike, zeta: ArrayLike, x: ArrayLike, n: int, ctx: WaveContext) -> complex:
    """(1/N) sum_n (theta_n . xi)(theta_n . zeta) exp(i k theta_n . x) over the full-view directions."""
    if n < 8:
        raise PreconditionError(f"discrete_sum needs at least 8 directions, got {n}")
    return _average(make_directions(n).incident, _unit(xi), _unit(zeta), _vector(x), ctx)


def quadrature_oracle(xi: ArrayLike, zeta: ArrayLike, x: ArrayLike, ctx: WaveContext) -> complex:
    """(1/2 pi) times the circle integral, by the periodic trapezoid rule.

    The result is checked against a rule with more nodes.
    """
    numerics = settings.numerics
    xi, zeta, x = _unit(xi), _unit(zeta), _vector(x)

    value = _average(_circle(numerics.oracle_nodes), xi, zeta, x, ctx)
    check = _average(_circle(numerics.oracle_check_nodes), xi, zeta, x, ctx)
    if abs(value - check) > numerics.oracle_tolerance:
        raise QuadratureError(
            f"Trapezoid rule not converged at k|x|={ctx.k * np.linalg.norm(x):.4g}: "
            f"|Q{numerics.oracle_nodes} - Q{numerics.oracle_check_nodes}| = {abs(value - check):.3e}"
        )
    return value


def jacobi_anger_series(xi: ArrayLike, zeta: ArrayLike, x: ArrayLike, ctx: WaveContext) -> complex:
    """sum_n i^n J_n(z) exp(-i n phi) g_(-n), z = k|x|, phi the polar angle of x.

    g_m are the Fourier coefficients of g(alpha) = cos(alpha - xi) cos(alpha - zeta).
    """
    xi, zeta, x = _unit(xi), _unit(zeta), _vector(x)
    z = ctx.k * float(np.linalg.norm(x))
    phi = math.atan2(x[1], x[0])

    terms = math.ceil(z) + SERIES_MARGIN
    samples = 2 * terms + 2
    theta = _circle(samples)
    coefficients = np.fft.fft((theta @ xi) * (theta @ zeta)) / samples

    n = np.arange(-terms, terms + 1)
    g = coefficients[(-n) % samples]
    return complex(np.sum((1j**n) * special.jv(n, z) * np.exp(-1j * n * phi) * g))


def printed_identity1(xi: ArrayLike, zeta: ArrayLike, x: ArrayLike, ctx: WaveContext) -> ClosedForm:
    """1/2 (xi . zeta)(J0 - J2) - (x^ . xi)(x^ . zeta) J2, exactly as printed.

    At x = 0 the continuous limit 1/2 (xi . zeta) is returned and flagged.
    """
    xi, zeta, x = _unit(xi), _unit(zeta), _vector(x)
    r = float(np.linalg.norm(x))
    if r == 0:
        return ClosedForm(complex(0.5 * (xi @ zeta)), True)

    z = ctx.k * r
    xhat = x / r
    j0, j2 = bessel_j(0, z), bessel_j(2, z)
    return ClosedForm(complex(0.5 * (xi @ zeta) * (j0 - j2) - (xhat @ xi) * (xhat @ zeta) * j2), False)


def printed_identity2(xi: ArrayLike, x: ArrayLike, ctx: WaveContext) -> complex:
    """1/2 J0(k|x|), exactly as printed; independent of xi."""
    return complex(0.5 * bessel_j(0, ctx.k * float(np.linalg.norm(_vector(x)))))


def corrected_identity(xi: ArrayLike, zeta: ArrayLike, x: ArrayLike, ctx: WaveContext) -> complex:
    """1/2 (xi . zeta)(J0 + J2) - (x^ . xi)(x^ . zeta) J2, which the oracles reproduce.

    Equivalent to 1/2 cos(xi - zeta) J0 - 1/2 cos(2 phi - xi - zeta) J2 in polar angles.
    """
    xi, zeta, x = _unit(xi), _unit(zeta), _vector(x)
    r = float(np.linalg.norm(x))
    if r == 0:
        return complex(0.5 * (xi @ zeta))

    z = ctx.k * r
    xhat = x / r
    j0, j2 = bessel_j(0, z), bessel_j(2, z)
    return complex(0.5 * (xi @ zeta) * (j0 + j2) - (xhat @ xi) * (xhat @ zeta) * j2)


def identity_report(xi: ArrayLike, zeta: ArrayLike, x: ArrayLike, n: int, ctx: WaveContext) -> IdentityReport:
    xi, zeta, x = _unit(xi), _unit(zeta), _vector(x)
    equal = bool(np.allclose(xi, zeta, rtol=0, atol=1e-14))

    lhs = discrete_sum(xi, zeta, x, n, ctx)
    quadrature = quadrature_oracle(xi, zeta, x, ctx)
    series = jacobi_anger_series(xi, zeta, x, ctx)
    corrected = corrected_identity(xi, zeta, x, ctx)
    if equal:
        printed, origin = printed_identity2(xi, x, ctx), bool(np.linalg.norm(x) == 0)
    else:
        printed, origin = printed_identity1(xi, zeta, x, ctx)

    return IdentityReport(
        case=2 if equal else 1,
        xi=tuple(xi),
        zeta=tuple(zeta),
        x=tuple(x),
        k=ctx.k,
        n=n,
        lhs=lhs,
        quadrature=quadrature,
        series=series,
        printed_closed_form=printed,
        corrected=corrected,
        origin_limit=origin,
        residual_lhs_vs_quadrature=abs(lhs - quadrature),
        residual_quadrature_vs_series=abs(quadrature - series),
        residual_quadrature_vs_printed=abs(quadrature - printed),
        residual_quadrature_vs_corrected=abs(quadrature - corrected),
    )

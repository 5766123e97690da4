"""Galerkin solver for the sound-hard arc.

The scattered field is the double-layer potential of a density phi that
vanishes like a square root at both ends of the arc. Its normal derivative on
the arc is expanded with Maue's identity,

    T phi = d/ds S[d phi/ds] + k^2 nu . S[nu phi],

so only the logarithmic singularity of Phi has to be integrated. With the
substitution s = cos t the density is expanded in sin((n+1) t), i.e.
sqrt(1 - s^2) U_n(s), and the same functions are used as test functions. The
log part of Phi is integrated by product quadrature against the cosine
expansion

    log|cos t - cos t'| = -log 2 - 2 sum_p cos(p t) cos(p t') / p,

and the smooth remainder by the midpoint rule in t. The Galerkin matrix is
symmetric, which makes the computed far field exactly reciprocal.
"""

import logging
import math

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import linalg

from src.app.forward.schema.forward import DensitySolution, SolverMode, WaveContext
from src.app.geometry.schema.geometry import Arc
from src.app.geometry.service.geometry import arc_length
from src.app.special_fn.service.bessel import bessel_j, hankel1
from src.core.config import settings
from src.core.exceptions import PreconditionError, SolverError

logger = logging.getLogger(__name__)


def default_node_count(length: float, ctx: WaveContext) -> int:
    """Base node count, doubled while k * L outgrows it."""
    base = settings.numerics.bie_nodes
    nodes = base
    while ctx.k * length > settings.numerics.node_doubling_kl * nodes / base:
        nodes *= 2
    return nodes


def _log_weights(t: NDArray[np.float64]) -> NDArray[np.float64]:
    """W[i, j] with sum_j W[i, j] h(t_j) = int_0^pi log|cos t_i - cos t'| h(t') dt' for cosine polynomials h."""
    q = t.size
    p = np.arange(1, q)
    cp = np.cos(np.outer(t, p))
    return -(math.pi * math.log(2) / q) - (2 * math.pi / q) * (cp / p) @ cp.T


class NeumannArcSolver:
    """Discrete hypersingular operator of one arc at one wavenumber.

    The LU factorization is shared by every incident direction.
    """

    def __init__(self, arc: Arc, ctx: WaveContext, nodes: int | None = None, factorize: bool = True):
        if nodes is None:
            nodes = default_node_count(arc_length(arc), ctx)
        if nodes < 16 or nodes % 2:
            raise PreconditionError(f"BIE node count must be even and at least 16, got {nodes}")

        self.arc = arc
        self.ctx = ctx
        self.nodes = nodes
        self.basis_size = nodes // 2

        q, k = nodes, ctx.k
        t = (2 * np.arange(q) + 1) * math.pi / (2 * q)
        s = np.cos(t)
        self.points = arc(s)
        self.normals = arc.normal(s)
        speed = arc.speed(s)

        r = np.linalg.norm(self.points[:, None, :] - self.points[None, :, :], axis=-1)
        off = ~np.eye(q, dtype=bool)
        j0 = bessel_j(0, k * r)

        # Phi minus its logarithmic part; smooth in (s, s')
        remainder = np.empty((q, q), dtype=np.complex128)
        log_s = np.log(np.abs(s[:, None] - s[None, :])[off])
        remainder[off] = -0.25j * hankel1(0, k * r[off]) - j0[off] * log_s / (2 * math.pi)
        remainder[~off] = -0.25j + (np.log(k * speed / 2) + np.euler_gamma) / (2 * math.pi)

        kernel = j0 * _log_weights(t) / (2 * math.pi) + (math.pi / q) * remainder

        n1 = np.arange(1, self.basis_size + 1)
        self.basis = np.sin(np.outer(t, n1))
        self.weights = (math.pi / q) * speed * np.sin(t)
        self.test = self.basis * (speed * np.sin(t))[:, None]
        cosines = np.cos(np.outer(t, n1))

        self.matrix = -(math.pi / q) * n1[:, None] * (cosines.T @ kernel @ cosines) * n1[None, :] + k**2 * (
            math.pi / q
        ) * (self.test.T @ (kernel * (self.normals @ self.normals.T)) @ self.test)

        self.lu = None
        if factorize:
            condition = np.linalg.cond(self.matrix)
            limit = settings.numerics.condition_limit
            if not np.isfinite(condition) or condition > limit:
                raise SolverError(condition, nodes, limit)
            logger.debug("BIE operator for '%s': nodes=%d, k=%.4g, cond=%.3e", arc.label, nodes, k, condition)
            self.lu = linalg.lu_factor(self.matrix)

    def load(self, thetas: ArrayLike) -> NDArray[np.complex128]:
        """Galerkin right-hand sides for -d psi_inc / d nu, one column per incident direction."""
        thetas = np.atleast_2d(np.asarray(thetas, dtype=np.float64))
        k = self.ctx.k
        neumann = -1j * k * (self.normals @ thetas.T) * np.exp(1j * k * (self.points @ thetas.T))
        return (math.pi / self.nodes) * self.test.T @ neumann

    def coefficients(self, thetas: ArrayLike) -> NDArray[np.complex128]:
        if self.lu is None:
            raise PreconditionError("Solver was built without factorization")
        return linalg.lu_solve(self.lu, self.load(thetas))

    def solve_many(self, thetas: ArrayLike) -> list[DensitySolution]:
        thetas = np.atleast_2d(np.asarray(thetas, dtype=np.float64))
        values = self.basis @ self.coefficients(thetas)
        return [
            DensitySolution(
                incident_direction=theta,
                nodes=self.points,
                normals=self.normals,
                values=values[:, i],
                weights=self.weights,
                mode=SolverMode.BIE,
            )
            for i, theta in enumerate(thetas)
        ]

    def solve(self, theta: ArrayLike) -> DensitySolution:
        return self.solve_many(theta)[0]


def solve_density(arc: Arc, theta: ArrayLike, ctx: WaveContext, nodes: int | None = None) -> DensitySolution:
    return NeumannArcSolver(arc, ctx, nodes).solve(theta)


def boundary_residual(arc: Arc, theta: ArrayLike, ctx: WaveContext, nodes: int | None = None) -> float:
    """Relative residual of the boundary condition off the solve's own test space.

    The density computed with `nodes` is tested against twice as many test
    functions, integrated with twice as many quadrature nodes.
    """
    coarse = NeumannArcSolver(arc, ctx, nodes)
    fine = NeumannArcSolver(arc, ctx, 2 * coarse.nodes, factorize=False)

    a = coarse.coefficients(theta)[:, 0]
    b = fine.load(theta)[:, 0]
    residual = fine.matrix[:, : coarse.basis_size] @ a - b
    return float(np.linalg.norm(residual) / np.linalg.norm(b))

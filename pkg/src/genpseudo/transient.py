"""Numerical range and maximum transient energy growth for ``M u' = A u``.

Growth is measured in the energy ``E_N(t) = u(t)* N u(t)`` (``N = M`` by
default) and maximized over initial data with ``E_N(0) = 1``.  Three routes
compute it:

``eig``
    expand ``u(t) = sum_k a_k e_k exp(lambda_k t)`` in pencil eigenvectors and
    take the largest eigenvalue of the Hermitian pencil ``(Q(t), Q(0))`` with
    ``Q_kl(t) = e_k* N e_l exp((conj(lambda_k) + lambda_l) t)``;
``gsvd``
    the square of the largest B-singular value of ``(G V D(t), G V)`` where
    ``G* G = N``, ``V`` holds the eigenvectors and ``D(t) = diag(exp(lambda t))``;
``oracle``
    ``||G exp(t M^{-1} A) G^{-1}||^2`` with a scaling-and-squaring exponential.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg as sla

from . import gsvd, numcore
from .errors import NearDefective
from .pseudospectra import PencilProblem

GRAM_COND_MAX = 1e12
ROUTES = ("eig", "gsvd", "oracle")


@dataclass(frozen=True)
class NumericalRangeBoundary:
    thetas: np.ndarray
    support_points: np.ndarray
    support_values: np.ndarray

    def support_distance(self, z) -> np.ndarray:
        """Distance from ``z`` to the polygon cut out by the supporting half-planes.

        For a convex set the distance of an outside point is the largest excess
        ``Re(exp(-i theta) z) - h(theta)`` over all directions; with sampled
        directions this is a lower bound that is exact on the sampled normals.
        """
        z = np.atleast_1d(np.asarray(z, dtype=np.complex128))
        proj = np.real(np.exp(-1j * self.thetas)[None, :] * z[:, None])
        return np.maximum(0.0, np.max(proj - self.support_values[None, :], axis=1))

    def cross_products(self) -> np.ndarray:
        """z-components of consecutive edge cross products of the closed support polygon."""
        pts = self.support_points
        e1 = np.roll(pts, -1) - pts
        e2 = np.roll(pts, -2) - np.roll(pts, -1)
        return np.imag(np.conj(e1) * e2)


def numerical_range(p: PencilProblem, n_theta: int = 256) -> NumericalRangeBoundary:
    """Boundary of ``{u* A u : u* M u = 1}`` by a sweep of Hermitian pencils.

    For each ``theta`` in the half-open grid over ``[-pi, pi)`` the largest
    eigenpair of ``(exp(-i theta) A + exp(i theta) A*) e = 2 lambda M e`` gives
    the support value ``lambda`` and the boundary point ``e* A e``.
    """
    if n_theta < 3:
        raise ValueError("n_theta must be >= 3")
    thetas = -np.pi + 2.0 * np.pi * np.arange(n_theta) / n_theta
    pts = np.empty(n_theta, dtype=np.complex128)
    vals = np.empty(n_theta)
    for k, th in enumerate(thetas):
        rot = np.exp(-1j * th) * p.a
        pairs = numcore.geneig_hermitian(0.5 * (rot + rot.conj().T), p.m, factor=p.f)
        e = pairs.vectors[:, -1]
        vals[k] = pairs.lambdas[-1]
        pts[k] = np.vdot(e, p.a @ e)
    return NumericalRangeBoundary(thetas=thetas, support_points=pts, support_values=vals)


@dataclass(frozen=True)
class ModalBasis:
    """Pencil eigen-decomposition shared by every time of a growth sweep."""

    lambdas: np.ndarray
    vectors: np.ndarray
    energy_factor: np.ndarray
    gram: np.ndarray
    gram_cond: float


def modal_basis(p: PencilProblem, energy=None) -> ModalBasis:
    """Eigenpairs of ``(A, M)`` with unit M-norm vectors and their energy Gram matrix.

    Raises
    ------
    NearDefective
        When the Gram matrix ``(e_k* N e_l)`` has condition number above ``1e12``:
        the eigenvector expansion of the solution is then numerically invalid.
    """
    pairs = numcore.geneig(p.a, p.m, factor=p.f)
    g = p.f if energy is None else numcore.cholesky_upper(energy)
    gv = g @ pairs.vectors
    gram = gv.conj().T @ gv
    gram = 0.5 * (gram + gram.conj().T)
    cond = float(np.linalg.cond(gram))
    if not np.isfinite(cond) or cond > GRAM_COND_MAX:
        raise NearDefective(f"eigenvector Gram matrix has condition {cond:.3e} > {GRAM_COND_MAX:g}")
    return ModalBasis(lambdas=pairs.lambdas, vectors=pairs.vectors, energy_factor=g, gram=gram, gram_cond=cond)


def growth_factor_eig(p: PencilProblem, t: float, energy=None, basis: Optional[ModalBasis] = None):
    """Largest eigenvalue of ``Q(t) a = lambda Q(0) a`` and its coefficients (``a* Q(0) a = 1``)."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    basis = modal_basis(p, energy) if basis is None else basis
    d = np.exp(basis.lambdas * t)
    qt = (d.conj()[:, None] * basis.gram) * d[None, :]
    qt = 0.5 * (qt + qt.conj().T)
    pairs = numcore.geneig_hermitian(qt, basis.gram)
    return float(pairs.lambdas[-1]), pairs.vectors[:, -1]


def growth_factor_gsvd(p: PencilProblem, t: float, energy=None, basis: Optional[ModalBasis] = None) -> float:
    """Square of the largest B-singular value of ``(G V D(t), G V)``."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    basis = modal_basis(p, energy) if basis is None else basis
    b = basis.energy_factor @ basis.vectors
    a = b * np.exp(basis.lambdas * t)[None, :]
    mus = gsvd.b_singular_values(a, b)
    return float(mus[0]) ** 2


def growth_factor_oracle(p: PencilProblem, t: float, energy=None) -> float:
    """``sigma_max(G expm(t M^{-1} A) G^{-1})^2`` evaluated directly."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    if energy is None:
        prop = sla.expm(t * p.reduced)
    else:
        g = numcore.cholesky_upper(energy)
        gen = sla.cho_solve((p.f, False), p.a)
        prop = g @ sla.expm(t * gen)
        prop = sla.solve_triangular(g, prop.conj().T, trans="C", lower=False).conj().T
    return numcore.norm2(prop) ** 2


@dataclass(frozen=True)
class GrowthCurve:
    times: np.ndarray
    growth: np.ndarray
    route: str
    coefficients: Optional[np.ndarray] = None

    @property
    def peak(self):
        k = int(np.argmax(self.growth))
        return float(self.times[k]), float(self.growth[k])


def growth_curve(p: PencilProblem, times, route: str = "eig", energy=None) -> GrowthCurve:
    """Maximum energy amplification at each of ``times`` (nonnegative, ascending)."""
    if route not in ROUTES:
        raise ValueError(f"unknown route {route!r}; choose from {ROUTES}")
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size == 0:
        raise ValueError("times must be a nonempty 1-D list")
    if np.any(times < 0) or np.any(np.diff(times) < 0):
        raise ValueError("times must be nonnegative and ascending")
    growth = np.empty(times.size)
    coeffs = None
    if route == "oracle":
        for i, t in enumerate(times):
            growth[i] = growth_factor_oracle(p, t, energy)
    else:
        basis = modal_basis(p, energy)
        if route == "eig":
            coeffs = np.empty((times.size, p.n), dtype=np.complex128)
            for i, t in enumerate(times):
                growth[i], coeffs[i] = growth_factor_eig(p, t, basis=basis)
        else:
            for i, t in enumerate(times):
                growth[i] = growth_factor_gsvd(p, t, basis=basis)
    return GrowthCurve(times=times, growth=growth, route=route, coefficients=coeffs)

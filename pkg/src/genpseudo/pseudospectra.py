"""Epsilon-pseudospectra of matrices and Hermitian-positive-definite pencils.

Three flavours of the boundary function ``eps_b(z)`` are supported:

``standard``
    smallest singular value of ``A - z I``.
``generalized``
    smallest singular value of ``F^{-*} (A - z M) F^{-1}`` where ``F* F = M``;
    ``M`` is the metric of the domain and ``M^{-1}`` that of the range.
``weighted``
    smallest singular value of ``A - z M`` rescaled by
    ``(||M^{-1}|| / ||M||)^{1/2}``, which coincides with ``standard`` for
    ``M = c I``.

A point ``z`` belongs to the epsilon-pseudospectrum iff ``eps_b(z) <= eps``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Tuple

import numpy as np
import scipy.linalg as sla

from . import numcore
from .errors import ModeMismatch, NotPositiveDefinite, ShapeMismatch

MODES = ("standard", "generalized", "weighted")
STRATEGIES = ("full", "rank1", "residual")
SINGULAR_M_RTOL = 1e-13
SCAN_POINTS = 2049
_GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class PencilProblem:
    """The pair ``(A, M)``; ``m=None`` means the standard problem ``M = I``."""

    a: np.ndarray
    m: Optional[np.ndarray] = None
    f: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        a = numcore.as_matrix(self.a, "A")
        if a.shape[0] != a.shape[1]:
            raise ShapeMismatch(f"A must be square, got {a.shape}")
        if self.m is None:
            m = numcore.as_matrix(np.eye(a.shape[0]), "M")
        else:
            m = numcore.as_matrix(self.m, "M")
        if m.shape != a.shape:
            raise ShapeMismatch(f"A is {a.shape} but M is {m.shape}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "f", numcore.cholesky_upper(m))

    @classmethod
    def standard(cls, a) -> "PencilProblem":
        return cls(a, None)

    @property
    def n(self) -> int:
        return self.a.shape[0]

    @cached_property
    def is_standard(self) -> bool:
        return bool(np.array_equal(self.m, np.eye(self.n)))

    @cached_property
    def reduced(self) -> np.ndarray:
        """``F^{-*} A F^{-1}``, the equivalent standard matrix."""
        return numcore.congruence_solve(self.f, self.a)

    @cached_property
    def weight(self) -> float:
        """Factor turning ``sigma_min(A - zM)`` into the weighted eps."""
        sv = numcore.singular_values(self.m)
        if sv[-1] <= SINGULAR_M_RTOL * sv[0]:
            return 1.0 / sv[0]
        return float(np.sqrt(1.0 / (sv[0] * sv[-1])))

    def eigenvalues(self) -> np.ndarray:
        if self.is_standard:
            return numcore.eig_dense(self.a).lambdas
        return numcore.geneig(self.a, self.m, vectors=False, factor=self.f).lambdas

    def default_mode(self) -> str:
        return "standard" if self.is_standard else "generalized"


def _check_mode(p: PencilProblem, mode: Optional[str]) -> str:
    if mode is None:
        return p.default_mode()
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; choose from {MODES}")
    if mode == "standard" and not p.is_standard:
        raise ModeMismatch("mode 'standard' requires M = I; use 'generalized' or 'weighted'")
    return mode


def shifted(p: PencilProblem, z: complex, mode: str) -> np.ndarray:
    """The matrix whose smallest singular value (times ``p.weight`` when weighted) is ``eps_b(z)``."""
    if mode == "standard":
        return p.a - z * np.eye(p.n)
    if mode == "generalized":
        return numcore.congruence_solve(p.f, p.a - z * p.m)
    return p.a - z * p.m


def eps_b(p: PencilProblem, z: complex, mode: Optional[str] = None) -> float:
    """Boundary function of the pseudospectrum at ``z``."""
    mode = _check_mode(p, mode)
    if not np.isfinite(z):
        raise ValueError("z must be finite")
    smin = numcore.sigma_min(shifted(p, complex(z), mode))
    if mode == "weighted":
        return smin * p.weight
    return smin


def m_weighted_norm(p: PencilProblem, e: np.ndarray) -> float:
    """``max_u sqrt(u* E* M^{-1} E u / u* M u)``, i.e. ``||F^{-*} E F^{-1}||``."""
    return numcore.norm2(numcore.congruence_solve(p.f, np.asarray(e, dtype=np.complex128)))


@dataclass(frozen=True)
class PseudospectrumGrid:
    """``values[j, k]`` is eps_b at ``re_min + k*dre + 1j*(im_min + j*dim)``."""

    region: Tuple[float, float, float, float]
    nx: int
    ny: int
    mode: str
    values: np.ndarray

    @staticmethod
    def axes(region, nx, ny):
        re0, re1, im0, im1 = region
        return np.linspace(re0, re1, nx), np.linspace(im0, im1, ny)

    def points(self) -> np.ndarray:
        xs, ys = self.axes(self.region, self.nx, self.ny)
        return xs[None, :] + 1j * ys[:, None]

    def contains(self, eps: float) -> np.ndarray:
        return self.values <= eps


def grid(p: PencilProblem, region, nx: int, ny: int, mode: Optional[str] = None) -> PseudospectrumGrid:
    """Evaluate eps_b on an ``ny x nx`` lattice, row-major (imaginary part outer)."""
    mode = _check_mode(p, mode)
    if nx < 1 or ny < 1:
        raise ValueError("nx and ny must be >= 1")
    region = tuple(float(r) for r in region)
    if len(region) != 4 or region[0] > region[1] or region[2] > region[3]:
        raise ValueError(f"region must be (re_min, re_max, im_min, im_max) in order, got {region}")
    xs, ys = PseudospectrumGrid.axes(region, nx, ny)
    values = np.empty((ny, nx))
    for j, y in enumerate(ys):
        for k, x in enumerate(xs):
            values[j, k] = eps_b(p, complex(x, y), mode)
    return PseudospectrumGrid(region=region, nx=nx, ny=ny, mode=mode, values=values)


def optimal_perturbation(p: PencilProblem, z: complex, mode: Optional[str] = None):
    """Smallest rank-one perturbation placing ``z`` in the spectrum.

    Returns ``(E, eps)`` where ``eps = eps_b(z)``.  In standard mode
    ``E = -(A v - z v) v*`` with ``v`` the minimizing right singular vector,
    so ``||E|| = eps``.  In generalized mode ``E = -(A u - z M u) (M u)*``
    with ``u*Mu = 1``; its M-weighted norm (:func:`m_weighted_norm`) equals
    ``eps``.  In weighted mode ``E = -(A v - z M v) v*`` and ``||E||`` equals
    the unnormalized ``sigma_min(A - zM)``.
    """
    mode = _check_mode(p, mode)
    z = complex(z)
    dec = numcore.svd(shifted(p, z, mode))
    v = dec.v[:, -1]
    if mode == "standard":
        r = p.a @ v - z * v
        e = -np.outer(r, v.conj())
        eps = float(dec.sigma[-1])
    elif mode == "generalized":
        u = sla.solve_triangular(p.f, v, lower=False)
        w = p.m @ u
        r = p.a @ u - z * w
        e = -np.outer(r, w.conj())
        eps = float(dec.sigma[-1])
    else:
        r = p.a @ v - z * (p.m @ v)
        e = -np.outer(r, v.conj())
        eps = float(dec.sigma[-1]) * p.weight
    return e, eps


@dataclass(frozen=True)
class ScatterSample:
    eigenvalues: np.ndarray
    epsilon: float
    strategy: str
    seed: int
    count: int
    mode: str


def _unit(rng: np.random.Generator, n: int) -> np.ndarray:
    g = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return g / np.linalg.norm(g)


def _draw(p: PencilProblem, eps: float, rng: np.random.Generator, strategy: str, mode: str) -> np.ndarray:
    n = p.n
    if mode == "weighted":
        eps = eps / p.weight
    if mode == "generalized":
        # perturbations are measured in the M-weighted norm, ||F^{-*} H F^{-1}||
        f = p.f
        if strategy == "full":
            g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
            g /= numcore.norm2(g)
            h = eps * (f.conj().T @ g @ f)
        elif strategy == "rank1":
            u1 = sla.solve_triangular(f, _unit(rng, n), lower=False)
            u2 = sla.solve_triangular(f, _unit(rng, n), lower=False)
            h = eps * np.outer(p.m @ u2, (p.m @ u1).conj())
        else:
            u = sla.solve_triangular(f, _unit(rng, n), lower=False)
            w = p.m @ u
            zr = complex(u.conj() @ p.a @ u)
            r = p.a @ u - zr * w
            rnorm = np.linalg.norm(sla.solve_triangular(f, r, trans="C", lower=False))
            h = -(eps / rnorm) * np.outer(r, w.conj()) if rnorm > 0 else np.zeros((n, n))
        return numcore.geneig(p.a + h, p.m, vectors=False, factor=f).lambdas

    if strategy == "full":
        g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        h = (eps / numcore.norm2(g)) * g
    elif strategy == "rank1":
        v1 = _unit(rng, n)
        v2 = _unit(rng, n)
        h = eps * np.outer(v2, v1.conj())
    else:
        v = _unit(rng, n)
        mv = p.m @ v
        zr = complex(v.conj() @ p.a @ v) / complex(v.conj() @ mv)
        r = p.a @ v - zr * mv
        rnorm = np.linalg.norm(r)
        h = -(eps / rnorm) * np.outer(r, v.conj()) if rnorm > 0 else np.zeros((n, n))
    if mode == "standard":
        return numcore.eig_dense(p.a + h).lambdas
    return numcore.geneig(p.a + h, p.m, vectors=False, factor=p.f).lambdas


def perturbation_scatter(
    p: PencilProblem,
    epsilon: float,
    n_pert: int,
    seed: int = 0,
    strategy: str = "rank1",
    mode: Optional[str] = None,
) -> ScatterSample:
    """Eigenvalues of ``n_pert`` random perturbations of exact size ``epsilon``.

    Draw ``k`` uses the generator seeded with ``(seed, k)``, so any subset of
    draws can be reproduced independently of evaluation order.

    Strategies
    ----------
    full
        dense complex Gaussian ``E`` scaled to norm one, eigenvalues of ``A + eps E``.
    rank1
        ``A + eps v2 v1*`` with ``v1, v2`` uniform on the unit sphere
        (``w_i = M u_i`` with ``u_i* M u_i = 1`` in generalized mode).
    residual
        ``A - c (A v - zeta v) v*`` where ``zeta`` is the Rayleigh quotient of a
        random unit ``v`` and ``c`` rescales the residual term to size ``eps``.
    """
    mode = _check_mode(p, mode)
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}; choose from {STRATEGIES}")
    if epsilon < 0:
        raise ValueError("epsilon must be >= 0")
    if n_pert < 1:
        raise ValueError("n_pert must be >= 1")
    out = np.empty(n_pert * p.n, dtype=np.complex128)
    for k in range(n_pert):
        rng = np.random.default_rng([int(seed), k])
        out[k * p.n:(k + 1) * p.n] = _draw(p, float(epsilon), rng, strategy, mode)
    return ScatterSample(
        eigenvalues=out, epsilon=float(epsilon), strategy=strategy, seed=int(seed), count=n_pert, mode=mode
    )


@dataclass(frozen=True)
class TwoNormSplit:
    e1: np.ndarray
    e2: np.ndarray
    eps_crit: float
    mass_positive_definite: bool


def two_norm_split(p: PencilProblem, z: complex) -> TwoNormSplit:
    """Split the optimal pencil perturbation between ``A`` and ``M``.

    With ``E`` the unweighted optimal perturbation for ``A - zM``,
    ``E1 = E / (1 + |z|^2)`` and ``E2 = -conj(z) E / (1 + |z|^2)`` make ``z``
    an eigenvalue of ``(A + E1, M + E2)`` with
    ``||E1||^2 + ||E2||^2 = sigma_min(A - zM)^2 / (1 + |z|^2)``.
    ``mass_positive_definite`` reports whether the Hermitian part of
    ``M + E2`` is still positive definite.
    """
    z = complex(z)
    dec = numcore.svd(p.a - z * p.m)
    u = dec.v[:, -1]
    r = p.a @ u - z * (p.m @ u)
    e = -np.outer(r, u.conj()) / np.vdot(u, u).real
    scale = 1.0 + abs(z) ** 2
    e1 = e / scale
    e2 = -np.conj(z) * e / scale
    herm = p.m + 0.5 * (e2 + e2.conj().T)
    try:
        numcore.cholesky_upper(0.5 * (herm + herm.conj().T))
        pd = True
    except NotPositiveDefinite:
        pd = False
    return TwoNormSplit(e1=e1, e2=e2, eps_crit=float(dec.sigma[-1]) / np.sqrt(scale), mass_positive_definite=pd)


@dataclass(frozen=True)
class StabilityReport:
    radius: float
    argmin_y: float
    global_guarantee: bool = False
    unstable: bool = False


def _golden_min(fun, lo: float, hi: float, tol: float):
    c = hi - _GOLDEN * (hi - lo)
    d = lo + _GOLDEN * (hi - lo)
    fc, fd = fun(c), fun(d)
    while hi - lo > tol:
        if fc <= fd:
            hi, d, fd = d, c, fc
            c = hi - _GOLDEN * (hi - lo)
            fc = fun(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + _GOLDEN * (hi - lo)
            fd = fun(d)
    return (c, fc) if fc <= fd else (d, fd)


def stability_radius(p: PencilProblem, mode: Optional[str] = None) -> StabilityReport:
    """Distance to instability: the minimum of ``eps_b(iy)`` over real ``y``.

    A coarse scan of 2049 points over a bracket covering the spectrum's
    imaginary parts is refined by golden-section search around every local
    minimum.  The scan cannot certify the global minimum, so
    ``global_guarantee`` is always false.  Pencils with an eigenvalue in the
    closed right half-plane get radius 0 at that eigenvalue's imaginary part.
    """
    mode = _check_mode(p, mode)
    lam = p.eigenvalues()
    worst = int(np.argmax(lam.real))
    if lam[worst].real >= 0:
        return StabilityReport(radius=0.0, argmin_y=float(lam[worst].imag), unstable=True)

    # |y| beyond (spectral radius + ||A_F||) cannot beat the value at an eigenvalue's imaginary part
    scale = float(np.max(np.abs(lam))) + numcore.norm2(p.reduced)
    if mode == "weighted":
        scale *= float(np.linalg.cond(p.m))
    spread = float(lam.imag.max() - lam.imag.min())
    guard = spread + scale
    lo, hi = float(lam.imag.min()) - guard, float(lam.imag.max()) + guard

    def fun(y):
        return eps_b(p, 1j * y, mode)

    ys = np.union1d(np.linspace(lo, hi, SCAN_POINTS), lam.imag)
    vals = np.array([fun(y) for y in ys])
    best_y = float(ys[np.argmin(vals)])
    best = float(vals.min())
    tol = 1e-10 * max(scale, 1.0)
    for i in range(ys.size):
        left = vals[i - 1] if i > 0 else np.inf
        right = vals[i + 1] if i + 1 < ys.size else np.inf
        if vals[i] > left or vals[i] > right:
            continue
        a = ys[max(i - 1, 0)]
        b = ys[min(i + 1, ys.size - 1)]
        if b - a <= tol:
            continue
        y, v = _golden_min(fun, float(a), float(b), tol)
        if v < best:
            best, best_y = float(v), float(y)
    return StabilityReport(radius=best, argmin_y=best_y)

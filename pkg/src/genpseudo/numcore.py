"""Dense complex linear-algebra kernels.

Thin, convention-fixing wrappers around LAPACK (through numpy/scipy).  Every
routine returns freshly allocated complex128 arrays and applies a
deterministic phase convention to singular and eigen vectors: the first
component of largest magnitude in each vector is made real and nonnegative.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg as sla

from .errors import NoConvergence, NotHermitian, NotPositiveDefinite, ShapeMismatch

HERMITIAN_RTOL = 1e-12
PIVOT_RTOL = 1e-13


def as_matrix(a, name: str = "matrix") -> np.ndarray:
    """Validate and copy ``a`` into a read-only 2-D complex128 array."""
    arr = np.array(a, dtype=np.complex128, copy=True)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ShapeMismatch(f"{name} must be a non-empty 2-D matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains NaN or Inf entries")
    arr.setflags(write=False)
    return arr


def norm2(a: np.ndarray) -> float:
    """Largest singular value."""
    return float(np.linalg.norm(a, 2))


def _require_square(a: np.ndarray, name: str) -> None:
    if a.shape[0] != a.shape[1]:
        raise ShapeMismatch(f"{name} must be square, got shape {a.shape}")


def is_hermitian(h: np.ndarray, rtol: float = HERMITIAN_RTOL) -> bool:
    scale = np.max(np.abs(h))
    if scale == 0.0:
        return True
    return bool(np.max(np.abs(h - h.conj().T)) <= rtol * scale)


def _require_hermitian(h: np.ndarray, name: str) -> None:
    _require_square(h, name)
    if not is_hermitian(h):
        raise NotHermitian(f"{name} is not Hermitian to relative {HERMITIAN_RTOL:g}")


def fix_phases(vectors: np.ndarray) -> np.ndarray:
    """Per-column unit phases making each column's dominant entry real >= 0."""
    idx = np.argmax(np.abs(vectors), axis=0)
    lead = vectors[idx, np.arange(vectors.shape[1])]
    mag = np.abs(lead)
    phases = np.ones(vectors.shape[1], dtype=np.complex128)
    nz = mag > 0
    phases[nz] = lead[nz].conj() / mag[nz]
    return phases


@dataclass(frozen=True)
class SvdResult:
    u: np.ndarray
    sigma: np.ndarray
    v: np.ndarray


@dataclass(frozen=True)
class EigenPairs:
    lambdas: np.ndarray
    vectors: Optional[np.ndarray]
    normalization: str = "unit-2-norm"


def cholesky_upper(m) -> np.ndarray:
    """Upper-triangular ``F`` with ``F* F = m`` and positive real diagonal.

    Raises
    ------
    NotPositiveDefinite
        If a pivot falls below ``1e-13`` times the largest diagonal entry.
    """
    m = as_matrix(m, "M")
    _require_hermitian(m, "M")
    diag = np.real(np.diag(m))
    scale = np.max(np.abs(diag))
    if scale <= 0.0:
        raise NotPositiveDefinite("matrix has a zero diagonal")
    try:
        f = sla.cholesky(m, lower=False, check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefinite(f"Cholesky factorization failed: {exc}") from None
    pivots = np.real(np.diag(f)) ** 2
    if np.any(pivots <= PIVOT_RTOL * scale):
        k = int(np.argmin(pivots))
        raise NotPositiveDefinite(f"pivot {k} is {pivots[k]:.3e}, below {PIVOT_RTOL:g} * {scale:.3e}")
    f = np.triu(f)
    f.setflags(write=False)
    return f


def congruence_solve(f: np.ndarray, a: np.ndarray) -> np.ndarray:
    """Return ``F^{-*} a F^{-1}`` using two triangular solves."""
    left = sla.solve_triangular(f, a, trans="C", lower=False, check_finite=False)
    return sla.solve_triangular(f, left.conj().T, trans="C", lower=False, check_finite=False).conj().T


def svd(a) -> SvdResult:
    """Full SVD with descending ``sigma`` and deterministic column phases."""
    a = as_matrix(a, "A")
    try:
        u, s, vh = np.linalg.svd(a, full_matrices=True)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(str(exc)) from None
    v = vh.conj().T
    k = s.size
    ph = fix_phases(v)
    v = v * ph
    u = u.copy()
    u[:, :k] *= ph[:k]
    if u.shape[1] > k:
        u[:, k:] *= fix_phases(u[:, k:])
    return SvdResult(u=u, sigma=s, v=v)


def singular_values(a) -> np.ndarray:
    try:
        return np.linalg.svd(np.asarray(a, dtype=np.complex128), compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(str(exc)) from None


def sigma_min(a) -> float:
    return float(singular_values(a)[-1])


def eig_hermitian(h) -> EigenPairs:
    """Eigenpairs of a Hermitian matrix, eigenvalues ascending."""
    h = as_matrix(h, "H")
    _require_hermitian(h, "H")
    try:
        w, vec = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(str(exc)) from None
    vec = vec * fix_phases(vec)
    return EigenPairs(lambdas=w, vectors=vec, normalization="unit-2-norm")


def eig_dense(a, vectors: bool = False) -> EigenPairs:
    """All eigenvalues (with multiplicity) of a square matrix, in LAPACK order."""
    a = as_matrix(a, "A")
    _require_square(a, "A")
    try:
        if not vectors:
            return EigenPairs(lambdas=np.linalg.eigvals(a), vectors=None)
        w, vec = np.linalg.eig(a)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(str(exc)) from None
    vec = vec / np.linalg.norm(vec, axis=0)
    vec = vec * fix_phases(vec)
    return EigenPairs(lambdas=w, vectors=vec, normalization="unit-2-norm")


def geneig(a, m, vectors: bool = True, factor: Optional[np.ndarray] = None) -> EigenPairs:
    """Eigenpairs of ``A e = lambda M e`` for Hermitian positive definite ``M``.

    The pencil is reduced to ``F^{-*} A F^{-1}`` with the Cholesky factor of
    ``M``; eigenvectors are mapped back and normalized to ``e* M e = 1``.
    A precomputed ``factor`` skips the Cholesky step.
    """
    a = as_matrix(a, "A")
    _require_square(a, "A")
    f = cholesky_upper(m) if factor is None else factor
    if f.shape != a.shape:
        raise ShapeMismatch(f"A is {a.shape} but M is {f.shape}")
    reduced = congruence_solve(f, a)
    try:
        if not vectors:
            return EigenPairs(lambdas=np.linalg.eigvals(reduced), vectors=None, normalization="unit-M-norm")
        w, vp = np.linalg.eig(reduced)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(str(exc)) from None
    vp = vp / np.linalg.norm(vp, axis=0)
    e = sla.solve_triangular(f, vp, lower=False, check_finite=False)
    e = e * fix_phases(e)
    return EigenPairs(lambdas=w, vectors=e, normalization="unit-M-norm")


def geneig_hermitian(h, m, factor: Optional[np.ndarray] = None) -> EigenPairs:
    """Hermitian pencil ``H e = lambda M e``: real eigenvalues ascending, ``e* M e = 1``."""
    h = as_matrix(h, "H")
    _require_hermitian(h, "H")
    f = cholesky_upper(m) if factor is None else factor
    if f.shape != h.shape:
        raise ShapeMismatch(f"H is {h.shape} but M is {f.shape}")
    reduced = congruence_solve(f, h)
    # rounding in the solves breaks exact symmetry; H itself was checked above
    reduced = 0.5 * (reduced + reduced.conj().T)
    try:
        w, vp = np.linalg.eigh(reduced)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(str(exc)) from None
    e = sla.solve_triangular(f, vp, lower=False, check_finite=False)
    e = e * fix_phases(e)
    return EigenPairs(lambdas=w, vectors=e, normalization="unit-M-norm")

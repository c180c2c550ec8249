"""Generalized singular value decompositions.

Two generalizations of the SVD:

* the B-singular value decomposition ``U* A X = diag(alpha)``,
  ``V* B X = diag(beta)`` whose values are the roots ``mu >= 0`` of
  ``det(A*A - mu^2 B*B) = 0``;
* the (S, T)-singular value decomposition ``U^{-1} A V = diag(mu)`` with
  ``U`` S-unitary and ``V`` T-unitary.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from . import numcore
from .errors import ShapeMismatch

DEGENERATE_RTOL = 1e-12


class _AllNonnegative:
    """Marker for the degenerate value set ``{mu : mu >= 0}``."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "ALL_NONNEGATIVE"

    def __reduce__(self):
        return (_AllNonnegative, ())


ALL_NONNEGATIVE = _AllNonnegative()


@dataclass(frozen=True)
class StsvdResult:
    u: np.ndarray
    v: np.ndarray
    mus: np.ndarray


@dataclass(frozen=True)
class BsvResult:
    u: np.ndarray
    v: np.ndarray
    x: np.ndarray
    alphas: np.ndarray
    betas: np.ndarray
    rank_b: int
    degenerate: bool

    def values(self):
        """B-singular values, descending, or ``ALL_NONNEGATIVE``."""
        if self.degenerate:
            return ALL_NONNEGATIVE
        r = self.rank_b
        mus = self.alphas[:r] / self.betas[:r]
        return mus[np.argsort(-mus, kind="stable")]


def st_singular_values(a, s, t) -> StsvdResult:
    """(S, T)-singular value decomposition of an ``m x n`` matrix, ``m >= n``.

    With ``S = L L*`` and ``T = K K*`` the values are the singular values of
    ``L* A K^{-*}``; the factors are ``U = L^{-*} U_c`` and ``V = K^{-*} V_c``.
    """
    a = numcore.as_matrix(a, "A")
    m, n = a.shape
    if m < n:
        raise ShapeMismatch(f"(S,T)-SVD needs rows >= cols, got {a.shape}")
    s = numcore.as_matrix(s, "S")
    t = numcore.as_matrix(t, "T")
    if s.shape != (m, m) or t.shape != (n, n):
        raise ShapeMismatch(f"S must be {m}x{m} and T {n}x{n}, got {s.shape} and {t.shape}")
    # upper factors: S = fs* fs so L = fs*, likewise K = ft*
    fs = numcore.cholesky_upper(s)
    ft = numcore.cholesky_upper(t)
    core = sla.solve_triangular(ft, (fs @ a).conj().T, trans="C", lower=False).conj().T
    dec = numcore.svd(core)
    u = sla.solve_triangular(fs, dec.u, lower=False)
    v = sla.solve_triangular(ft, dec.v, lower=False)
    return StsvdResult(u=u, v=v, mus=dec.sigma.copy())


def _complete_unitary(cols: np.ndarray, m: int) -> np.ndarray:
    """Unitary ``m x m`` matrix whose leading columns re-orthonormalize ``cols``."""
    p = cols.shape[1]
    if p == 0:
        return np.eye(m, dtype=np.complex128)
    q, r = np.linalg.qr(cols, mode="complete")
    d = np.diag(r)
    ph = np.ones(p, dtype=np.complex128)
    nz = np.abs(d) > 0
    ph[nz] = d[nz] / np.abs(d[nz])
    q = q.copy()
    q[:, :p] *= ph
    return q


def _bsv_full_rank(a, b) -> BsvResult:
    # B = Q R with R nonsingular, so B*B = R*R and the pair reduces to svd(A R^{-1})
    m_a, n = a.shape
    qb, rb = np.linalg.qr(b, mode="reduced")
    core = sla.solve_triangular(rb, a.conj().T, trans="C", lower=False).conj().T
    dec = numcore.svd(core)
    x = sla.solve_triangular(rb, dec.v, lower=False)
    v = _complete_unitary(qb @ dec.v, b.shape[0])
    return BsvResult(
        u=dec.u,
        v=v,
        x=x,
        alphas=dec.sigma.copy(),
        betas=np.ones(n),
        rank_b=n,
        degenerate=False,
    )


def _bsv_split(a, b, rank_b: int) -> BsvResult:
    """Rank-deficient ``B``: Hermitian pencil ``(B*B, A*A + B*B)`` on the row space of ``[A; B]``."""
    m_a, n = a.shape
    m_b = b.shape[0]
    stacked = np.vstack([a, b])
    sv = numcore.svd(stacked)
    tol = max(stacked.shape) * np.finfo(float).eps * max(sv.sigma[0], np.finfo(float).tiny)
    k = int(np.sum(sv.sigma > tol))
    w = sv.v[:, :k]
    null = sv.v[:, k:]

    aw = a @ w
    bw = b @ w
    gram_b = bw.conj().T @ bw
    gram_b = 0.5 * (gram_b + gram_b.conj().T)
    split = aw.conj().T @ aw + gram_b
    split = 0.5 * (split + split.conj().T)
    pairs = numcore.geneig_hermitian(gram_b, split)
    # descending beta^2 / (alpha^2 + beta^2)
    y = pairs.vectors[:, ::-1]
    xr = w @ y
    x = np.hstack([xr, null])

    alphas = np.linalg.norm(a @ x, axis=0)
    betas = np.linalg.norm(b @ x, axis=0)
    betas[rank_b:] = 0.0
    alphas[k:] = 0.0

    amax = np.max(alphas) if alphas.size else 0.0
    a_tiny = alphas <= DEGENERATE_RTOL * amax
    degenerate = bool(np.any(a_tiny[rank_b:]))

    a_cols = [i for i in range(n) if not a_tiny[i]]
    ua = _complete_unitary((a @ x[:, a_cols]) / alphas[a_cols], m_a)
    # columns for vanishing alphas are arbitrary; take them from the complement
    taken = set(a_cols)
    slots = a_cols + [i for i in range(m_a) if i not in taken]
    u = np.empty((m_a, m_a), dtype=np.complex128)
    u[:, slots] = ua

    b_cols = list(range(rank_b))
    vb = _complete_unitary((b @ x[:, b_cols]) / betas[b_cols], m_b)
    return BsvResult(u=u, v=vb, x=x, alphas=alphas, betas=betas, rank_b=rank_b, degenerate=degenerate)


def bsv(a, b) -> BsvResult:
    """B-singular value decomposition of ``A`` (``m_a x n``, ``m_a >= n``) w.r.t. ``B`` (``m_b x n``).

    ``betas`` are nonincreasing with exactly ``rank_b`` positive entries.
    ``degenerate`` is set when some ``alpha_j`` with ``beta_j = 0`` vanishes
    (relative ``1e-12``), in which case every ``mu >= 0`` is a B-singular value.
    """
    a = numcore.as_matrix(a, "A")
    b = numcore.as_matrix(b, "B")
    m_a, n = a.shape
    if b.shape[1] != n:
        raise ShapeMismatch(f"A has {n} columns but B has {b.shape[1]}")
    if m_a < n:
        raise ShapeMismatch(f"B-singular values need rows(A) >= cols(A), got {a.shape}")
    rank_b = int(np.linalg.matrix_rank(b))
    if rank_b == n:
        return _bsv_full_rank(a, b)
    return _bsv_split(a, b, rank_b)


def b_singular_values(a, b):
    """Descending B-singular values of ``A``, or ``ALL_NONNEGATIVE`` when degenerate."""
    return bsv(a, b).values()

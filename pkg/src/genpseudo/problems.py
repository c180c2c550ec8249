"""Deterministic test-problem generators."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict

import numpy as np

from .pseudospectra import PencilProblem


def _rng(seed) -> np.random.Generator:
    return np.random.default_rng(seed)


def complex_normal(rng: np.random.Generator, shape) -> np.ndarray:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def random_unitary(n: int, seed) -> np.ndarray:
    """Haar-distributed unitary: QR of a complex Gaussian with R's diagonal phases absorbed."""
    rng = _rng(seed)
    q, r = np.linalg.qr(complex_normal(rng, (n, n)))
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_hpd(n: int, cond: float = 10.0, seed=0) -> np.ndarray:
    """Hermitian positive definite matrix with 2-norm condition number ``cond``."""
    q = random_unitary(n, seed)
    ev = np.logspace(0.0, np.log10(cond), n) if n > 1 else np.ones(1)
    h = (q * ev) @ q.conj().T
    return 0.5 * (h + h.conj().T)


def jordan(n: int, lam: complex = 0.0) -> PencilProblem:
    """Single Jordan block ``lam I + N`` with ones on the superdiagonal."""
    if n < 1:
        raise ValueError("n must be >= 1")
    a = lam * np.eye(n, dtype=np.complex128) + np.eye(n, k=1)
    return PencilProblem.standard(a)


def normal_from_spectrum(lambdas, seed=0) -> PencilProblem:
    """Normal matrix ``Q diag(lambdas) Q*`` with a seeded random unitary ``Q``."""
    lam = np.atleast_1d(np.asarray(lambdas, dtype=np.complex128))
    if lam.size == 0:
        raise ValueError("spectrum must be nonempty")
    q = random_unitary(lam.size, seed)
    a = (q * lam) @ q.conj().T
    if np.all(lam.imag == 0):
        a = 0.5 * (a + a.conj().T)
    return PencilProblem.standard(a)


def fem_advection_diffusion(n: int, c: float = 1.0, nu: float = 0.1) -> PencilProblem:
    """P1 finite elements for ``u_t + c u_x = nu u_xx`` on (0, 1), Dirichlet ends.

    ``n`` interior nodes, ``h = 1/(n+1)``.  The mass matrix is
    ``(h/6) tridiag(1, 4, 1)``, the stiffness ``(1/h) tridiag(-1, 2, -1)``
    and the advection matrix ``(1/2) tridiag(-1, 0, 1)``, giving
    ``A = -nu K + c C`` whose Hermitian part ``-nu K`` is negative definite.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    if nu <= 0:
        raise ValueError("nu must be positive")
    h = 1.0 / (n + 1)
    ones = np.ones(n - 1)
    mass = (h / 6.0) * (4.0 * np.eye(n) + np.diag(ones, 1) + np.diag(ones, -1))
    stiff = (1.0 / h) * (2.0 * np.eye(n) - np.diag(ones, 1) - np.diag(ones, -1))
    adv = 0.5 * (np.diag(ones, 1) - np.diag(ones, -1))
    a = -nu * stiff + c * adv
    return PencilProblem(a.astype(np.complex128), mass.astype(np.complex128))


def random_pencil(n: int, seed=0, cond_m: float = 10.0) -> PencilProblem:
    """Complex Gaussian ``A`` with a random HPD ``M`` of condition ``cond_m``."""
    rng = _rng([seed, 0])
    a = complex_normal(rng, (n, n))
    m = random_hpd(n, cond_m, seed=[seed, 1])
    return PencilProblem(a, m)


def random_stable_pencil(n: int, seed=0, cond_m: float = 10.0, margin: float = 0.1) -> PencilProblem:
    """Random pencil shifted so the rightmost eigenvalue has real part ``-margin``."""
    p = random_pencil(n, seed, cond_m)
    shift = np.max(p.eigenvalues().real) + margin
    return PencilProblem(p.a - shift * p.m, p.m)


@dataclass(frozen=True)
class ProblemSpec:
    name: str
    n: int
    params: Dict[str, complex] = field(default_factory=dict)


def _gen_jordan(spec: ProblemSpec, seed) -> PencilProblem:
    return jordan(spec.n, complex(spec.params.get("lam", 0.0)))


def _gen_normal(spec: ProblemSpec, seed) -> PencilProblem:
    rng = _rng([seed, 2])
    lam = complex_normal(rng, spec.n) - float(np.real(spec.params.get("shift", 0.0)))
    return normal_from_spectrum(lam, seed)


def _gen_fem(spec: ProblemSpec, seed) -> PencilProblem:
    c = float(np.real(spec.params.get("c", 1.0)))
    nu = float(np.real(spec.params.get("nu", 0.1)))
    return fem_advection_diffusion(spec.n, c, nu)


def _gen_random(spec: ProblemSpec, seed) -> PencilProblem:
    return random_pencil(spec.n, seed, float(np.real(spec.params.get("cond_m", 10.0))))


def _gen_random_stable(spec: ProblemSpec, seed) -> PencilProblem:
    return random_stable_pencil(
        spec.n,
        seed,
        float(np.real(spec.params.get("cond_m", 10.0))),
        float(np.real(spec.params.get("margin", 0.1))),
    )


GENERATORS: Dict[str, Callable[[ProblemSpec, int], PencilProblem]] = {
    "jordan": _gen_jordan,
    "normal": _gen_normal,
    "fem": _gen_fem,
    "random": _gen_random,
    "random_stable": _gen_random_stable,
}


def generate(spec: ProblemSpec, seed: int = 0) -> PencilProblem:
    try:
        gen = GENERATORS[spec.name]
    except KeyError:
        raise ValueError(f"unknown problem {spec.name!r}; choose from {sorted(GENERATORS)}") from None
    return gen(spec, seed)

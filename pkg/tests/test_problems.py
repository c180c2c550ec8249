import numpy as np
import pytest
from hypothesis import given, strategies as st

from genpseudo import numcore, problems, transient
from genpseudo import pseudospectra as ps


def test_jordan():
    np.testing.assert_array_equal(problems.jordan(1, 2).a, [[2]])
    np.testing.assert_array_equal(problems.jordan(2, 0).a, [[0, 1], [0, 0]])
    lam = numcore.eig_dense(problems.jordan(3, 1j).a).lambdas
    np.testing.assert_allclose(lam, 1j)
    with pytest.raises(ValueError):
        problems.jordan(0)


def test_normal_from_spectrum():
    np.testing.assert_array_equal(problems.normal_from_spectrum([0]).a, [[0]])
    p = problems.normal_from_spectrum([1, 2, 3], seed=1)
    assert ps.eps_b(p, 0) == pytest.approx(1.0, abs=1e-10)
    with pytest.raises(ValueError):
        problems.normal_from_spectrum([])


@given(st.integers(0, 10_000), st.integers(1, 10))
def test_normal_and_hermitian(seed, n):
    rng = np.random.default_rng(seed)
    lam = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    a = problems.normal_from_spectrum(lam, seed).a
    assert np.linalg.norm(a.conj().T @ a - a @ a.conj().T) <= 1e-12 * max(1.0, np.max(np.abs(lam)) ** 2) * n
    h = problems.normal_from_spectrum(lam.real, seed).a
    assert np.max(np.abs(h - h.conj().T)) <= 1e-12


def test_seed_determinism():
    a1 = problems.random_pencil(5, seed=3)
    a2 = problems.random_pencil(5, seed=3)
    np.testing.assert_array_equal(a1.a, a2.a)
    np.testing.assert_array_equal(a1.m, a2.m)
    assert not np.array_equal(a1.a, problems.random_pencil(5, seed=4).a)


def test_random_hpd_condition():
    m = problems.random_hpd(6, 1e4, seed=2)
    assert np.linalg.cond(m) == pytest.approx(1e4, rel=1e-6)


def test_random_stable_margin():
    p = problems.random_stable_pencil(6, seed=1, margin=0.2)
    assert np.max(p.eigenvalues().real) == pytest.approx(-0.2, abs=1e-10)


class TestFem:
    def test_entries(self):
        p = problems.fem_advection_diffusion(3, c=1.0, nu=1.0)
        h = 0.25
        np.testing.assert_allclose(p.m[0, :2], [4 * h / 6, h / 6])
        # A = -K + C with K = (1/h)[-1, 2, -1], C = (1/2)[-1, 0, 1]
        np.testing.assert_allclose(p.a[1], [1 / h - 0.5, -2 / h, 1 / h + 0.5])

    def test_pure_diffusion(self):
        p = problems.fem_advection_diffusion(2, c=0.0, nu=1.0)
        np.testing.assert_allclose(p.a, p.a.conj().T)
        lam = p.eigenvalues()
        assert np.all(np.abs(lam.imag) < 1e-12) and np.all(lam.real < 0)

    def test_pure_diffusion_range_on_negative_axis(self):
        p = problems.fem_advection_diffusion(6, c=0.0, nu=0.3)
        nr = transient.numerical_range(p, 32)
        assert np.all(np.abs(nr.support_points.imag) <= 1e-10)
        assert np.all(nr.support_points.real < 0)

    @pytest.mark.parametrize("n", [2, 17, 128, 512])
    def test_mass_is_positive_definite(self, n):
        numcore.cholesky_upper(problems.fem_advection_diffusion(n).m)

    def test_hermitian_part_negative_definite(self):
        p = problems.fem_advection_diffusion(10, c=20.0, nu=0.05)
        herm = 0.5 * (p.a + p.a.conj().T)
        assert np.max(np.linalg.eigvalsh(herm)) < 0

    def test_errors(self):
        with pytest.raises(ValueError):
            problems.fem_advection_diffusion(1)
        with pytest.raises(ValueError):
            problems.fem_advection_diffusion(4, nu=0)


def test_generate_registry():
    p = problems.generate(problems.ProblemSpec("jordan", 3, {"lam": -1}), 0)
    np.testing.assert_array_equal(np.diag(p.a), -1)
    with pytest.raises(ValueError):
        problems.generate(problems.ProblemSpec("nope", 3))

import numpy as np
import pytest
from scipy.linalg import expm

from hypodecay import (
    eigendecompose,
    exact_solution,
    propagator_matrix,
    rk4_oracle,
    time_grid,
    verify_bounds,
)
from hypodecay.rate_family import FamilyBound
from .conftest import make_stable_system


class TestExactSolution:
    def test_diagonal_system(self):
        data = eigendecompose(np.diag([1.0, 2.0]))
        ts = np.array([0.0, 0.5, 1.0])
        sol = exact_solution(data, [1.0, 1.0], ts)
        expected = np.stack([np.exp(-ts), np.exp(-2 * ts)], axis=1)
        assert np.allclose(sol, expected, rtol=1e-14)

    def test_initial_condition(self, mat_complex_pair):
        data = eigendecompose(mat_complex_pair)
        f0 = np.array([0.3, -0.7 + 0.2j])
        sol = exact_solution(data, f0, [0.0])
        assert np.allclose(sol[0], f0, atol=1e-14)

    def test_satisfies_ode(self, mat_complex_pair):
        data = eigendecompose(mat_complex_pair)
        f0 = np.array([1.0, 1.0j]) / np.sqrt(2)
        h = 1e-6
        t = 0.8
        sol = exact_solution(data, f0, [t - h, t, t + h])
        deriv = (sol[2] - sol[0]) / (2 * h)
        assert np.allclose(deriv, -mat_complex_pair @ sol[1], atol=1e-8)


class TestPropagatorMatrix:
    def test_matches_matrix_exponential(self):
        rng = np.random.default_rng(14)
        for _ in range(10):
            c = make_stable_system(rng, 3)
            data = eigendecompose(c)
            for t in (0.0, 0.3, 2.0):
                assert np.allclose(propagator_matrix(data, t), expm(-t * c),
                                   atol=1e-11)

    def test_semigroup(self, mat_real_distinct):
        data = eigendecompose(mat_real_distinct)
        g1 = propagator_matrix(data, 0.7)
        g2 = propagator_matrix(data, 1.1)
        assert np.allclose(g1 @ g2, propagator_matrix(data, 1.8), atol=1e-13)


class TestRK4Oracle:
    def test_against_exact(self):
        rng = np.random.default_rng(23)
        for _ in range(5):
            c = make_stable_system(rng, 3)
            data = eigendecompose(c)
            f0 = rng.normal(size=3) + 1j * rng.normal(size=3)
            f0 /= np.linalg.norm(f0)
            ts = np.linspace(0.0, 4.0, 9)
            a = exact_solution(data, f0, ts)
            b = rk4_oracle(c, f0, ts, dt=1e-3)
            rel = np.linalg.norm(a - b, axis=1) / np.linalg.norm(a, axis=1)
            assert rel.max() < 1e-9

    def test_requires_sorted_times(self):
        with pytest.raises(ValueError):
            rk4_oracle(np.eye(2), [1.0, 0.0], [1.0, 0.5])

    def test_lands_exactly_on_requested_times(self):
        # steps are shortened at the end, not rounded, so sample times that
        # are not multiples of dt still come out right
        c = np.array([[0.9]])
        ts = np.array([0.0, 0.123456, 1.0101])
        out = rk4_oracle(c, [1.0], ts, dt=1e-3)
        assert np.allclose(out[:, 0], np.exp(-0.9 * ts), rtol=1e-12)


class TestVerifyBounds:
    def test_upper_bound_pass_and_fail(self):
        ts = np.linspace(0.0, 5.0, 50)
        norms = np.exp(-0.5 * ts)
        good = FamilyBound(rate=0.4, constant=1.0, direction="upper",
                           beta0=0.0, beta_tilde=0.0, kappa=1.0)
        bad = FamilyBound(rate=0.6, constant=1.0, direction="upper",
                          beta0=0.0, beta_tilde=0.0, kappa=1.0)
        assert verify_bounds(ts, norms, [good]).passed
        check = verify_bounds(ts, norms, [bad])
        assert not check.passed
        assert check.worst > 0.1

    def test_lower_bound(self):
        ts = np.linspace(0.0, 5.0, 50)
        norms = np.exp(-0.5 * ts)
        good = FamilyBound(rate=0.6, constant=1.0, direction="lower",
                           beta0=0.0, beta_tilde=0.0, kappa=1.0)
        assert verify_bounds(ts, norms, [good]).passed

    def test_norm0_scaling(self):
        ts = np.linspace(0.0, 2.0, 10)
        norms = 5.0 * np.exp(-0.3 * ts)
        fb = FamilyBound(rate=0.3, constant=1.0, direction="upper",
                         beta0=0.0, beta_tilde=0.0, kappa=1.0)
        assert verify_bounds(ts, norms, [fb], norm0=5.0).passed


class TestTimeGrid:
    def test_contains_inserts_and_endpoints(self):
        ts = time_grid(10.0, n=100, insert=(np.pi,))
        assert ts[0] == 0.0
        assert ts[-1] == 10.0
        assert np.pi in ts
        assert np.all(np.diff(ts) > 0)

    def test_resolves_early_times(self):
        ts = time_grid(100.0, n=400)
        assert ts[ts > 0].min() < 1e-3

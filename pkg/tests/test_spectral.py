import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hypodecay import (
    Defective2D,
    MatrixFormatError,
    ZeroVector,
    alpha_overlap,
    as_complex_matrix,
    canonical_2d_form,
    classify_stability,
    eigendecompose,
)
from .conftest import make_2x2_with_overlap


class TestAsComplexMatrix:
    def test_accepts_nested_lists(self):
        a = as_complex_matrix([[1, 2], [3, 4]])
        assert a.dtype == complex and a.shape == (2, 2)

    def test_rejects_non_square(self):
        with pytest.raises(MatrixFormatError):
            as_complex_matrix(np.ones((2, 3)))

    def test_rejects_vector(self):
        with pytest.raises(MatrixFormatError):
            as_complex_matrix([1.0, 2.0])

    def test_rejects_nan(self):
        with pytest.raises(MatrixFormatError):
            as_complex_matrix([[np.nan, 0.0], [0.0, 1.0]])

    def test_accepts_non_contiguous(self):
        a = np.arange(16, dtype=complex).reshape(4, 4)
        as_complex_matrix(a.T[:2, :2])


class TestEigendecompose:
    def test_diagonal_matrix_sorted(self):
        data = eigendecompose(np.diag([3.0, 1.0, 2.0]))
        assert np.allclose(data.eigenvalues, [1.0, 2.0, 3.0])
        assert not data.defective

    def test_biorthonormal(self, mat_triangular):
        data = eigendecompose(mat_triangular)
        n = data.n
        # W* V = I and columns of W are unit vectors
        assert np.allclose(data.left_vectors.conj().T @ data.right_vectors,
                           np.eye(n), atol=1e-12)
        assert np.allclose(np.linalg.norm(data.left_vectors, axis=0), 1.0)

    def test_reconstruction(self, mat_complex_pair):
        data = eigendecompose(mat_complex_pair)
        rebuilt = (data.right_vectors * data.eigenvalues) @ data.left_vectors.conj().T
        assert np.allclose(rebuilt, mat_complex_pair, atol=1e-12)

    def test_equal_real_parts_ordered_by_imag(self, mat_complex_pair):
        lam = eigendecompose(mat_complex_pair).eigenvalues
        assert lam[0].imag < lam[1].imag
        assert abs(lam[0].real - lam[1].real) < 1e-12

    def test_defective_flagged(self):
        data = eigendecompose(np.array([[1.0, 1.0], [0.0, 1.0]]))
        assert data.defective
        assert np.isnan(data.left_vectors).all()

    def test_adjoint_eigenvectors(self, mat_real_distinct):
        data = eigendecompose(mat_real_distinct)
        for j in range(2):
            w = data.left_vectors[:, j]
            lhs = mat_real_distinct.conj().T @ w
            assert np.allclose(lhs, np.conj(data.eigenvalues[j]) * w, atol=1e-12)


class TestClassifyStability:
    def test_hypocoercive_example(self, mat_complex_pair):
        rep = classify_stability(eigendecompose(mat_complex_pair))
        assert rep.mu == pytest.approx(0.5, abs=1e-12)
        assert rep.mu_s == pytest.approx(0.0, abs=1e-12)
        assert rep.nu_s == pytest.approx(1.0, abs=1e-12)
        assert rep.positive_stable and not rep.coercive
        assert rep.hypocoercive

    def test_coercive_example(self):
        rep = classify_stability(eigendecompose(np.diag([1.0, 2.0])))
        assert rep.coercive and not rep.hypocoercive

    def test_unstable_example(self):
        rep = classify_stability(eigendecompose(np.diag([-1.0, 2.0])))
        assert not rep.positive_stable


class TestAlphaOverlap:
    @given(st.integers(0, 2 ** 32 - 1), st.floats(1e-3, 1e3))
    @settings(max_examples=25, deadline=None)
    def test_bounds_and_scale_invariance(self, seed, scale):
        rng = np.random.default_rng(seed)
        v1 = rng.normal(size=3) + 1j * rng.normal(size=3)
        v2 = rng.normal(size=3) + 1j * rng.normal(size=3)
        a = alpha_overlap(v1, v2)
        assert 0.0 <= a <= 1.0
        assert alpha_overlap(scale * v1, v2) == pytest.approx(a, rel=1e-12)

    def test_parallel_is_one(self):
        v = np.array([1.0, 2.0j])
        assert alpha_overlap(v, 3j * v) == pytest.approx(1.0, abs=1e-15)

    def test_zero_vector_rejected(self):
        with pytest.raises(ZeroVector):
            alpha_overlap(np.zeros(2), np.ones(2))


class TestCanonical2DForm:
    def test_alpha_complex_pair(self, mat_complex_pair):
        form = canonical_2d_form(eigendecompose(mat_complex_pair))
        assert form.alpha == pytest.approx(0.5, abs=1e-12)

    def test_alpha_real_distinct(self, mat_real_distinct):
        form = canonical_2d_form(eigendecompose(mat_real_distinct))
        assert form.alpha == pytest.approx(0.6, abs=1e-12)

    def test_unitary_and_similarity(self, mat_complex_pair):
        form = canonical_2d_form(eigendecompose(mat_complex_pair))
        u = form.unitary
        assert np.allclose(u @ u.conj().T, np.eye(2), atol=1e-12)
        # Sort by imaginary part: the real parts of this conjugate pair agree
        # only to rounding, which makes lexicographic complex sort unstable.
        got = np.linalg.eigvals(form.matrix)
        want = form.eigenvalues
        assert np.allclose(got[np.argsort(got.imag)],
                           want[np.argsort(want.imag)], atol=1e-12)

    def test_adjoint_eigenvectors_in_standard_position(self, mat_real_distinct):
        form = canonical_2d_form(eigendecompose(mat_real_distinct))
        assert np.allclose(form.w1, [1.0, 0.0], atol=1e-12)
        assert form.w2[0] == pytest.approx(form.alpha, abs=1e-12)
        assert form.w2[1].real == pytest.approx(
            np.sqrt(1 - form.alpha ** 2), abs=1e-12)
        assert abs(form.w2[0].imag) < 1e-12

    def test_overlap_same_for_both_eigenvector_families(self):
        # in dimension two the right and adjoint eigenvector overlaps agree
        rng = np.random.default_rng(11)
        for _ in range(50):
            c, _, _ = make_2x2_with_overlap(rng)
            data = eigendecompose(c)
            a_right = alpha_overlap(data.right_vectors[:, 0], data.right_vectors[:, 1])
            a_left = alpha_overlap(data.left_vectors[:, 0], data.left_vectors[:, 1])
            assert a_right == pytest.approx(a_left, abs=5e-12)

    def test_constructed_overlap_recovered(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            c, _, alpha = make_2x2_with_overlap(rng)
            form = canonical_2d_form(eigendecompose(c))
            assert form.alpha == pytest.approx(alpha, abs=1e-9)

    def test_defective_rejected(self):
        with pytest.raises(Defective2D):
            canonical_2d_form(eigendecompose(np.array([[1.0, 1.0], [0.0, 1.0]])))

    def test_wrong_size_rejected(self):
        with pytest.raises(MatrixFormatError):
            canonical_2d_form(eigendecompose(np.eye(3)))

    def test_rate_splittings(self, mat_real_distinct):
        form = canonical_2d_form(eigendecompose(mat_real_distinct))
        assert form.mu == pytest.approx(1 / 20, abs=1e-12)
        assert form.nu == pytest.approx(17 / 20, abs=1e-12)
        assert form.mu_s == pytest.approx(-1 / 20, abs=1e-12)
        assert form.nu_s == pytest.approx(19 / 20, abs=1e-12)
        assert form.gamma == pytest.approx(16 / 20, abs=1e-12)
        assert form.delta == pytest.approx(0.0, abs=1e-12)

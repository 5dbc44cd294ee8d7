import math

import numpy as np
import pytest

from radial.errors import IncompatibleOperandsError, InvalidArgumentError, NotSymmetricError, UnsupportedRealizationError
from radial.functions import exponential, t_gaussian
from radial.grid import make_grid, sample
from radial.opmatrix import (
    OperatorMatrix,
    build_matrix,
    commutator_norm,
    eigenvalues,
    jacobi_eigenvalues,
    min_eigenvalue,
    quadratic_form,
    symmetry_defect,
    write_matrix_csv,
)
from radial.radialops import OperatorKind, OperatorSpec, Realization, zplus_discrete


def random_symmetric(n, seed=42):
    A = np.random.default_rng(seed).standard_normal((n, n))
    return A + A.T


class TestJacobi:
    @pytest.mark.parametrize("n", [1, 2, 9, 16])
    def test_matches_lapack(self, n):
        A = random_symmetric(n)
        np.testing.assert_allclose(jacobi_eigenvalues(A), np.linalg.eigvalsh(A), atol=1e-10)

    def test_diagonal_input(self):
        np.testing.assert_array_equal(jacobi_eigenvalues(np.diag([3.0, -1.0, 2.0])), [-1.0, 2.0, 3.0])

    def test_deterministic(self):
        A = random_symmetric(12)
        np.testing.assert_array_equal(jacobi_eigenvalues(A), jacobi_eigenvalues(A))

    def test_input_untouched(self):
        A = random_symmetric(5)
        before = A.copy()
        jacobi_eigenvalues(A)
        np.testing.assert_array_equal(A, before)


class TestOperatorMatrix:
    def test_columns_are_images_of_basis_vectors(self):
        grid = make_grid(5.0, 16)
        M = build_matrix(OperatorSpec(OperatorKind.ZPLUS), grid)
        chi = sample(t_gaussian(), grid)
        np.testing.assert_allclose(M.entries @ chi.values, zplus_discrete(chi).values, atol=1e-12)
        assert M.name == "zplus/discrete-spectral"

    def test_shape(self):
        with pytest.raises(InvalidArgumentError):
            OperatorMatrix(make_grid(1.0, 3), np.eye(4))

    def test_finite(self):
        entries = np.eye(3)
        entries[0, 1] = np.nan
        with pytest.raises(InvalidArgumentError):
            OperatorMatrix(make_grid(1.0, 3), entries)

    def test_no_matrix_for_quadrature(self):
        with pytest.raises(UnsupportedRealizationError):
            build_matrix(OperatorSpec(OperatorKind.ZPLUS, Realization.QUADRATURE), make_grid(1.0, 8))


class TestPositivity:
    @pytest.mark.parametrize("R, N", [(1.0, 64), (10.0, 65)])
    def test_zplus_spectrum(self, R, N):
        M = build_matrix(OperatorSpec(OperatorKind.ZPLUS), make_grid(R, N))
        assert symmetry_defect(M) < 1e-12
        values = eigenvalues(M)
        assert math.isclose(values[0], math.pi / R, rel_tol=1e-8)
        np.testing.assert_allclose(values, np.arange(1, N + 1) * math.pi / R, rtol=1e-8)

    def test_pr2_spectrum(self):
        M = build_matrix(OperatorSpec(OperatorKind.PR2), make_grid(1.0, 32))
        assert symmetry_defect(M) < 1e-10
        assert math.isclose(min_eigenvalue(M), (math.pi / 1.0) ** 2, rel_tol=1e-9)

    def test_quadratic_forms(self):
        grid = make_grid(1.0, 256)
        M = build_matrix(OperatorSpec(OperatorKind.ZPLUS), grid)
        rng = np.random.default_rng(42)
        for _ in range(10):
            chi = sample(lambda r: rng.standard_normal(r.shape), grid)
            assert quadratic_form(M, chi) >= 0.0

    def test_quadratic_form_of_exponential(self):
        grid = make_grid(10.0, 128)
        chi = sample(exponential(1.0), grid)
        M = build_matrix(OperatorSpec(OperatorKind.ZPLUS), grid)
        expected = grid.spacing * float(chi.values @ zplus_discrete(chi).values)
        assert math.isclose(quadratic_form(M, chi), expected, rel_tol=1e-10)

    def test_quadratic_form_grid(self):
        M = build_matrix(OperatorSpec(OperatorKind.ZPLUS), make_grid(1.0, 8))
        with pytest.raises(IncompatibleOperandsError):
            quadratic_form(M, sample(exponential(1.0), make_grid(2.0, 8)))

    def test_size_limit(self):
        M = OperatorMatrix(make_grid(1.0, 1025), np.zeros((1025, 1025)))
        with pytest.raises(InvalidArgumentError):
            eigenvalues(M)

    def test_not_symmetric(self):
        M = build_matrix(OperatorSpec.default_for(OperatorKind.DTILDE_FD), make_grid(1.0, 16))
        with pytest.raises(NotSymmetricError):
            eigenvalues(M)
        with pytest.raises(np.linalg.LinAlgError):
            min_eigenvalue(OperatorMatrix(make_grid(1.0, 2), [[0.0, 1.0], [0.0, 0.0]]))

    def test_dtilde_is_antisymmetric(self):
        M = build_matrix(OperatorSpec.default_for(OperatorKind.DTILDE_FD), make_grid(1.0, 16))
        np.testing.assert_allclose(M.flat, -M.flat.T, atol=1e-10)


class TestCommutator:
    def test_identity_commutes(self):
        assert commutator_norm(OperatorMatrix(make_grid(1.0, 8), np.eye(8))) == 0.0

    def test_zplus_does_not_commute_with_r(self):
        M = build_matrix(OperatorSpec(OperatorKind.ZPLUS), make_grid(1.0, 16))
        assert commutator_norm(M) > 0.0


class TestCsv:
    def test_header_and_entries(self, tmp_path):
        grid = make_grid(2.0, 4)
        M = build_matrix(OperatorSpec(OperatorKind.ZPLUS_INV), grid)
        path = tmp_path / "zinv.csv"
        write_matrix_csv(M, path)
        lines = path.read_text().splitlines()
        assert lines[0] == "# N=4 R=2 op=zinv/discrete-spectral"
        np.testing.assert_array_equal(np.loadtxt(path, delimiter=","), M.entries)

import math

import numpy as np
import pytest

from radial import specfun
from radial.errors import IncompatibleOperandsError, InvalidArgumentError, SingularPointError, UnsupportedDecayError
from radial.functions import cosine, exponential, gaussian, parse_descriptor, sine, step
from radial.grid import SampledFunction, chi_from_phi, make_grid, sample
from radial.radialops import (
    OperatorKind,
    OperatorSpec,
    Realization,
    apply_discrete,
    deficiency_check,
    dtilde_fd,
    fd_second_derivative,
    pplus_apply,
    pplus_quad,
    pr2_apply,
    pr2_quad,
    shift_demo,
    spectral_second_derivative,
    zinv_apply,
    zinv_fractional,
    zinv_kernel,
    zinv_kernel_matrix,
    zinv_quad,
    zplus_discrete,
    zplus_quad,
)
from radial.transforms import dst_apply


@pytest.fixture
def grid():
    return make_grid(10.0, 255)


@pytest.fixture
def chi(grid):
    return sample(parse_descriptor("texp:1"), grid)


class TestOperatorSpec:
    def test_defaults(self):
        spec = OperatorSpec(OperatorKind.ZPLUS)
        assert spec.realization is Realization.DISCRETE_SPECTRAL
        assert spec.label == "zplus/discrete-spectral"

    def test_strings_are_coerced(self):
        spec = OperatorSpec("zinv", "kernel")
        assert spec.kind is OperatorKind.ZPLUS_INV and spec.realization is Realization.KERNEL

    def test_invalid_pair(self):
        with pytest.raises(InvalidArgumentError):
            OperatorSpec(OperatorKind.DTILDE_FD)
        with pytest.raises(InvalidArgumentError):
            OperatorSpec(OperatorKind.ZPLUS, Realization.KERNEL)

    def test_default_for(self):
        assert OperatorSpec.default_for("dtilde-fd").realization is Realization.FINITE_DIFFERENCE
        assert OperatorSpec.default_for("pr2").realization is Realization.DISCRETE_SPECTRAL

    def test_phi_representation(self):
        assert OperatorSpec(OperatorKind.PPLUS).phi_representation
        assert not OperatorSpec(OperatorKind.ZPLUS).phi_representation


class TestDiscreteIdentities:
    def test_inverse(self, chi):
        np.testing.assert_allclose(zinv_apply(zplus_discrete(chi)).values, chi.values, atol=1e-12)
        np.testing.assert_allclose(zplus_discrete(zinv_apply(chi)).values, chi.values, atol=1e-12)

    def test_square_is_spectral_second_derivative(self, chi):
        twice = zplus_discrete(zplus_discrete(chi))
        np.testing.assert_allclose(twice.values, -spectral_second_derivative(chi).values, atol=1e-10)

    def test_pplus_squared_is_pr2(self, grid):
        phi = sample(exponential(1.0), grid)
        np.testing.assert_allclose(pplus_apply(pplus_apply(phi)).values, pr2_apply(phi).values, atol=1e-9)

    def test_pplus_conjugates_zplus(self, grid):
        phi = sample(exponential(1.0), grid)
        np.testing.assert_allclose(chi_from_phi(pplus_apply(phi)).values, zplus_discrete(chi_from_phi(phi)).values, atol=1e-11)

    @pytest.mark.parametrize("m", [1, 2, 5])
    def test_eigenfunctions(self, grid, m):
        k = m * math.pi / grid.R
        mode = sample(sine(k), grid)
        np.testing.assert_allclose(zplus_discrete(mode).values, k * mode.values, atol=1e-12)

    def test_fd_second_derivative_of_sine(self):
        g = make_grid(math.pi, 1023)
        mode = sample(sine(1.0), g)
        np.testing.assert_allclose(fd_second_derivative(mode).values, -mode.values, atol=1e-5)

    def test_dtilde_on_phi(self):
        # (1/r) d/dr (r phi) for phi = exp(-r) is (1/r - 1) exp(-r)
        g = make_grid(10.0, 1023)
        phi = sample(exponential(1.0), g)
        r = g.nodes
        interior = slice(100, -5)
        np.testing.assert_allclose(dtilde_fd(phi).values[interior], ((1 / r - 1) * np.exp(-r))[interior], atol=1e-4)

    def test_columns(self, grid):
        X = np.random.default_rng(42).standard_normal((grid.N, 3))
        Y = apply_discrete(OperatorKind.ZPLUS, grid, X)
        np.testing.assert_allclose(Y[:, 1], apply_discrete(OperatorKind.ZPLUS, grid, X[:, 1]), atol=1e-12)

    def test_row_count(self, grid):
        with pytest.raises(IncompatibleOperandsError):
            apply_discrete(OperatorKind.ZPLUS, grid, np.zeros(grid.N + 1))

    def test_momentum_input(self, chi):
        with pytest.raises(IncompatibleOperandsError):
            zplus_discrete(dst_apply(chi))


class TestQuadrature:
    @pytest.mark.parametrize("r", [0.5, 1.0, 2.0])
    def test_zplus_sine_eigenfunction(self, r):
        assert abs(zplus_quad(sine(2.0), r) - 2.0 * math.sin(2.0 * r)) < 1e-5

    def test_zplus_cosine(self):
        # -(2/pi) [sin 1 Ci(1) - cos 1 Si(1)]
        expected = -(2 / math.pi) * (math.sin(1.0) * specfun.ci(1.0) - math.cos(1.0) * specfun.si(1.0))
        assert math.isclose(expected, 0.1446752, abs_tol=1e-7)
        assert abs(zplus_quad(cosine(1.0), 1.0) - expected) < 1e-5

    def test_zinv_sine(self):
        assert abs(zinv_quad(sine(1.0), 1.0) - math.sin(1.0)) < 1e-3

    @pytest.mark.parametrize("r", [0.5, 1.0, 2.0])
    def test_zinv_kernel_matches_fractional(self, r):
        f = exponential(1.0)
        assert abs(zinv_quad(f, r) - zinv_fractional(f, r)) < 1e-5

    def test_zinv_radius(self):
        with pytest.raises(InvalidArgumentError):
            zinv_quad(exponential(1.0), 0.0)

    def test_zinv_needs_decay(self):
        with pytest.raises(UnsupportedDecayError):
            zinv_quad(step(0.0), 1.0)


class TestMomentumQuadrature:
    """p+ and p_r^2 on phi = exp(-t^2/2), whose chi = t exp(-t^2/2) has a smooth odd extension."""

    @pytest.fixture(scope="class")
    def fine(self):
        return make_grid(20.48, 2047)

    @pytest.mark.parametrize("j", [50, 100, 200])
    def test_pplus_matches_discrete(self, fine, j):
        discrete = pplus_apply(sample(gaussian(), fine)).values[j - 1]
        assert abs(pplus_quad(gaussian(), fine.nodes[j - 1]) - discrete) < 1e-6

    @pytest.mark.parametrize("j", [100, 200])
    def test_pr2_matches_discrete(self, fine, j):
        discrete = pr2_apply(sample(gaussian(), fine)).values[j - 1]
        assert abs(pr2_quad(gaussian(), fine.nodes[j - 1]) - discrete) < 1e-4

    @pytest.mark.parametrize("r", [1.0, 2.0])
    def test_pr2_closed_forms(self, r):
        # -(1/r) chi'' for chi = t exp(-t^2/2) and chi = t exp(-t)
        assert abs(pr2_quad(gaussian(), r) - (3 - r * r) * math.exp(-0.5 * r * r)) < 1e-4
        assert abs(pr2_quad(exponential(1.0), r) - (2 - r) * math.exp(-r) / r) < 1e-4

    def test_needs_polynomial_envelope(self):
        with pytest.raises(InvalidArgumentError):
            pplus_quad(sine(1.0), 1.0)
        with pytest.raises(InvalidArgumentError):
            pr2_quad(step(0.0, 1.0), 1.0)

    def test_radius(self):
        with pytest.raises(InvalidArgumentError):
            pplus_quad(gaussian(), 0.0)


class TestKernel:
    def test_value(self):
        dr = 0.25
        assert math.isclose(zinv_kernel(2 * dr, dr), 0.5 * math.log(3.0), rel_tol=1e-15)

    def test_symmetric(self):
        assert zinv_kernel(1.0, 3.0) == zinv_kernel(3.0, 1.0)

    def test_singular(self):
        with pytest.raises(SingularPointError):
            zinv_kernel(1.0, 1.0)

    def test_negative(self):
        with pytest.raises(InvalidArgumentError):
            zinv_kernel(-1.0, 1.0)

    def test_matrix(self):
        K = zinv_kernel_matrix(make_grid(1.0, 3))
        assert math.isclose(K[1, 0], 0.5 * math.log(3.0), rel_tol=1e-14)
        np.testing.assert_allclose(K, K.T, atol=0)
        assert np.all(np.isfinite(np.diag(K)))
        assert np.all(np.diag(K) > 0)


class TestShift:
    def test_step(self):
        grid = make_grid(2.0, 4095)
        f = step(0.0, 1.0)
        report = shift_demo(sample(f, grid), 0.5, f)
        assert report.shift_nodes == 1024
        assert abs(report.analytic_loss - 0.5) < 1e-12
        assert abs(report.measured_loss - 0.5) < 1e-3

    def test_exponential(self):
        grid = make_grid(8.0, 16383)
        f = exponential(1.0)
        report = shift_demo(sample(f, grid), 1.0, f)
        assert abs(report.analytic_loss - (1 - math.exp(-2.0)) / 2) < 1e-12
        assert abs(report.measured_loss - report.analytic_loss) < 1e-3

    def test_norm_drops(self):
        grid = make_grid(2.0, 4095)
        report = shift_demo(sample(step(0.0, 1.0), grid), 0.5)
        assert report.norm_after < report.norm_before

    def test_needs_whole_steps(self):
        grid = make_grid(2.0, 4095)
        with pytest.raises(InvalidArgumentError):
            shift_demo(sample(step(0.0, 1.0), grid), 0.3)
        with pytest.raises(InvalidArgumentError):
            shift_demo(sample(step(0.0, 1.0), grid), -0.5)

    def test_shift_past_the_grid(self):
        grid = make_grid(1.0, 3)
        chi = SampledFunction(grid, np.ones(3))
        report = shift_demo(chi, 1.0)
        assert report.norm_after == 0.0


class TestDeficiency:
    def test_plus_is_normalizable(self):
        report = deficiency_check(1)
        assert report.residual < 1e-12
        assert report.norm_finite
        assert abs(report.norm_sq - 0.5) < 1e-10

    def test_minus_is_not(self):
        report = deficiency_check(-1)
        assert report.residual < 1e-12
        assert not report.norm_finite
        assert report.norm_sq / report.norm_sq_doubled <= 1e-6

    def test_control(self):
        report = deficiency_check(1, candidate=exponential(1.1))
        assert abs(report.residual - 0.1) < 1e-10

    def test_arguments(self):
        with pytest.raises(InvalidArgumentError):
            deficiency_check(0)
        with pytest.raises(InvalidArgumentError):
            deficiency_check(1, R_check=0.0)

    def test_growth_rate(self):
        report = deficiency_check(-1, R_check=10.0)
        ratio = report.norm_sq_doubled / report.norm_sq
        assert abs(ratio / math.exp(20.0) - 1.0) < 0.1

import math

import numpy as np
import pytest
import scipy.special as sc

from radial.errors import InvalidArgumentError
from radial.quadrature import (
    TabulatedFunction,
    TailKind,
    TailModel,
    gauss_legendre,
    graded_marks,
    image_nodes,
    integrate,
    oscillatory_tail,
    panel_edges,
    panel_rule,
    power_tail,
    tabulate,
    tail_series,
)


class TestGaussLegendre:
    def test_exact_for_degree_31(self):
        x, w = gauss_legendre(16)
        assert math.isclose(float(np.sum(w * x**30)), 2.0 / 31.0, rel_tol=1e-13)
        assert abs(float(np.sum(w * x**31))) < 1e-15

    def test_cached_rule_is_read_only(self):
        x, _ = gauss_legendre(16)
        with pytest.raises(ValueError):
            x[0] = 0.0


class TestPanels:
    def test_breakpoints_and_width(self):
        edges = panel_edges(5.0, breakpoints=[1.3, 7.0], max_width=1.0)
        assert edges[0] == 0.0 and edges[-1] == 5.0
        assert 1.3 in edges
        assert np.max(np.diff(edges)) <= 1.0 + 1e-12

    def test_spacing_marks(self):
        edges = panel_edges(10.0, spacing=math.pi, max_width=5.0)
        for m in (math.pi, 2 * math.pi, 3 * math.pi):
            assert np.any(np.isclose(edges, m, rtol=0, atol=1e-12))

    def test_start(self):
        edges = panel_edges(3.0, start=1.0, max_width=0.5)
        assert edges[0] == 1.0 and edges[-1] == 3.0 and edges.size == 5

    def test_empty_interval(self):
        edges = panel_edges(0.0)
        assert integrate(np.exp, edges) == 0.0

    def test_graded_marks_accumulate(self):
        marks = graded_marks(1.0, 0.5, levels=10)
        assert 1.0 in marks
        assert min(abs(m - 1.0) for m in marks if m != 1.0) == pytest.approx(0.5**10)

    def test_panel_rule_matches_integrate(self):
        edges = panel_edges(10.0, max_width=1.0)
        t, w = panel_rule(edges)
        assert math.isclose(float(np.sum(w * np.exp(-t))), integrate(lambda s: np.exp(-s), edges), rel_tol=1e-14)

    def test_integrate_exponential(self):
        assert math.isclose(integrate(lambda t: np.exp(-t), panel_edges(10.0)), 1.0 - math.exp(-10.0), rel_tol=1e-14)


class TestTails:
    def test_power_tail(self):
        assert math.isclose(power_tail(3.0, 2.0), 0.125, rel_tol=1e-15)
        with pytest.raises(InvalidArgumentError):
            power_tail(1.0, 2.0)

    @pytest.mark.parametrize("T", [2.0, 30.0])
    def test_first_order_oscillatory(self, T):
        si, ci = sc.sici(T)
        assert abs(oscillatory_tail("sin", 1.0, T, 1) - (math.pi / 2 - si)) < 1e-12
        assert abs(oscillatory_tail("cos", 1.0, T, 1) + ci) < 1e-12

    def test_second_order_recurrence(self):
        T = 2.0
        si, _ = sc.sici(T)
        expected = math.cos(T) / T - (math.pi / 2 - si)
        assert abs(oscillatory_tail("cos", 1.0, T, 2) - expected) < 1e-12

    def test_frequency_scaling(self):
        # int_T^inf sin(w t)/t dt depends on w T only
        assert abs(oscillatory_tail("sin", 3.0, 2.0, 1) - oscillatory_tail("sin", 1.0, 6.0, 1)) < 1e-13

    def test_zero_frequency(self):
        assert oscillatory_tail("sin", 0.0, 2.0, 2) == 0.0
        assert math.isclose(oscillatory_tail("cos", 0.0, 2.0, 2), 0.5, rel_tol=1e-15)

    def test_tail_model_moment(self):
        tail = TailModel(TailKind.POWER, 2.0, 0.0, 2.0)
        assert math.isclose(tail.moment(1.0, 4.0), 2.0 * power_tail(3.0, 4.0), rel_tol=1e-15)
        assert TailModel().moment(1.0, 4.0) == 0.0

    def test_trig_tail_has_no_fourier_moment(self):
        with pytest.raises(InvalidArgumentError):
            TailModel(TailKind.SIN, 1.0, 1.0).kernel_moment("sin", 1.0, 10.0)

    def test_tail_series_geometric(self):
        # sum_n r^(2n) int_T^inf t^-(2n+2) dt = int_T^inf dt / (t^2 - r^2) for a unit power-zero tail
        tail = TailModel(TailKind.POWER, 1.0, 0.0, 0.0)
        r, T = 1.0, 4.0
        value = tail_series(tail, T, lambda n: r ** (2 * n), lambda n: 2 * n + 2)
        assert math.isclose(value, math.log((T + r) / (T - r)) / (2 * r), rel_tol=1e-13)

    def test_tail_series_zero(self):
        assert tail_series(TailModel(), 5.0, lambda n: 1.0, lambda n: n + 2) == 0.0


class TestTabulatedFunction:
    def test_interpolates_smooth_function(self):
        nodes = image_nodes()
        f = tabulate(lambda t: 1.0 / (1.0 + t * t), nodes, 2.0)
        t = np.linspace(0.01, 59.0, 777)
        # 0.05 spacing past t = 0.5 puts the cubic spline error near 1.1e-6
        np.testing.assert_allclose(f(t), 1.0 / (1.0 + t * t), atol=2e-6)

    def test_power_tail_beyond_last_node(self):
        nodes = np.linspace(1.0, 10.0, 10)
        f = TabulatedFunction(nodes, 1.0 / nodes**2, 2.0)
        assert math.isclose(float(f(20.0)), 1.0 / 400.0, rel_tol=1e-12)
        assert math.isclose(float(f.slope(20.0)), -2.0 / 8000.0, rel_tol=1e-12)
        assert f.tail().kind is TailKind.POWER

    def test_breakpoints_are_knots(self):
        nodes = np.linspace(0.0, 3.0, 7)
        f = TabulatedFunction(nodes, nodes, 1.0)
        assert f.breakpoints == tuple(nodes[:-1])
        assert f.cutoff(None) == 3.0

    def test_needs_four_nodes(self):
        with pytest.raises(InvalidArgumentError):
            TabulatedFunction(np.arange(3.0), np.arange(3.0), 1.0)

    def test_image_nodes(self):
        nodes = image_nodes()
        assert nodes[0] == pytest.approx(1e-6)
        assert np.all(np.diff(nodes) > 0)
        assert nodes[-1] == pytest.approx(60.0)

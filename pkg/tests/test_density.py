import math

import numpy as np
import pytest

from src.number_theory.density import (Grid2D, TestFunction, g_eval, g_eval_series, g_fourier_coefficient,
                                       g_grid, g_sup_bound, integral_h_g, quadrature_fourier_coefficient,
                                       quadrature_h_g, series_tail_bound)
from src.number_theory.relations import RelationRow, RelationSystem
from src.utils.errors import DensityError, DimensionError, TestFunctionError

G_AT_ORIGIN = -(math.log(2) / (math.sqrt(2) - 1) + math.log(3) / (math.sqrt(3) - 1)) / math.pi


def test_g_at_origin(example_1):
    assert g_eval(example_1, [0.0, 0.0]) == pytest.approx(G_AT_ORIGIN, rel=1e-13)
    assert G_AT_ORIGIN == pytest.approx(-1.0103, abs=1e-4)


def test_empty_system_is_zero(empty_system):
    assert g_eval(empty_system, [0.3, 0.7]) == 0.0
    assert g_eval_series(empty_system, [0.3, 0.7], 10) == 0.0
    assert integral_h_g(empty_system, TestFunction.cosine([1, 1])) == 0.0


def test_single_series_term(example_1):
    expected = -(math.log(2) / math.sqrt(2) + math.log(3) / math.sqrt(3)) / math.pi
    assert g_eval_series(example_1, [0.0, 0.0], 1) == pytest.approx(expected, abs=1e-15)


def test_series_matches_closed_form_at_half(example_1):
    x = [0.5, 0.0]
    assert abs(g_eval(example_1, x) - g_eval_series(example_1, x, 1000)) <= 1e-10


@pytest.mark.parametrize("system_name", ["example_1", "example_2"])
def test_series_matches_closed_form_on_random_points(request, system_name):
    system = request.getfixturevalue(system_name)
    points = np.random.default_rng(7).random((10_000, 2))
    difference = np.abs(g_eval(system, points) - g_eval_series(system, points, 1000))
    assert difference.max() <= 1e-10


def test_tail_bound_controls_truncation(example_2):
    points = np.random.default_rng(3).random((500, 2))
    for K in (1, 3, 10):
        difference = np.abs(g_eval(example_2, points) - g_eval_series(example_2, points, K))
        assert difference.max() <= series_tail_bound(example_2, K) + 1e-15


def test_sup_bound_attained_at_origin(example_1, example_2):
    for system in (example_1, example_2):
        points = np.random.default_rng(11).random((2000, 2))
        assert np.abs(g_eval(system, points)).max() <= g_sup_bound(system) + 1e-12
        assert g_eval(system, [0.0, 0.0]) == pytest.approx(-g_sup_bound(system), rel=1e-12)


@pytest.mark.parametrize("system_name", ["example_1", "example_2"])
def test_grid_mean_is_zero(request, system_name):
    grid = g_grid(request.getfixturevalue(system_name), 512)
    assert abs(grid.mean()) <= 1e-6


def test_fourier_coefficients(example_1):
    expected = -math.log(2) * 2 ** -0.5 / (2 * math.pi)
    assert g_fourier_coefficient(example_1, [1, 1]) == pytest.approx(expected, abs=1e-15)
    assert g_fourier_coefficient(example_1, [-1, -1]) == pytest.approx(expected, abs=1e-15)
    assert g_fourier_coefficient(example_1, [1, 0]) == 0
    assert g_fourier_coefficient(example_1, [0, 0]) == 0
    assert g_fourier_coefficient(example_1, [2, -2]) == pytest.approx(
        -math.log(3) * 3 ** -0.5 / (2 * math.pi), abs=1e-15)


@pytest.mark.parametrize("m", [(1, 1), (2, 2), (2, -2), (4, -4), (1, 0), (3, 1)])
def test_fourier_coefficients_match_quadrature(example_1, m):
    exact = g_fourier_coefficient(example_1, m)
    assert abs(exact - quadrature_fourier_coefficient(example_1, m, 512)) <= 1e-8


def test_fourier_coefficient_dimension(example_1):
    with pytest.raises(DimensionError):
        g_fourier_coefficient(example_1, [1, 1, 1])


def test_integral_examples(example_1):
    h_sum_direction = TestFunction.cosine([1, 1])
    h_difference = TestFunction.cosine([2, -2])
    h_first = TestFunction.cosine([1, 0])
    assert integral_h_g(example_1, h_sum_direction) == pytest.approx(-math.log(2) / (2 * math.sqrt(2) * math.pi))
    assert integral_h_g(example_1, h_sum_direction) == pytest.approx(-0.07801, abs=1e-5)
    assert integral_h_g(example_1, h_difference) == pytest.approx(-0.10094, abs=2e-5)
    assert integral_h_g(example_1, h_first) == 0.0


@pytest.mark.parametrize("terms", [
    [{"m": [1, 1], "re": 0.5}],
    [{"m": [2, -2], "re": 0.5}],
    [{"m": [1, 0], "re": 0.5}],
    [{"m": [0, 0], "re": 2.0}, {"m": [3, 3], "re": 0.2, "im": -0.1}, {"m": [4, -4], "re": -0.3}],
])
def test_integral_matches_quadrature(example_1, terms):
    h = TestFunction.from_terms(terms)
    assert abs(integral_h_g(example_1, h) - quadrature_h_g(example_1, h, 512)) <= 1e-8


def test_integral_ignores_constant_term(example_2):
    h = TestFunction.constant(5.0) + TestFunction.cosine([2, 1])
    assert integral_h_g(example_2, h) == pytest.approx(integral_h_g(example_2, TestFunction.cosine([2, 1])))


def test_grid_of_empty_system(empty_system):
    grid = g_grid(empty_system, 4)
    assert np.all(grid.values == 0)


def test_grid_minimum(example_1):
    grid = g_grid(example_1, 100)
    assert grid.values.min() < -0.98
    assert grid.values.min() >= G_AT_ORIGIN - 1e-12
    assert grid.values[0, 0] == pytest.approx(g_eval(example_1, [0.005, 0.005]))


def test_grid_errors(example_1):
    with pytest.raises(DensityError):
        g_grid(example_1, 1)
    with pytest.raises(DimensionError):
        g_grid(RelationSystem(3, (RelationRow((1, 0, 0), 1, 1, 2),)), 10)


def test_grid_shape_is_checked():
    with pytest.raises(DensityError):
        Grid2D(3, np.zeros((2, 2)))
    with pytest.raises(DensityError):
        Grid2D(2, np.array([[0.0, np.nan], [0.0, 0.0]]))


def test_test_function_must_be_hermitian():
    with pytest.raises(TestFunctionError):
        TestFunction({(1, 0): 1.0})
    h = TestFunction.sine([1, 0])
    values = h.evaluate(np.array([[0.25, 0.0], [0.0, 0.0]]))
    assert values == pytest.approx([1.0, 0.0], abs=1e-15)


def test_test_function_constant_term_and_decay():
    h = TestFunction.from_terms([{"m": [0, 0], "re": 1.5}, {"m": [2, 0], "re": 0.25}], B_decay=5.0, C_decay=100.0)
    assert h.constant_term == 1.5
    assert h.support_norm == 2
    report = h.decay_report()
    assert report["observed_max"] == pytest.approx(max(1.5, 0.25 * 3 ** 5))
    assert report["within_declared"] is True

import math

import numpy as np
import pytest

from langevin.annealing.problems.base import ProblemError
from langevin.annealing.problems.base import as_batch
from langevin.annealing.problems.potentials import DoubleWellPotential
from langevin.annealing.problems.potentials import DoubleWellPotentialError
from langevin.annealing.problems.potentials import \
    ProductDoubleWellPotential
from langevin.annealing.problems.potentials import QuadraticPotential
from langevin.annealing.problems.potentials import QuadraticPotentialError
from langevin.annealing.problems.potentials import builtin_double_well


def test_as_batch_single_point_correct():
    points, single = as_batch([1.0, 2.0], 2)
    assert single
    assert points.shape == (1, 2)


def test_as_batch_scalar_one_dimensional_correct():
    points, single = as_batch(0.5, 1)
    assert single
    assert points.shape == (1, 1)


def test_as_batch_vector_one_dimensional_is_batch():
    points, single = as_batch([0.5, 1.5, 2.5], 1)
    assert not single
    assert points.shape == (3, 1)


def test_as_batch_shape_mismatch_error():
    with pytest.raises(ProblemError):
        as_batch([1.0, 2.0, 3.0], 2)


def test_as_batch_scalar_multidimensional_error():
    with pytest.raises(ProblemError):
        as_batch(1.0, 2)


def test_quadratic_evaluate_correct(quadratic_2d):
    assert quadratic_2d.evaluate([1.0, 1.0]) == pytest.approx(2.5)
    assert quadratic_2d.evaluate([0.0, 0.0]) == pytest.approx(
        quadratic_2d.v_star)


def test_quadratic_batch_shapes_correct(quadratic_2d):
    points = np.array([[0.0, 0.0], [1.0, 1.0], [2.0, -1.0]])
    assert quadratic_2d.evaluate(points).shape == (3, )
    assert quadratic_2d.gradient(points).shape == (3, 2)
    assert quadratic_2d.hessian(points).shape == (3, 2, 2)


def test_quadratic_gradient_correct(quadratic_2d):
    np.testing.assert_allclose(quadratic_2d.gradient([1.0, 1.0]),
                               [1.0, 2.0])


def test_quadratic_minimizer_correct(quadratic_2d):
    minimizers = quadratic_2d.minimizers
    assert len(minimizers) == 1
    np.testing.assert_array_equal(minimizers[0].location, [0.0, 0.0])
    assert minimizers[0].hessian_determinant == pytest.approx(2.0)
    assert quadratic_2d.metadata.alpha0 == pytest.approx(1.0)


@pytest.mark.parametrize('params', [{
    'curvature': 0.0
}, {
    'v_star': 0.0
}, {
    'center': [1.0, 2.0]
}])
def test_quadratic_invalid_parameters_error(params):
    with pytest.raises(QuadraticPotentialError):
        QuadraticPotential(dim=1, **params)


def test_potential_dimension_error():
    with pytest.raises(QuadraticPotentialError):
        QuadraticPotential(dim=0)


def test_double_well_minimizers_correct(double_well_1d):
    for minimizer, hessian in zip(double_well_1d.minimizers, (1.0, 4.0)):
        assert double_well_1d.evaluate(minimizer.location) == \
            pytest.approx(1.0, abs=1e-12)
        np.testing.assert_allclose(
            double_well_1d.gradient(minimizer.location), [0.0], atol=1e-12)
        assert double_well_1d.hessian(minimizer.location)[0, 0] == \
            pytest.approx(hessian, rel=1e-10)
        assert minimizer.hessian_determinant == hessian


def test_double_well_minimizer_locations_correct(double_well_2d):
    locations = [minimizer.location for minimizer in double_well_2d.minimizers]
    np.testing.assert_array_equal(locations, [[-1.0, 0.0], [1.0, 0.0]])


def test_double_well_global_minimum_correct(double_well_1d):
    grid = np.linspace(-8.0, 8.0, 4001)
    values = double_well_1d.evaluate(grid)
    assert np.all(values >= 1.0 - 1e-12)
    away = np.abs(np.abs(grid) - 1.0) > 0.05
    assert np.all(values[away] > 1.0)


def test_double_well_spliced_tails_correct(double_well_1d):
    splice_radius = double_well_1d.metadata.splice_radius
    assert splice_radius == pytest.approx(3.0)
    for sign in (-1.0, 1.0):
        inside = sign * (splice_radius - 1e-7)
        outside = sign * (splice_radius + 1e-7)
        assert double_well_1d.evaluate(inside) == pytest.approx(
            double_well_1d.evaluate(outside), rel=1e-6)
        assert double_well_1d.hessian(inside)[0, 0] == pytest.approx(
            double_well_1d.hessian(outside)[0, 0], rel=1e-5)
    far = np.array([10.0, 20.0, 40.0])
    np.testing.assert_allclose(double_well_1d.hessian(far)[:, 0, 0],
                               double_well_1d.hessian(far[0])[0, 0])


def test_double_well_gradient_matches_finite_differences(double_well_2d):
    points = np.array([[0.3, -0.7], [-2.5, 1.2], [4.0, 0.5]])
    step = 1e-6
    for point in points:
        numerical = [
            (double_well_2d.evaluate(point + step * unit) -
             double_well_2d.evaluate(point - step * unit)) / (2 * step)
            for unit in np.eye(2)
        ]
        np.testing.assert_allclose(double_well_2d.gradient(point), numerical,
                                   rtol=1e-5, atol=1e-6)


def test_double_well_metadata_correct(double_well_1d, double_well_2d):
    assert double_well_1d.metadata.r0 == pytest.approx(2.0)
    assert double_well_1d.metadata.alpha0 > 0
    assert double_well_2d.metadata.r0 == pytest.approx(4.0)
    assert double_well_2d.metadata.alpha0 == pytest.approx(0.5)
    assert double_well_2d.metadata.splice_radius == pytest.approx(4.0)


def test_double_well_2d_core_matches_profile(double_well_1d, double_well_2d):
    points = np.array([[1.0, 0.0], [-0.4, 1.1], [1.3, -1.2], [0.0, 1.9]])
    expected = (double_well_1d.evaluate(points[:, :1]) +
                0.5 * points[:, 1]**2)
    np.testing.assert_allclose(double_well_2d.evaluate(points), expected,
                               rtol=1e-12)


def test_double_well_2d_far_field_quadratic(double_well_2d):
    points = np.array([[0.0, 5.0], [0.5, 5.0], [-4.0, 0.1], [7.0, -7.0]])
    np.testing.assert_allclose(double_well_2d.evaluate(points),
                               1.0 + 0.5 * np.sum(points**2, axis=1),
                               rtol=1e-12)
    np.testing.assert_allclose(double_well_2d.gradient(points), points,
                               rtol=1e-12)
    np.testing.assert_allclose(double_well_2d.hessian(points),
                               np.broadcast_to(np.eye(2), (4, 2, 2)),
                               atol=1e-12)


def test_double_well_2d_hessian_matches_finite_differences(double_well_2d):
    points = np.array([[0.3, 2.2], [-2.5, 1.2], [3.1, 0.4], [1.0, -3.5]])
    step = 1e-6
    for point in points:
        numerical = np.array([
            (double_well_2d.gradient(point + step * unit) -
             double_well_2d.gradient(point - step * unit)) / (2 * step)
            for unit in np.eye(2)
        ])
        np.testing.assert_allclose(double_well_2d.hessian(point), numerical,
                                   rtol=1e-5, atol=1e-5)


def test_double_well_2d_global_minimum_correct(double_well_2d):
    axis = np.linspace(-8.0, 8.0, 161)
    grid = np.stack(np.meshgrid(axis, axis), axis=-1).reshape(-1, 2)
    values = double_well_2d.evaluate(grid)
    assert np.all(values >= 1.0 - 1e-12)
    for minimizer in double_well_2d.minimizers:
        assert double_well_2d.evaluate(minimizer.location) == pytest.approx(
            1.0, abs=1e-12)


@pytest.mark.parametrize('params', [{
    'well_sep': 0.0
}, {
    'hess_left': -1.0
}, {
    'hess_left': 1.0,
    'hess_right': 1000.0
}])
def test_double_well_invalid_parameters_error(params):
    with pytest.raises(DoubleWellPotentialError):
        DoubleWellPotential(**params)


def test_builtin_double_well_correct():
    potential = builtin_double_well(3, 1.5, 2.0, 3.0)
    assert isinstance(potential, DoubleWellPotential)
    assert potential.dim == 3
    assert potential.v_star == 1.0
    np.testing.assert_allclose(potential.minimizers[1].location,
                               [1.5, 0.0, 0.0])


def test_product_double_well_minimizers_correct():
    potential = ProductDoubleWellPotential(dim=2, well_sep=1.0,
                                           hess_left=1.0, hess_right=4.0)
    minimizers = potential.minimizers
    assert len(minimizers) == 4
    determinants = sorted(minimizer.hessian_determinant
                          for minimizer in minimizers)
    assert determinants == [1.0, 4.0, 4.0, 16.0]
    for minimizer in minimizers:
        assert potential.evaluate(minimizer.location) == pytest.approx(
            1.0, abs=1e-12)
        assert np.linalg.det(potential.hessian(
            minimizer.location)) == pytest.approx(
                minimizer.hessian_determinant, rel=1e-10)
    assert potential.metadata.r0 == pytest.approx(math.sqrt(2) + 3)
    far = np.array([6.0, -2.0])
    np.testing.assert_allclose(potential.gradient(far), far, rtol=1e-12)


def test_potential_non_finite_value_error(quadratic_1d):
    with pytest.raises(ProblemError):
        quadratic_1d.evaluate(np.inf)

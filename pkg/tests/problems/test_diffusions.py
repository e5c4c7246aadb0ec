import numpy as np
import pytest

from langevin.annealing.problems.diffusions import ConstantDiffusion
from langevin.annealing.problems.diffusions import ConstantDiffusionError
from langevin.annealing.problems.diffusions import ShearedDiffusion
from langevin.annealing.problems.diffusions import ShearedDiffusionError
from langevin.annealing.problems.diffusions import SineDiagonalDiffusion
from langevin.annealing.problems.diffusions import \
    SineDiagonalDiffusionError


def test_constant_diffusion_bounds_correct():
    diffusion = ConstantDiffusion(dim=2, matrix=[[2.0, 0.0], [0.0, 0.5]])
    assert diffusion.ellipticity_lb == pytest.approx(0.5)
    assert diffusion.sup_norm_ub == pytest.approx(2.0)
    assert diffusion.is_constant()


def test_constant_diffusion_upsilon_zero(unit_diffusion_2d):
    points = np.random.default_rng(0).uniform(-5, 5, (10, 2))
    np.testing.assert_array_equal(unit_diffusion_2d.upsilon(points), 0.0)


def test_constant_diffusion_singular_error():
    with pytest.raises(ConstantDiffusionError):
        ConstantDiffusion(dim=2, matrix=[[1.0, 1.0], [1.0, 1.0]])


def test_constant_diffusion_shape_error():
    with pytest.raises(ConstantDiffusionError):
        ConstantDiffusion(dim=2, matrix=[[1.0]])


def test_sine_diagonal_evaluate_correct(sine_diffusion_2d):
    point = np.array([np.pi / 2, 0.0])
    np.testing.assert_allclose(sine_diffusion_2d.evaluate(point),
                               [[3.0, 0.0], [0.0, 2.0]])
    np.testing.assert_allclose(sine_diffusion_2d.covariance(point),
                               [[9.0, 0.0], [0.0, 4.0]])


def test_sine_diagonal_bounds_correct(sine_diffusion_1d):
    assert sine_diffusion_1d.ellipticity_lb == pytest.approx(1.0)
    assert sine_diffusion_1d.sup_norm_ub == pytest.approx(3.0)
    assert not sine_diffusion_1d.is_constant()


def test_sine_diagonal_upsilon_correct(sine_diffusion_1d):
    np.testing.assert_allclose(sine_diffusion_1d.upsilon(0.0), [4.0])
    np.testing.assert_allclose(
        SineDiagonalDiffusion(dim=2).upsilon([0.0, 0.0]), [4.0, 4.0])


def test_sine_diagonal_not_elliptic_error():
    with pytest.raises(SineDiagonalDiffusionError):
        SineDiagonalDiffusion(dim=1, base=1.0, amplitude=1.0)


def test_sheared_has_no_closed_form(sheared_diffusion):
    assert sheared_diffusion.upsilon([0.0, 0.0]) is None


def test_sheared_evaluate_correct(sheared_diffusion):
    sigma = sheared_diffusion.evaluate([0.0, 0.0])
    np.testing.assert_allclose(sigma, [[2.0, 0.0], [0.0, 2.0]])
    sigma = sheared_diffusion.evaluate([10.0, 0.0])
    assert sigma[0, 1] == pytest.approx(0.5 * np.tanh(10.0))
    assert sigma[1, 0] == 0.0


@pytest.mark.parametrize('params', [{
    'dim': 1
}, {
    'base': 1.0,
    'amplitude': 0.5,
    'shear': 0.5
}])
def test_sheared_invalid_parameters_error(params):
    with pytest.raises(ShearedDiffusionError):
        ShearedDiffusion(**params)


def test_diffusion_non_finite_error(sine_diffusion_1d):
    with pytest.raises(SineDiagonalDiffusionError):
        sine_diffusion_1d.evaluate(np.inf)

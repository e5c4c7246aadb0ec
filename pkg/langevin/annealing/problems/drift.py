"""Module for the annealed drift b_a(x) = −(σσᵀ∇V)(x) + a²Υ(x) and
its correction term.

"""
import numpy as np
import numpy.typing as npt

from langevin.annealing.constants import FD_STEP
from langevin.annealing.problems.base import Array
from langevin.annealing.problems.base import DiffusionField
from langevin.annealing.problems.base import Potential
from langevin.annealing.problems.base import ProblemError
from langevin.annealing.problems.base import as_batch


def correction_term(sigma: DiffusionField, x: npt.ArrayLike,
                    fd_step: float = FD_STEP) -> Array:
    """Compute the correction term Υ_i(x) = Σ_j ∂_j(σσᵀ)_ij(x).

    Parameters
    ----------
    sigma : DiffusionField
        The diffusion field.
    x : array_like
        A point of shape (d,) or a batch of shape (n, d).
    fd_step : float
        The step of the central finite differences used if the
        diffusion field has no closed-form correction term.

    Returns
    -------
    numpy.ndarray
        Υ(x) of shape (d,), or (n, d) for a batch.

    Raises
    ------
    ProblemError
        If the step is not positive or σ is not finite near x.

    """
    if fd_step <= 0:
        raise ProblemError('finite difference step must be positive',
                           fd_step=fd_step)
    closed_form = sigma.upsilon(x)
    if closed_form is not None:
        return closed_form
    points, single = as_batch(x, sigma.dim)
    upsilons = np.zeros_like(points)
    for j in range(sigma.dim):
        shift = np.zeros(sigma.dim)
        shift[j] = fd_step
        forward = sigma.covariance(points + shift)
        backward = sigma.covariance(points - shift)
        upsilons += (forward[:, :, j] - backward[:, :, j]) / (2 * fd_step)
    return upsilons[0] if single else upsilons


def drift(pot: Potential, sigma: DiffusionField, a: float,
          x: npt.ArrayLike, fd_step: float = FD_STEP) -> Array:
    """Compute the annealed drift b_a(x) = −(σσᵀ∇V)(x) + a²Υ(x). ν_a is
    invariant only when Υ vanishes identically, e.g. for constant σ.

    Parameters
    ----------
    pot : Potential
        The potential V.
    sigma : DiffusionField
        The diffusion field σ.
    a : float
        The noise level a ≥ 0.
    x : array_like
        A point of shape (d,) or a batch of shape (n, d).
    fd_step : float
        The finite difference step of the correction term.

    Returns
    -------
    numpy.ndarray
        b_a(x) of shape (d,), or (n, d) for a batch.

    Raises
    ------
    ProblemError
        If a is negative, the dimensions differ, or an evaluation
        fails.

    """
    if a < 0:
        raise ProblemError('noise level must be non-negative', a=a)
    if pot.dim != sigma.dim:
        raise ProblemError('potential and diffusion dimensions differ',
                           potential_dim=pot.dim, diffusion_dim=sigma.dim)
    points, single = as_batch(x, pot.dim)
    drifts = -np.einsum('nij,nj->ni', sigma.covariance(points),
                        pot.gradient(points))
    if a > 0 and not sigma.is_constant():
        drifts += a**2 * correction_term(sigma, points, fd_step)
    return drifts[0] if single else drifts

"""Business logic for the Gibbs measures ν_a of density
Z_a·exp(−2(V − V*)/a²) and their limit ν*.

All total variation distances use the L¹ convention
d_TV(μ, ν) = ∫|μ − ν| with values in [0, 2].

"""
import dataclasses
import logging
import threading
import typing

import numpy as np
import numpy.typing as npt
import scipy.integrate  # type: ignore
from scipy.stats import multivariate_normal  # type: ignore

from langevin.annealing.business.base import Interactor
from langevin.annealing.business.base import InteractorError
from langevin.annealing.constants import DEFAULT_TOLERANCE
from langevin.annealing.constants import MIN_ACCEPTANCE_RATE
from langevin.annealing.constants import QUADRATURE_BOX_DOUBLINGS
from langevin.annealing.constants import QUADRATURE_MAX_DIMENSION
from langevin.annealing.constants import QUADRATURE_MIN_HALF_WIDTH
from langevin.annealing.constants import REJECTION_INFLATION
from langevin.annealing.constants import REJECTION_SAFETY_FACTOR
from langevin.annealing.entities import Atom
from langevin.annealing.entities import EmpiricalMeasure
from langevin.annealing.entities import LimitMeasure
from langevin.annealing.problems.base import Array
from langevin.annealing.problems.base import Potential
from langevin.annealing.problems.base import as_batch

_logger = logging.getLogger(__name__)

Box: typing.TypeAlias = typing.Tuple[Array, Array]

_INVERSION_GRID_POINTS = 2**16
_DOMINATION_GRID_POINTS = 20000
_MIN_PROPOSAL_BATCH = 1000
_WELL_MASS_SAMPLES = 10**5


class GibbsInteractorError(InteractorError):
    """Exception class for all Gibbs interactor errors.

    """
    pass


class PartitionConstantError(GibbsInteractorError):
    """Exception class for partition constants whose integrand is not
    negligible outside the quadrature box (the noise level is too large
    for the potential's growth).

    """
    pass


def default_box(pot: Potential, a: float) -> Box:
    """Compute the default quadrature box: the bounding box of the
    minimizer-centered boxes of half width max(10a, 5).

    Parameters
    ----------
    pot : Potential
        The potential.
    a : float
        The noise level.

    Returns
    -------
    tuple of numpy.ndarray
        The lower and upper corners of the box.

    """
    half_width = max(10 * a, QUADRATURE_MIN_HALF_WIDTH)
    locations = np.array([minimizer.location for minimizer in pot.minimizers])
    return (np.min(locations, axis=0) - half_width,
            np.max(locations, axis=0) + half_width)


def _double(box: Box) -> Box:
    lower, upper = box
    center = 0.5 * (lower + upper)
    return center - (upper - lower), center + (upper - lower)


def _integrate(integrand: typing.Callable[[Array], Array], box: Box,
               points: Array, tol: float) -> float:
    lower, upper = box
    if lower.shape[0] == 1:
        inside = np.unique(points[(points > lower[0]) & (points < upper[0])])
        value, _ = scipy.integrate.quad(
            lambda x: float(integrand(np.array([[x]]))[0]), lower[0],
            upper[0], points=list(inside) or None, epsabs=1e-14,
            epsrel=tol * 1e-2, limit=500)
        return float(value)
    result = scipy.integrate.cubature(integrand, lower, upper, rtol=tol,
                                      atol=1e-14)
    if result.status != 'converged':
        raise GibbsInteractorError('cubature did not converge',
                                   error=float(result.error))
    return float(result.estimate)


class GibbsMeasure:
    """Gibbs measure ν_a with density Z_a·exp(−2(V − V*)/a²). The
    partition constant is computed lazily and memoized.

    """
    def __init__(self, pot: Potential, a: float,
                 tol: float = DEFAULT_TOLERANCE,
                 box: typing.Optional[Box] = None):
        """Construct a Gibbs measure.

        Parameters
        ----------
        pot : Potential
            The potential V (dimension at most 3).
        a : float
            The positive noise level.
        tol : float
            The relative quadrature tolerance.
        box : tuple of numpy.ndarray or None
            The initial quadrature box (the default box if None).

        Raises
        ------
        GibbsInteractorError
            If an argument is invalid.

        """
        if a <= 0:
            raise GibbsInteractorError('noise level must be positive', a=a)
        if pot.dim > QUADRATURE_MAX_DIMENSION:
            raise GibbsInteractorError('quadrature needs d <= 3',
                                       dim=pot.dim)
        self.pot = pot
        self.a = float(a)
        self.tol = float(tol)
        self.__box = (default_box(pot, a) if box is None else
                      (np.asarray(box[0], dtype=float),
                       np.asarray(box[1], dtype=float)))
        self.__z_a: typing.Optional[float] = None
        self.__lock = threading.Lock()

    @property
    def domain_box(self) -> Box:
        """The quadrature box (final box once Z_a is computed)."""
        return self.__box

    @property
    def z_a(self) -> float:
        """The partition constant Z_a = (∫exp(−2(V − V*)/a²))^(−1).

        Raises
        ------
        PartitionConstantError
            If the integrand tail is not negligible after the allowed
            number of box doublings.

        """
        if self.__z_a is None:
            with self.__lock:
                if self.__z_a is None:
                    self.__z_a = self.__compute_partition_constant()
        return self.__z_a

    def resolved_box(self) -> Box:
        """Get the quadrature box on which the integrand tail is
        negligible.

        Returns
        -------
        tuple of numpy.ndarray
            The lower and upper corners of the box.

        Raises
        ------
        PartitionConstantError
            If the tail check fails after the allowed box doublings.

        """
        if self.z_a <= 0:  # pragma: no cover
            raise PartitionConstantError('non-positive partition constant')
        return self.__box

    def unnormalized(self, x: npt.ArrayLike) -> Array:
        """Evaluate exp(−2(V(x) − V*)/a²) on a batch.

        Parameters
        ----------
        x : array_like
            A point of shape (d,) or a batch of shape (n, d).

        Returns
        -------
        numpy.ndarray
            The values of shape (n,).

        """
        points, _ = as_batch(x, self.pot.dim)
        values = np.atleast_1d(self.pot.evaluate(points))
        return np.exp(-2 * (values - self.pot.v_star) / self.a**2)

    def density(self, x: npt.ArrayLike) -> Array:
        """Evaluate the density of ν_a.

        Parameters
        ----------
        x : array_like
            A point of shape (d,) or a batch of shape (n, d).

        Returns
        -------
        numpy.ndarray
            The density values of shape (n,).

        """
        return self.z_a * self.unnormalized(x)

    def integration_points(self) -> Array:
        """Get the coordinates quadrature should split at.

        Returns
        -------
        numpy.ndarray
            The minimizer coordinates along the first axis.

        """
        return np.array(
            [minimizer.location[0] for minimizer in self.pot.minimizers])

    def __compute_partition_constant(self) -> float:
        box = self.__box
        points = self.integration_points()
        previous = _integrate(self.unnormalized, box, points, self.tol)
        for doubling in range(1, QUADRATURE_BOX_DOUBLINGS + 1):
            doubled = _double(box)
            current = _integrate(self.unnormalized, doubled, points,
                                 self.tol)
            if abs(current - previous) <= self.tol * current:
                _logger.debug('partition constant for a=%g converged '
                              'after %d doubling(s)', self.a, doubling)
                self.__box = box
                return 1.0 / current
            box, previous = doubled, current
        raise PartitionConstantError(
            'integrand tail not negligible after box doublings', a=self.a,
            box=[list(corner) for corner in box])


@dataclasses.dataclass
class SampleGibbsResponse:
    """Response data for sampling a Gibbs measure.

    Attributes
    ----------
    measure : EmpiricalMeasure
        The samples.
    acceptance_rate : float or None
        The rejection sampling acceptance rate (None for grid
        inversion).
    method : str
        Either 'rejection' or 'inversion'.

    """
    measure: EmpiricalMeasure
    acceptance_rate: typing.Optional[float]
    method: str


class GibbsInteractor(Interactor):
    """Interactor for Gibbs measures and their limit.

    """
    def partition_constant(self, pot: Potential, a: float,
                           box: typing.Optional[Box] = None,
                           tol: float = DEFAULT_TOLERANCE) -> float:
        """Compute the partition constant Z_a by adaptive quadrature.

        Parameters
        ----------
        pot : Potential
            The potential (dimension at most 3).
        a : float
            The positive noise level.
        box : tuple of numpy.ndarray or None
            The initial quadrature box (the default box if None); it is
            doubled until the integrand tail is negligible.
        tol : float
            The relative tolerance.

        Returns
        -------
        float
            Z_a.

        Raises
        ------
        PartitionConstantError
            If the tail check fails after the allowed box doublings.
        GibbsInteractorError
            If the partition constant cannot be computed.

        """
        try:
            return GibbsMeasure(pot, a, tol, box).z_a
        except GibbsInteractorError:
            raise
        except Exception:
            raise GibbsInteractorError(
                'unable to compute the partition constant', pot=pot, a=a)

    def limit_measure(self, pot: Potential) -> LimitMeasure:
        """Compute the limit measure ν* = Σ w_i δ_{x_i*} with weights
        proportional to det(∇²V(x_i*))^(−1/2).

        Parameters
        ----------
        pot : Potential
            The potential.

        Returns
        -------
        LimitMeasure
            The weighted minimizers.

        Raises
        ------
        GibbsInteractorError
            If the potential declares no minimizers or a non-positive
            Hessian determinant.

        """
        minimizers = pot.minimizers
        if len(minimizers) == 0:
            raise GibbsInteractorError('potential declares no minimizers',
                                       pot=pot)
        determinants = np.array(
            [minimizer.hessian_determinant for minimizer in minimizers])
        if np.any(determinants <= 0):
            raise GibbsInteractorError(
                'hessian determinants must be positive',
                determinants=list(determinants))
        weights = determinants**-0.5
        weights /= np.sum(weights)
        return LimitMeasure([
            Atom(np.asarray(minimizer.location, dtype=float), float(weight))
            for minimizer, weight in zip(minimizers, weights)
        ])

    def sample_gibbs(self, pot: Potential, a: float, n: int,
                     seed: int) -> SampleGibbsResponse:
        """Draw exact samples of ν_a by rejection from a Gaussian
        mixture centered at the minimizers with covariances
        2·(a²/2)·(∇²V(x_i*))^(−1). The rejection bound is estimated on
        a grid before sampling. In d = 1, low acceptance falls back to
        grid inversion of the distribution function.

        Parameters
        ----------
        pot : Potential
            The potential (dimension at most 3).
        a : float
            The positive noise level.
        n : int
            The number of samples.
        seed : int
            The seed of the sampler.

        Returns
        -------
        SampleGibbsResponse
            The samples with the acceptance rate.

        Raises
        ------
        GibbsInteractorError
            If the acceptance rate is below 1e-4 in d ≥ 2 or sampling
            fails.

        """
        try:
            if n < 1:
                raise GibbsInteractorError(
                    'number of samples must be positive', n=n)
            measure = GibbsMeasure(pot, a)
            rng = np.random.default_rng(seed)
            try:
                samples, acceptance_rate = self.__sample_rejection(
                    measure, n, rng)
                return SampleGibbsResponse(EmpiricalMeasure(samples),
                                           acceptance_rate, 'rejection')
            except GibbsInteractorError:
                if pot.dim != 1:
                    raise
            _logger.warning('rejection sampling failed for a=%g, falling '
                            'back to grid inversion', a)
            return SampleGibbsResponse(
                EmpiricalMeasure(self.__sample_inversion(measure, n, rng)),
                None, 'inversion')
        except GibbsInteractorError:
            raise
        except Exception:
            raise GibbsInteractorError('unable to sample the Gibbs measure',
                                       pot=pot, a=a, n=n)

    def tv_gibbs_pair(self, pot: Potential, a1: float, a2: float,
                      box: typing.Optional[Box] = None,
                      tol: float = DEFAULT_TOLERANCE) -> float:
        """Compute d_TV(ν_{a1}, ν_{a2}) = ∫|ν_{a1} − ν_{a2}| ∈ [0, 2]
        by adaptive quadrature.

        Parameters
        ----------
        pot : Potential
            The potential (dimension at most 3).
        a1 : float
            The first positive noise level.
        a2 : float
            The second positive noise level.
        box : tuple of numpy.ndarray or None
            The quadrature box (the default box of the larger level if
            None).
        tol : float
            The relative tolerance.

        Returns
        -------
        float
            The total variation distance.

        Raises
        ------
        PartitionConstantError
            If a partition constant cannot be computed.
        GibbsInteractorError
            If the distance cannot be computed.

        """
        try:
            first = GibbsMeasure(pot, a1, tol)
            second = GibbsMeasure(pot, a2, tol)
            if a1 == a2:
                return 0.0
            if box is None:
                box = (first if a1 >= a2 else second).resolved_box()

            def integrand(x: Array) -> Array:
                return np.abs(first.density(x) - second.density(x))

            distance = _integrate(integrand, box, first.integration_points(),
                                  tol)
            return float(min(max(distance, 0.0), 2.0))
        except GibbsInteractorError:
            raise
        except Exception:
            raise GibbsInteractorError(
                'unable to compute the Gibbs total variation distance',
                a1=a1, a2=a2)

    def gibbs_first_moment(self, pot: Potential, a: float,
                           x: npt.ArrayLike,
                           tol: float = DEFAULT_TOLERANCE) -> float:
        """Compute ν_a(|x − ·|) = ∫|x − y| ν_a(dy) by quadrature.

        Parameters
        ----------
        pot : Potential
            The potential (dimension at most 3).
        a : float
            The positive noise level.
        x : array_like
            The reference point of shape (d,).
        tol : float
            The relative tolerance.

        Returns
        -------
        float
            The first moment around x.

        Raises
        ------
        GibbsInteractorError
            If the moment cannot be computed.

        """
        try:
            measure = GibbsMeasure(pot, a, tol)
            reference, _ = as_batch(x, pot.dim)

            def integrand(y: Array) -> Array:
                return (np.linalg.norm(y - reference, axis=1) *
                        measure.density(y))

            points = np.append(measure.integration_points(), reference[0, 0])
            return _integrate(integrand, measure.domain_box, points, tol)
        except GibbsInteractorError:
            raise
        except Exception:
            raise GibbsInteractorError(
                'unable to compute the Gibbs first moment', a=a)

    def well_masses(self, pot: Potential, a: float, radius: float,
                    tol: float = DEFAULT_TOLERANCE,
                    seed: int = 0) -> Array:
        """Compute the ν_a masses of the balls B(x_i*, radius) around the
        minimizers, by quadrature in d = 1 and by exact sampling in
        d ≥ 2.

        Parameters
        ----------
        pot : Potential
            The potential (dimension at most 3).
        a : float
            The positive noise level.
        radius : float
            The positive ball radius.
        tol : float
            The relative quadrature tolerance.
        seed : int
            The sampler seed (d ≥ 2).

        Returns
        -------
        numpy.ndarray
            One mass per minimizer, in minimizer order.

        Raises
        ------
        GibbsInteractorError
            If the masses cannot be computed.

        """
        try:
            if radius <= 0:
                raise GibbsInteractorError('radius must be positive',
                                           radius=radius)
            locations = np.array(
                [minimizer.location for minimizer in pot.minimizers])
            measure = GibbsMeasure(pot, a, tol)
            if pot.dim == 1:
                return np.array([
                    _integrate(measure.density, (location - radius,
                                                 location + radius),
                               location, tol) for location in locations
                ])
            samples = self.sample_gibbs(pot, a, _WELL_MASS_SAMPLES,
                                        seed).measure.samples
            return np.array([
                np.mean(np.linalg.norm(samples - location, axis=1) < radius)
                for location in locations
            ])
        except GibbsInteractorError:
            raise
        except Exception:
            raise GibbsInteractorError('unable to compute the well masses',
                                       a=a, radius=radius)

    def __sample_rejection(
            self, measure: GibbsMeasure, n: int,
            rng: np.random.Generator) -> typing.Tuple[Array, float]:
        pot = measure.pot
        components = []
        for atom in self.limit_measure(pot).atoms:
            hessian = np.atleast_2d(pot.hessian(atom.location))
            covariance = (REJECTION_INFLATION * measure.a**2 / 2 *
                          np.linalg.inv(hessian))
            components.append((atom.weight,
                               multivariate_normal(atom.location,
                                                   covariance)))
        weights = np.array([weight for weight, _ in components])

        def proposal_density(x: Array) -> Array:
            return sum(weight * np.atleast_1d(component.pdf(x))
                       for weight, component in components)

        def draw(size: int) -> Array:
            counts = rng.multinomial(size, weights)
            draws = [
                np.atleast_2d(component.rvs(size=count,
                                            random_state=rng)).reshape(
                                                count, pot.dim)
                for (_, component), count in zip(components, counts)
                if count > 0
            ]
            return rng.permutation(np.concatenate(draws))

        lower, upper = measure.domain_box
        grid = np.concatenate((draw(_DOMINATION_GRID_POINTS),
                               rng.uniform(lower, upper,
                                           (_DOMINATION_GRID_POINTS,
                                            pot.dim))))
        bound = REJECTION_SAFETY_FACTOR * float(
            np.max(measure.unnormalized(grid) / proposal_density(grid)))
        acceptance_rate = 1.0 / (measure.z_a * bound)
        _logger.info('rejection sampler acceptance rate %.4g for a=%g',
                     acceptance_rate, measure.a)
        if acceptance_rate < MIN_ACCEPTANCE_RATE:
            raise GibbsInteractorError(
                'acceptance rate too low, use a larger noise level or a '
                'custom proposal', acceptance_rate=acceptance_rate,
                a=measure.a)
        accepted: typing.List[Array] = []
        count = 0
        while count < n:
            batch = max(int(1.2 * (n - count) / acceptance_rate),
                        _MIN_PROPOSAL_BATCH)
            candidates = draw(batch)
            ratios = measure.unnormalized(candidates) / (
                bound * proposal_density(candidates))
            keep = rng.uniform(size=batch) < ratios
            accepted.append(candidates[keep])
            count += int(np.sum(keep))
        return np.concatenate(accepted)[:n], acceptance_rate

    def __sample_inversion(self, measure: GibbsMeasure, n: int,
                           rng: np.random.Generator) -> Array:
        lower, upper = measure.domain_box
        grid = np.linspace(lower[0], upper[0], _INVERSION_GRID_POINTS)
        cumulative = scipy.integrate.cumulative_trapezoid(
            measure.unnormalized(grid.reshape(-1, 1)), grid, initial=0.0)
        cumulative /= cumulative[-1]
        return np.interp(rng.uniform(size=n), cumulative,
                         grid).reshape(-1, 1)

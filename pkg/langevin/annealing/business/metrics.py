"""Business logic for statistical distances between empirical and
reference measures.

Total variation distances use the L¹ convention d_TV(μ, ν) = ∫|μ − ν|
with values in [0, 2] (twice the supremum-over-events convention of most
libraries).

"""
import dataclasses
import logging
import math
import typing

import numpy as np
import scipy.ndimage  # type: ignore
import scipy.stats  # type: ignore

from langevin.annealing.business.base import Interactor
from langevin.annealing.business.base import InteractorError
from langevin.annealing.business.gibbs import GibbsMeasure
from langevin.annealing.constants import BANDWIDTH_STABILITY_STD_ERRORS
from langevin.annealing.constants import DEFAULT_BOOTSTRAP_RESAMPLES
from langevin.annealing.constants import DEFAULT_SLICES
from langevin.annealing.constants import KDE_GRID_PADDING
from langevin.annealing.constants import KDE_GRID_POINTS
from langevin.annealing.constants import MAX_TV_DIMENSION
from langevin.annealing.entities import EmpiricalMeasure
from langevin.annealing.entities import LimitMeasure
from langevin.annealing.problems.base import Array

_logger = logging.getLogger(__name__)

Bandwidth: typing.TypeAlias = typing.Union[float, str]

_MIN_TV_SAMPLES = 100
_FALLBACK_BANDWIDTH_FRACTION = 1e-3
_DEGENERATE_SPREAD_FRACTION = 1e-12


class MetricInteractorError(InteractorError):
    """Exception class for all metric interactor errors.

    """
    pass


class UnsupportedDimensionError(MetricInteractorError):
    """Exception class for total variation estimates in unsupported
    dimensions (d > 2); use the sliced Wasserstein distance instead.

    """
    pass


@dataclasses.dataclass
class TvEstimate:
    """Total variation estimate with its bootstrap standard error.

    Attributes
    ----------
    value : float
        The estimate in [0, 2].
    std_error : float
        The bootstrap standard error (NaN without resamples).

    """
    value: float
    std_error: float


def _weighted_quantiles(values: Array, weights: Array,
                        quantiles: typing.Sequence[float]) -> Array:
    order = np.argsort(values)
    sorted_weights = weights[order] / np.sum(weights)
    midpoints = np.cumsum(sorted_weights) - 0.5 * sorted_weights
    return np.interp(quantiles, midpoints, values[order])


def silverman_bandwidth(measure: EmpiricalMeasure) -> Array:
    """Compute per-coordinate Silverman bandwidths
    0.9·min(std, IQR/1.34)·n_eff^(−1/(d+4)), where n_eff is the
    effective sample size of the weights.

    Parameters
    ----------
    measure : EmpiricalMeasure
        The sample cloud.

    Returns
    -------
    numpy.ndarray
        One bandwidth per coordinate. Degenerate coordinates get a
        small fallback bandwidth relative to their magnitude.

    """
    weights = measure.get_weights()
    effective_size = 1.0 / float(np.sum(weights**2))
    bandwidths = np.empty(measure.dim)
    for k in range(measure.dim):
        values = measure.samples[:, k]
        mean = float(np.sum(weights * values))
        std = math.sqrt(float(np.sum(weights * (values - mean)**2)))
        q25, q75 = _weighted_quantiles(values, weights, [0.25, 0.75])
        spread = min(std, (q75 - q25) / 1.34)
        if spread <= 0:
            spread = std
        scale = max(1.0, float(np.max(np.abs(values))))
        if spread <= _DEGENERATE_SPREAD_FRACTION * scale:
            bandwidths[k] = _FALLBACK_BANDWIDTH_FRACTION * scale
            continue
        bandwidths[k] = (0.9 * spread *
                         effective_size**(-1 / (measure.dim + 4)))
    return bandwidths


def _resolve_bandwidth(measure: EmpiricalMeasure,
                       bandwidth: Bandwidth) -> Array:
    if isinstance(bandwidth, str):
        if bandwidth != 'auto':
            raise MetricInteractorError('unknown bandwidth rule',
                                        bandwidth=bandwidth)
        return silverman_bandwidth(measure)
    if bandwidth <= 0:
        raise MetricInteractorError('bandwidth must be positive',
                                    bandwidth=bandwidth)
    return np.full(measure.dim, float(bandwidth))


@dataclasses.dataclass
class _Grid:
    edges: typing.List[Array]

    @property
    def spacings(self) -> Array:
        return np.array([edges[1] - edges[0] for edges in self.edges])

    @property
    def centers(self) -> Array:
        axes = [0.5 * (edges[1:] + edges[:-1]) for edges in self.edges]
        mesh = np.meshgrid(*axes, indexing='ij')
        return np.stack([axis.ravel() for axis in mesh], axis=1)

    @property
    def shape(self) -> typing.Tuple[int, ...]:
        return tuple(edges.shape[0] - 1 for edges in self.edges)


def _shared_grid(lower: Array, upper: Array) -> _Grid:
    edges = []
    for low, high in zip(lower, upper):
        if high <= low:
            high = low + 1.0
        edges.append(np.linspace(low, high, KDE_GRID_POINTS + 1))
    return _Grid(edges)


def _binned_kde(samples: Array, weights: Array, bandwidths: Array,
                grid: _Grid) -> Array:
    if samples.shape[1] == 1:
        histogram, _ = np.histogram(samples[:, 0], bins=grid.edges[0],
                                    weights=weights)
    else:
        histogram, _, _ = np.histogram2d(samples[:, 0], samples[:, 1],
                                         bins=grid.edges, weights=weights)
    smoothed = scipy.ndimage.gaussian_filter(histogram.astype(np.float64),
                                             sigma=bandwidths /
                                             grid.spacings, mode='constant')
    return smoothed / np.sum(smoothed)


def _resample(measure: EmpiricalMeasure,
              rng: np.random.Generator) -> typing.Tuple[Array, Array]:
    indices = rng.choice(measure.n, size=measure.n,
                         p=None if measure.is_uniform else measure.weights)
    return (measure.samples[indices], np.full(measure.n, 1.0 / measure.n))


def _check_tv_dimension(dim: int) -> None:
    if dim > MAX_TV_DIMENSION:
        raise UnsupportedDimensionError(
            'total variation estimates need d <= 2, use the sliced '
            'Wasserstein distance instead', dim=dim)


class MetricInteractor(Interactor):
    """Interactor for distances between measures.

    """
    def tv_empirical(self, p: EmpiricalMeasure, q: EmpiricalMeasure,
                     bandwidth: Bandwidth = 'auto',
                     n_bootstrap: int = DEFAULT_BOOTSTRAP_RESAMPLES,
                     seed: int = 0) -> TvEstimate:
        """Estimate d_TV(p, q) ∈ [0, 2] as the grid L¹ distance between
        binned Gaussian kernel density estimates on a shared grid of
        512 cells per dimension spanning the pooled samples padded by
        3 bandwidths.

        Parameters
        ----------
        p : EmpiricalMeasure
            The first cloud (at least 100 samples, d ≤ 2).
        q : EmpiricalMeasure
            The second cloud (at least 100 samples, same d).
        bandwidth : float or str
            A positive bandwidth, or 'auto' for the Silverman rule per
            cloud.
        n_bootstrap : int
            The number of bootstrap resamples of the standard error.
        seed : int
            The seed of the bootstrap stream.

        Returns
        -------
        TvEstimate
            The estimate and its bootstrap standard error.

        Raises
        ------
        UnsupportedDimensionError
            If d > 2.
        MetricInteractorError
            If the distance cannot be estimated.

        """
        try:
            p_bandwidths, q_bandwidths = self.__tv_bandwidths(
                p, q, bandwidth)
            return self.__tv_estimate(p, q, p_bandwidths, q_bandwidths,
                                      n_bootstrap, seed)
        except MetricInteractorError:
            raise
        except Exception:
            raise MetricInteractorError(
                'unable to estimate the total variation distance')

    def bandwidth_stable(self, p: EmpiricalMeasure, q: EmpiricalMeasure,
                         bandwidth: Bandwidth = 'auto',
                         n_bootstrap: int = DEFAULT_BOOTSTRAP_RESAMPLES,
                         seed: int = 0) -> bool:
        """Check that halving and doubling the bandwidth changes the
        total variation estimate of tv_empirical by less than 3 of its
        bootstrap standard errors.

        Parameters
        ----------
        p : EmpiricalMeasure
            The first cloud (at least 100 samples, d ≤ 2).
        q : EmpiricalMeasure
            The second cloud (at least 100 samples, same d).
        bandwidth : float or str
            A positive bandwidth, or 'auto' for the Silverman rule per
            cloud.
        n_bootstrap : int
            The number of bootstrap resamples of the standard error
            (at least 2).
        seed : int
            The seed of the bootstrap stream.

        Returns
        -------
        bool
            True if the estimate is stable under both bandwidth changes.

        Raises
        ------
        UnsupportedDimensionError
            If d > 2.
        MetricInteractorError
            If the distance cannot be estimated.

        """
        try:
            if n_bootstrap < 2:
                raise MetricInteractorError(
                    'bandwidth stability needs at least 2 bootstrap '
                    'resamples', n_bootstrap=n_bootstrap)
            p_bandwidths, q_bandwidths = self.__tv_bandwidths(
                p, q, bandwidth)
            estimate = self.__tv_estimate(p, q, p_bandwidths, q_bandwidths,
                                          n_bootstrap, seed)
            changes = [
                abs(
                    self.__tv_estimate(p, q, factor * p_bandwidths,
                                       factor * q_bandwidths, 0,
                                       seed).value - estimate.value)
                for factor in (0.5, 2.0)
            ]
            threshold = BANDWIDTH_STABILITY_STD_ERRORS * estimate.std_error
            stable = max(changes) < threshold
            if not stable:
                _logger.warning(
                    'total variation estimate %.4f changes by %.4f and '
                    '%.4f when the bandwidth is halved and doubled '
                    '(threshold %.4f)', estimate.value, changes[0],
                    changes[1], threshold)
            return stable
        except MetricInteractorError:
            raise
        except Exception:
            raise MetricInteractorError(
                'unable to check the bandwidth stability')

    def __tv_bandwidths(self, p: EmpiricalMeasure, q: EmpiricalMeasure,
                        bandwidth: Bandwidth) -> typing.Tuple[Array, Array]:
        if p.dim != q.dim:
            raise MetricInteractorError('dimensions differ', p_dim=p.dim,
                                        q_dim=q.dim)
        _check_tv_dimension(p.dim)
        for measure in (p, q):
            if measure.n < _MIN_TV_SAMPLES:
                raise MetricInteractorError(
                    'total variation estimates need at least 100 samples',
                    n=measure.n)
        return (_resolve_bandwidth(p, bandwidth),
                _resolve_bandwidth(q, bandwidth))

    def __tv_estimate(self, p: EmpiricalMeasure, q: EmpiricalMeasure,
                      p_bandwidths: Array, q_bandwidths: Array,
                      n_bootstrap: int, seed: int) -> TvEstimate:
        padding = KDE_GRID_PADDING * np.maximum(p_bandwidths, q_bandwidths)
        pooled = np.concatenate((p.samples, q.samples))
        grid = _shared_grid(
            np.min(pooled, axis=0) - padding,
            np.max(pooled, axis=0) + padding)

        def distance(p_samples: Array, p_weights: Array, q_samples: Array,
                     q_weights: Array) -> float:
            p_kde = _binned_kde(p_samples, p_weights, p_bandwidths, grid)
            q_kde = _binned_kde(q_samples, q_weights, q_bandwidths, grid)
            return float(min(np.sum(np.abs(p_kde - q_kde)), 2.0))

        value = distance(p.samples, p.get_weights(), q.samples,
                         q.get_weights())
        rng = np.random.default_rng(seed)
        replicates = [
            distance(*_resample(p, rng), *_resample(q, rng))
            for _ in range(n_bootstrap)
        ]
        return TvEstimate(value, _standard_error(replicates))

    def tv_empirical_vs_density(
            self, p: EmpiricalMeasure, g: GibbsMeasure,
            bandwidth: Bandwidth = 'auto',
            n_bootstrap: int = DEFAULT_BOOTSTRAP_RESAMPLES,
            seed: int = 0) -> TvEstimate:
        """Estimate d_TV(p, ν_a) ∈ [0, 2] as the grid L¹ distance between
        a binned Gaussian kernel density estimate of p and the exact
        Gibbs density. The grid spans the padded samples and the Gibbs
        quadrature box.

        Parameters
        ----------
        p : EmpiricalMeasure
            The cloud (at least 100 samples, d ≤ 2).
        g : GibbsMeasure
            The Gibbs measure (same d).
        bandwidth : float or str
            A positive bandwidth, or 'auto' for the Silverman rule.
        n_bootstrap : int
            The number of bootstrap resamples of p.
        seed : int
            The seed of the bootstrap stream.

        Returns
        -------
        TvEstimate
            The estimate and its bootstrap standard error.

        Raises
        ------
        UnsupportedDimensionError
            If d > 2.
        MetricInteractorError
            If the distance cannot be estimated.

        """
        try:
            if p.dim != g.pot.dim:
                raise MetricInteractorError('dimensions differ',
                                            p_dim=p.dim, g_dim=g.pot.dim)
            _check_tv_dimension(p.dim)
            if p.n < _MIN_TV_SAMPLES:
                raise MetricInteractorError(
                    'total variation estimates need at least 100 samples',
                    n=p.n)
            bandwidths = _resolve_bandwidth(p, bandwidth)
            padding = KDE_GRID_PADDING * bandwidths
            box_lower, box_upper = g.resolved_box()
            grid = _shared_grid(
                np.minimum(np.min(p.samples, axis=0) - padding, box_lower),
                np.maximum(np.max(p.samples, axis=0) + padding, box_upper))
            reference = g.density(grid.centers).reshape(grid.shape)
            reference = reference / np.sum(reference)

            def distance(samples: Array, weights: Array) -> float:
                kde = _binned_kde(samples, weights, bandwidths, grid)
                return float(min(np.sum(np.abs(kde - reference)), 2.0))

            value = distance(p.samples, p.get_weights())
            rng = np.random.default_rng(seed)
            replicates = [
                distance(*_resample(p, rng)) for _ in range(n_bootstrap)
            ]
            return TvEstimate(value, _standard_error(replicates))
        except MetricInteractorError:
            raise
        except Exception:
            raise MetricInteractorError(
                'unable to estimate the total variation distance to the '
                'Gibbs measure', a=g.a)

    def w1_1d(self, p: EmpiricalMeasure, q: EmpiricalMeasure) -> float:
        """Compute the Wasserstein-1 distance of one-dimensional clouds.
        Equal-size uniform clouds use the mean absolute difference of
        the sorted samples; otherwise the weighted distribution
        functions are compared exactly.

        Parameters
        ----------
        p : EmpiricalMeasure
            The first one-dimensional cloud.
        q : EmpiricalMeasure
            The second one-dimensional cloud.

        Returns
        -------
        float
            W1(p, q) ≥ 0.

        Raises
        ------
        MetricInteractorError
            If a cloud is not one-dimensional.

        """
        if p.dim != 1 or q.dim != 1:
            raise MetricInteractorError('w1_1d needs one-dimensional clouds',
                                        p_dim=p.dim, q_dim=q.dim)
        return _w1_projected(p.samples[:, 0], p.weights, q.samples[:, 0],
                             q.weights)

    def w1_sliced(self, p: EmpiricalMeasure, q: EmpiricalMeasure,
                  n_slices: int = DEFAULT_SLICES, seed: int = 0) -> float:
        """Compute the sliced Wasserstein-1 distance: the average of the
        one-dimensional distances of the projections onto random unit
        directions.

        Parameters
        ----------
        p : EmpiricalMeasure
            The first cloud.
        q : EmpiricalMeasure
            The second cloud (same d).
        n_slices : int
            The number of random directions.
        seed : int
            The seed of the direction stream.

        Returns
        -------
        float
            The sliced distance ≥ 0.

        Raises
        ------
        MetricInteractorError
            If the dimensions differ or n_slices is not positive.

        """
        if p.dim != q.dim:
            raise MetricInteractorError('dimensions differ', p_dim=p.dim,
                                        q_dim=q.dim)
        if n_slices < 1:
            raise MetricInteractorError('number of slices must be positive',
                                        n_slices=n_slices)
        directions = _random_directions(p.dim, n_slices, seed)
        return float(
            np.mean([
                _w1_projected(p.samples @ direction, p.weights,
                              q.samples @ direction, q.weights)
                for direction in directions
            ]))

    def w1_to_limit(self, p: EmpiricalMeasure, limit: LimitMeasure,
                    n_slices: int = DEFAULT_SLICES, seed: int = 0) -> float:
        """Compute the Wasserstein-1 distance between a cloud and the
        limit measure: exact in d = 1, sliced in d ≥ 2.

        Parameters
        ----------
        p : EmpiricalMeasure
            The cloud.
        limit : LimitMeasure
            The weighted minimizers.
        n_slices : int
            The number of random directions (d ≥ 2).
        seed : int
            The seed of the direction stream (d ≥ 2).

        Returns
        -------
        float
            The distance ≥ 0.

        """
        atoms = limit.to_empirical()
        if p.dim == 1:
            return self.w1_1d(p, atoms)
        return self.w1_sliced(p, atoms, n_slices, seed)

    def tv_gaussian_1d(self, m1: float, s1: float, m2: float,
                       s2: float) -> float:
        """Compute the exact d_TV(N(m1, s1²), N(m2, s2²)) ∈ [0, 2] from
        the crossing points of the densities and the Gaussian
        distribution function.

        Parameters
        ----------
        m1 : float
            The first mean.
        s1 : float
            The first positive standard deviation.
        m2 : float
            The second mean.
        s2 : float
            The second positive standard deviation.

        Returns
        -------
        float
            The L¹ distance of the densities.

        Raises
        ------
        MetricInteractorError
            If a standard deviation is not positive.

        """
        if s1 <= 0 or s2 <= 0:
            raise MetricInteractorError('scales must be positive', s1=s1,
                                        s2=s2)
        if m1 == m2 and s1 == s2:
            return 0.0
        # log φ1 − log φ2 = A·x² + B·x + C
        quadratic = 1 / (2 * s2**2) - 1 / (2 * s1**2)
        linear = m1 / s1**2 - m2 / s2**2
        constant = (m2**2 / (2 * s2**2) - m1**2 / (2 * s1**2) +
                    math.log(s2 / s1))
        if quadratic == 0:
            crossings = [-constant / linear]
        else:
            discriminant = linear**2 - 4 * quadratic * constant
            if discriminant <= 0:
                crossings = []
            else:
                root = math.sqrt(discriminant)
                crossings = sorted([(-linear - root) / (2 * quadratic),
                                    (-linear + root) / (2 * quadratic)])
        bounds = [-math.inf] + crossings + [math.inf]
        first = scipy.stats.norm(m1, s1)
        second = scipy.stats.norm(m2, s2)
        distance = 0.0
        for lower, upper in zip(bounds[:-1], bounds[1:]):
            distance += abs((first.cdf(upper) - first.cdf(lower)) -
                            (second.cdf(upper) - second.cdf(lower)))
        return float(min(distance, 2.0))


def _w1_projected(p_values: Array, p_weights: typing.Optional[Array],
                  q_values: Array,
                  q_weights: typing.Optional[Array]) -> float:
    if (p_weights is None and q_weights is None
            and p_values.shape == q_values.shape):
        return float(np.mean(np.abs(np.sort(p_values) - np.sort(q_values))))
    return float(
        scipy.stats.wasserstein_distance(p_values, q_values, p_weights,
                                         q_weights))


def _random_directions(dim: int, n_slices: int, seed: int) -> Array:
    rng = np.random.default_rng(seed)
    directions = rng.standard_normal((n_slices, dim))
    return directions / np.linalg.norm(directions, axis=1, keepdims=True)


def _standard_error(replicates: typing.List[float]) -> float:
    if len(replicates) < 2:
        return math.nan
    return float(np.std(replicates, ddof=1))

"""Business logic for auditing the standing assumptions on the
potential and the diffusion field.

"""
import dataclasses
import logging
import math
import typing

import numpy as np
import pandas as pd
from scipy.stats import qmc  # type: ignore

from langevin.annealing.business.base import Interactor
from langevin.annealing.business.base import InteractorError
from langevin.annealing.constants import AUDIT_BOX_HALF_WIDTH
from langevin.annealing.constants import AUDIT_GRID_SIZE
from langevin.annealing.problems.base import Array
from langevin.annealing.problems.base import DiffusionField
from langevin.annealing.problems.base import Potential
from langevin.annealing.problems.drift import drift

_logger = logging.getLogger(__name__)

_MINIMIZER_VALUE_TOLERANCE = 1e-10
_MINIMIZER_GRADIENT_TOLERANCE = 1e-8
_MIN_PAIR_DISTANCE = 1e-12


class AssumptionInteractorError(InteractorError):
    """Exception class for all assumption interactor errors.

    """
    pass


@dataclasses.dataclass
class AuditEntry:
    """Result of auditing a single assumption.

    Attributes
    ----------
    name : str
        The name of the assumption.
    audited : bool
        True if the assumption was checked.
    grid : str
        Description of the points the assumption was checked on.
    constant : float
        The empirical constant of the assumption (e.g. the smallest
        feasible growth constant).
    margin : float
        The worst-case margin (non-negative if the assumption holds).

    """
    name: str
    audited: bool
    grid: str
    constant: float
    margin: float

    @property
    def passed(self) -> bool:
        """True if the worst-case margin is non-negative."""
        return self.margin >= 0


@dataclasses.dataclass
class AssumptionReport:
    """Report of an assumption audit.

    Attributes
    ----------
    entries : list of AuditEntry
        One entry per audited assumption.

    """
    entries: typing.List[AuditEntry]

    @property
    def passed(self) -> bool:
        """True if every audited assumption passed."""
        return all(entry.passed for entry in self.entries if entry.audited)

    def get_entry(self, name: str) -> AuditEntry:
        """Get the entry of an assumption.

        Parameters
        ----------
        name : str
            The name of the assumption.

        Returns
        -------
        AuditEntry
            The entry of the assumption.

        Raises
        ------
        KeyError
            If there is no entry with the given name.

        """
        for entry in self.entries:
            if entry.name == name:
                return entry
        raise KeyError(name)

    def to_frame(self) -> pd.DataFrame:
        """Convert the report to a data frame.

        Returns
        -------
        pandas.DataFrame
            One row per entry with the columns name, audited, grid,
            constant, margin, and pass.

        """
        return pd.DataFrame([{
            'name': entry.name,
            'audited': entry.audited,
            'grid': entry.grid,
            'constant': entry.constant,
            'margin': entry.margin,
            'pass': entry.passed
        } for entry in self.entries])


def audit_grid(dim: int, size: int = AUDIT_GRID_SIZE,
               half_width: float = AUDIT_BOX_HALF_WIDTH,
               seed: int = 0) -> Array:
    """Generate quasi-uniform audit points in the box [−h, h]^d.

    Parameters
    ----------
    dim : int
        The dimension d.
    size : int
        The number of points.
    half_width : float
        The half width h of the box.
    seed : int
        The seed of the scrambled Halton sequence (d ≥ 2).

    Returns
    -------
    numpy.ndarray
        The points of shape (size, d). For d = 1 they are equispaced.

    """
    if dim == 1:
        return np.linspace(-half_width, half_width, size).reshape(-1, 1)
    sampler = qmc.Halton(d=dim, seed=np.random.default_rng(seed))
    return qmc.scale(sampler.random(size), [-half_width] * dim,
                     [half_width] * dim)


def audit_pairs(dim: int, r0: float, size: int = AUDIT_GRID_SIZE,
                half_width: float = AUDIT_BOX_HALF_WIDTH,
                seed: int = 0) -> typing.Tuple[Array, Array]:
    """Draw uniform point pairs in [−h, h]^d with both points outside
    the ball B(0, r0).

    Parameters
    ----------
    dim : int
        The dimension d.
    r0 : float
        The radius of the excluded ball.
    size : int
        The number of pairs.
    half_width : float
        The half width h of the box (larger than r0).
    seed : int
        The seed of the random generator.

    Returns
    -------
    tuple of numpy.ndarray
        The first and second points of the pairs, each of shape
        (size, d).

    """
    rng = np.random.default_rng(seed)
    outside: typing.List[Array] = []
    count = 0
    while count < 2 * size:
        points = rng.uniform(-half_width, half_width, (2 * size, dim))
        points = points[np.linalg.norm(points, axis=1) >= r0]
        outside.append(points)
        count += points.shape[0]
    points = np.concatenate(outside)[:2 * size]
    return points[:size], points[size:]


class AssumptionInteractor(Interactor):
    """Interactor for auditing the standing assumptions numerically.
    Audits are grid-based certificates, not proofs.

    """
    @dataclasses.dataclass
    class AuditRequest:
        """Request data for auditing the standing assumptions.

        Attributes
        ----------
        pot : Potential
            The potential V.
        sigma : DiffusionField
            The diffusion field σ.
        grid : numpy.ndarray
            The audit points of shape (n, d).
        pairs : tuple of numpy.ndarray
            The first and second points of the audit pairs.
        r0 : float
            Pairs with a point inside B(0, r0) are excluded from the
            dissipativity audit.
        alpha0 : float
            The dissipativity constant to be certified.
        growth_bound : float or None
            The constant C of |∇V|² ≤ C·V to be certified (only
            reported if None).
        hessian_bound : float or None
            The bound on the spectral norm of ∇²V to be certified
            (only reported if None).
        a_max : float
            The largest noise level A of the drift Lipschitz audit.
        lipschitz_bound : float or None
            The drift Lipschitz constant to be certified (only checked
            for finiteness if None).

        """
        pot: Potential
        sigma: DiffusionField
        grid: Array
        pairs: typing.Tuple[Array, Array]
        r0: float
        alpha0: float
        growth_bound: typing.Optional[float] = None
        hessian_bound: typing.Optional[float] = None
        a_max: float = 1.0
        lipschitz_bound: typing.Optional[float] = None

    def audit_assumptions(self, request: AuditRequest) -> AssumptionReport:
        """Audit the standing assumptions on a grid and on point pairs.

        Parameters
        ----------
        request : AuditRequest
            The request data for the audit.

        Returns
        -------
        AssumptionReport
            The worst-case margins of all audited assumptions.

        Raises
        ------
        AssumptionInteractorError
            If the grid or the pairs are empty, or if the audit cannot
            be performed.

        """
        try:
            grid = np.asarray(request.grid, dtype=np.float64)
            first = np.asarray(request.pairs[0], dtype=np.float64)
            second = np.asarray(request.pairs[1], dtype=np.float64)
            if grid.ndim != 2 or grid.shape[0] == 0:
                raise AssumptionInteractorError('audit grid is empty')
            if first.ndim != 2 or first.shape[0] == 0 or \
                    first.shape != second.shape:
                raise AssumptionInteractorError('audit pairs are empty')
            grid_description = '{} points in [{:g}, {:g}]^{}'.format(
                grid.shape[0], float(grid.min()), float(grid.max()),
                grid.shape[1])
            pair_description = '{} pairs'.format(first.shape[0])
            entries = self.__audit_minimizers(request.pot)
            entries += self.__audit_potential(request, grid,
                                              grid_description)
            entries += self.__audit_diffusion(request.sigma, grid,
                                              grid_description)
            entries.append(
                self.__audit_dissipativity(request, first, second,
                                           pair_description))
            entries += self.__audit_drift_lipschitz(request, first, second,
                                                    pair_description)
            report = AssumptionReport(entries)
            _logger.info('assumption audit %s',
                         'passed' if report.passed else 'failed')
            return report
        except AssumptionInteractorError:
            raise
        except Exception:
            raise AssumptionInteractorError(
                'unable to audit the assumptions', pot=request.pot,
                sigma=request.sigma)

    def __audit_minimizers(self, pot: Potential) -> typing.List[AuditEntry]:
        minimizers = pot.minimizers
        description = '{} declared minimizers'.format(len(minimizers))
        locations = np.array([minimizer.location for minimizer in minimizers])
        value_error = float(
            np.max(np.abs(pot.evaluate(locations) - pot.v_star)))
        gradient_error = float(
            np.max(np.linalg.norm(pot.gradient(locations), axis=1)))
        smallest_determinant = min(minimizer.hessian_determinant
                                   for minimizer in minimizers)
        return [
            AuditEntry('minimizer_value', True, description, value_error,
                       _MINIMIZER_VALUE_TOLERANCE - value_error),
            AuditEntry('minimizer_gradient', True, description,
                       gradient_error,
                       _MINIMIZER_GRADIENT_TOLERANCE - gradient_error),
            AuditEntry('minimizer_hessian', True, description,
                       smallest_determinant, smallest_determinant)
        ]

    def __audit_potential(self, request: AuditRequest, grid: Array,
                          description: str) -> typing.List[AuditEntry]:
        values = request.pot.evaluate(grid)
        gradients = request.pot.gradient(grid)
        hessians = request.pot.hessian(grid)
        smallest_value = float(np.min(values))
        growth = float(np.max(np.sum(gradients**2, axis=1) / values))
        hessian_norm = float(np.max(np.linalg.norm(hessians, ord=2,
                                                   axis=(1, 2))))
        return [
            AuditEntry('positivity', True, description, smallest_value,
                       smallest_value),
            AuditEntry('gradient_growth', True, description, growth,
                       _bound_margin(request.growth_bound, growth)),
            AuditEntry('hessian_bound', True, description, hessian_norm,
                       _bound_margin(request.hessian_bound, hessian_norm))
        ]

    def __audit_diffusion(self, sigma: DiffusionField, grid: Array,
                          description: str) -> typing.List[AuditEntry]:
        smallest_eigenvalue = float(
            np.min(np.linalg.eigvalsh(sigma.covariance(grid))))
        largest_norm = float(
            np.max(np.linalg.norm(sigma.evaluate(grid), ord=2, axis=(1, 2))))
        return [
            AuditEntry('ellipticity', True, description, smallest_eigenvalue,
                       smallest_eigenvalue - sigma.ellipticity_lb**2),
            AuditEntry('sup_norm', True, description, largest_norm,
                       sigma.sup_norm_ub - largest_norm)
        ]

    def __audit_dissipativity(self, request: AuditRequest, first: Array,
                              second: Array, description: str) -> AuditEntry:
        differences = first - second
        squared_distances = np.sum(differences**2, axis=1)
        selected = ((np.linalg.norm(first, axis=1) >= request.r0) &
                    (np.linalg.norm(second, axis=1) >= request.r0) &
                    (squared_distances > _MIN_PAIR_DISTANCE**2))
        if not np.any(selected):
            raise AssumptionInteractorError(
                'no audit pairs outside the excluded ball', r0=request.r0)
        first = first[selected]
        second = second[selected]
        differences = differences[selected]
        squared_distances = squared_distances[selected]
        fields = [
            np.einsum('nij,nj->ni', request.sigma.covariance(points),
                      request.pot.gradient(points))
            for points in (first, second)
        ]
        inner_products = np.sum((fields[0] - fields[1]) * differences,
                                axis=1)
        margin = float(
            np.min(inner_products - request.alpha0 * squared_distances))
        constant = float(np.min(inner_products / squared_distances))
        return AuditEntry(
            'dissipativity', True,
            '{} outside B(0, {:g}) ({} used)'.format(description, request.r0,
                                                     first.shape[0]),
            constant, margin)

    def __audit_drift_lipschitz(self, request: AuditRequest, first: Array,
                                second: Array,
                                description: str) -> typing.List[AuditEntry]:
        distances = np.linalg.norm(first - second, axis=1)
        selected = distances > _MIN_PAIR_DISTANCE
        entries = []
        for level in (0.0, request.a_max):
            drift_differences = (
                drift(request.pot, request.sigma, level, first[selected]) -
                drift(request.pot, request.sigma, level, second[selected]))
            quotient = float(
                np.max(
                    np.linalg.norm(drift_differences, axis=1) /
                    distances[selected]))
            if request.lipschitz_bound is not None:
                margin = request.lipschitz_bound - quotient
            else:
                margin = math.inf if math.isfinite(quotient) else -math.inf
            entries.append(
                AuditEntry('drift_lipschitz_a={:g}'.format(level), True,
                           description, quotient, margin))
        return entries


def _bound_margin(bound: typing.Optional[float], constant: float) -> float:
    if bound is None:
        return math.inf
    return bound - constant

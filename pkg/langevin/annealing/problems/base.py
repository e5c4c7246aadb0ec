"""Base classes for all potentials, diffusion fields, and problem
errors.

"""
import abc
import dataclasses
import typing

import numpy as np
import numpy.typing as npt
from pantos.common.exceptions import ErrorCreator

from langevin.annealing.constants import FD_STEP
from langevin.annealing.exceptions import AnnealingLibraryError

Array: typing.TypeAlias = npt.NDArray[np.float64]


class ProblemError(AnnealingLibraryError):
    """Base exception class for all potential and diffusion field
    errors.

    """
    pass


def as_batch(x: npt.ArrayLike, dim: int) -> typing.Tuple[Array, bool]:
    """Convert a point or a batch of points to a batch.

    Parameters
    ----------
    x : array_like
        A single point of shape (d,) or a batch of shape (n, d). For
        d = 1, scalars and arrays of shape (n,) are accepted as well.
    dim : int
        The dimension d of the points.

    Returns
    -------
    tuple of numpy.ndarray and bool
        The batch of shape (n, d) and whether the input was a single
        point.

    Raises
    ------
    ProblemError
        If the input shape does not match the dimension.

    """
    points = np.asarray(x, dtype=np.float64)
    if points.ndim == 0:
        if dim != 1:
            raise ProblemError('scalar point for a multidimensional problem',
                               dim=dim)
        return points.reshape(1, 1), True
    if points.ndim == 1:
        if points.shape[0] == dim:
            return points.reshape(1, dim), True
        if dim == 1:
            return points.reshape(-1, 1), False
    elif points.ndim == 2 and points.shape[1] == dim:
        return points, False
    raise ProblemError('point shape does not match the dimension',
                       shape=points.shape, dim=dim)


class _Registered(abc.ABC):
    @classmethod
    @abc.abstractmethod
    def get_name(cls) -> str:  # pragma: no cover
        """Get the name under which the class is registered.

        Returns
        -------
        str
            The registry name (used in configuration files).

        """
        pass

    @classmethod
    def find_subclasses(cls) -> typing.Dict[str, type]:
        """Find all concrete subclasses of the class.

        Returns
        -------
        dict
            The concrete subclasses by their registry name.

        """
        subclasses: typing.Dict[str, type] = {}
        pending = list(cls.__subclasses__())
        while len(pending) > 0:
            subclass = pending.pop()
            pending.extend(subclass.__subclasses__())
            if not getattr(subclass, '__abstractmethods__', None):
                subclasses[subclass.get_name()] = subclass
        return subclasses


@dataclasses.dataclass(frozen=True)
class Minimizer:
    """Global minimizer of a potential.

    Attributes
    ----------
    location : numpy.ndarray
        The minimizer x* of shape (d,).
    hessian_determinant : float
        The determinant of the Hessian of the potential at x*.

    """
    location: Array
    hessian_determinant: float


@dataclasses.dataclass(frozen=True)
class PotentialMetadata:
    """Structural metadata declared by a potential's constructor.

    Attributes
    ----------
    r0 : float
        Radius outside of which the dissipativity condition holds.
    alpha0 : float
        Dissipativity constant of the gradient outside B(0, r0).
    splice_radius : float or None
        Radius beyond which the potential is quadratic (if spliced).

    """
    r0: float
    alpha0: float
    splice_radius: typing.Optional[float] = None


class Potential(_Registered, ErrorCreator[ProblemError]):
    """Base class for all potentials V. Evaluators accept a single
    point of shape (d,) or a batch of shape (n, d).

    """
    def __init__(self, dim: int):
        """Construct a potential instance.

        Parameters
        ----------
        dim : int
            The dimension d of the state space.

        Raises
        ------
        ProblemError
            If the dimension is not positive.

        """
        if dim < 1:
            raise self._create_error('dimension must be positive', dim=dim)
        self.__dim = dim

    @property
    def dim(self) -> int:
        """The dimension d of the state space."""
        return self.__dim

    @property
    @abc.abstractmethod
    def v_star(self) -> float:  # pragma: no cover
        """The minimum value V* > 0 of the potential."""
        pass

    @property
    @abc.abstractmethod
    def minimizers(self) -> typing.List[Minimizer]:  # pragma: no cover
        """The global minimizers with their Hessian determinants."""
        pass

    @property
    @abc.abstractmethod
    def metadata(self) -> PotentialMetadata:  # pragma: no cover
        """The structural metadata of the potential."""
        pass

    def evaluate(self, x: npt.ArrayLike) -> typing.Union[float, Array]:
        """Evaluate the potential.

        Parameters
        ----------
        x : array_like
            A point of shape (d,) or a batch of shape (n, d).

        Returns
        -------
        float or numpy.ndarray
            V(x), or the values of shape (n,) for a batch.

        Raises
        ------
        ProblemError
            If the point shape is invalid or the value is not finite.

        """
        points, single = as_batch(x, self.dim)
        values = self._evaluate(points)
        if not np.all(np.isfinite(values)):
            raise self._create_error('non-finite potential value')
        return float(values[0]) if single else values

    def gradient(self, x: npt.ArrayLike) -> Array:
        """Evaluate the gradient of the potential.

        Parameters
        ----------
        x : array_like
            A point of shape (d,) or a batch of shape (n, d).

        Returns
        -------
        numpy.ndarray
            The gradient of shape (d,), or (n, d) for a batch.

        Raises
        ------
        ProblemError
            If the point shape is invalid or the gradient is not
            finite.

        """
        points, single = as_batch(x, self.dim)
        gradients = self._gradient(points)
        if not np.all(np.isfinite(gradients)):
            raise self._create_error('non-finite potential gradient')
        return gradients[0] if single else gradients

    def hessian(self, x: npt.ArrayLike) -> Array:
        """Evaluate the Hessian of the potential. Subclasses without a
        closed form use central finite differences of the gradient.

        Parameters
        ----------
        x : array_like
            A point of shape (d,) or a batch of shape (n, d).

        Returns
        -------
        numpy.ndarray
            The Hessian of shape (d, d), or (n, d, d) for a batch.

        """
        points, single = as_batch(x, self.dim)
        hessians = self._hessian(points)
        return hessians[0] if single else hessians

    @abc.abstractmethod
    def _evaluate(self, points: Array) -> Array:  # pragma: no cover
        pass

    @abc.abstractmethod
    def _gradient(self, points: Array) -> Array:  # pragma: no cover
        pass

    def _hessian(self, points: Array) -> Array:
        hessians = np.empty((points.shape[0], self.dim, self.dim))
        for j in range(self.dim):
            shift = np.zeros(self.dim)
            shift[j] = FD_STEP
            hessians[:, :, j] = (self._gradient(points + shift) -
                                 self._gradient(points - shift)) / (2 *
                                                                    FD_STEP)
        return 0.5 * (hessians + np.swapaxes(hessians, 1, 2))


class DiffusionField(_Registered, ErrorCreator[ProblemError]):
    """Base class for all diffusion fields σ. Evaluators accept a
    single point of shape (d,) or a batch of shape (n, d).

    """
    def __init__(self, dim: int):
        """Construct a diffusion field instance.

        Parameters
        ----------
        dim : int
            The dimension d of the state space.

        Raises
        ------
        ProblemError
            If the dimension is not positive.

        """
        if dim < 1:
            raise self._create_error('dimension must be positive', dim=dim)
        self.__dim = dim

    @property
    def dim(self) -> int:
        """The dimension d of the state space."""
        return self.__dim

    @property
    @abc.abstractmethod
    def ellipticity_lb(self) -> float:  # pragma: no cover
        """The declared ellipticity bound: σσᵀ ≥ lb² I."""
        pass

    @property
    @abc.abstractmethod
    def sup_norm_ub(self) -> float:  # pragma: no cover
        """The declared bound on the spectral norm of σ."""
        pass

    def evaluate(self, x: npt.ArrayLike) -> Array:
        """Evaluate the diffusion matrix σ.

        Parameters
        ----------
        x : array_like
            A point of shape (d,) or a batch of shape (n, d).

        Returns
        -------
        numpy.ndarray
            σ(x) of shape (d, d), or (n, d, d) for a batch.

        Raises
        ------
        ProblemError
            If the point shape is invalid or σ is not finite.

        """
        points, single = as_batch(x, self.dim)
        sigmas = self._evaluate(points)
        if not np.all(np.isfinite(sigmas)):
            raise self._create_error('non-finite diffusion coefficient')
        return sigmas[0] if single else sigmas

    def covariance(self, x: npt.ArrayLike) -> Array:
        """Evaluate σσᵀ.

        Parameters
        ----------
        x : array_like
            A point of shape (d,) or a batch of shape (n, d).

        Returns
        -------
        numpy.ndarray
            (σσᵀ)(x) of shape (d, d), or (n, d, d) for a batch.

        """
        sigmas = self.evaluate(x)
        return np.einsum('...ij,...kj->...ik', sigmas, sigmas)

    def upsilon(self, x: npt.ArrayLike) -> typing.Optional[Array]:
        """Evaluate the closed form of the correction field
        Υ_i = Σ_j ∂_j(σσᵀ)_ij if the diffusion field has one.

        Parameters
        ----------
        x : array_like
            A point of shape (d,) or a batch of shape (n, d).

        Returns
        -------
        numpy.ndarray or None
            Υ(x) of shape (d,) or (n, d), or None if no closed form is
            available.

        """
        points, single = as_batch(x, self.dim)
        upsilons = self._upsilon(points)
        if upsilons is None:
            return None
        return upsilons[0] if single else upsilons

    def is_constant(self) -> bool:
        """Determine if σ does not depend on the state.

        Returns
        -------
        bool
            True if σ is constant (Υ vanishes identically).

        """
        return False

    @abc.abstractmethod
    def _evaluate(self, points: Array) -> Array:  # pragma: no cover
        pass

    def _upsilon(self, points: Array) -> typing.Optional[Array]:
        return None

"""Module defining the measure entities shared by the business logic.

"""
import dataclasses
import typing

import numpy as np

from langevin.annealing.exceptions import AnnealingLibraryError
from langevin.annealing.problems.base import Array


class EntityError(AnnealingLibraryError):
    """Exception class for invalid entities.

    """
    pass


@dataclasses.dataclass
class EmpiricalMeasure:
    """Weighted sample cloud.

    Attributes
    ----------
    samples : numpy.ndarray
        The finite samples of shape (n, d); arrays of shape (n,) are
        taken as one-dimensional samples.
    weights : numpy.ndarray or None
        The positive weights of shape (n,) summing to 1 (uniform if
        None).

    """
    samples: Array
    weights: typing.Optional[Array] = None

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=np.float64)
        if samples.ndim == 1:
            samples = samples.reshape(-1, 1)
        if samples.ndim != 2 or samples.shape[0] == 0:
            raise EntityError('samples must be a non-empty (n, d) matrix',
                              shape=samples.shape)
        if not np.all(np.isfinite(samples)):
            raise EntityError('samples must be finite')
        self.samples = samples
        if self.weights is not None:
            weights = np.asarray(self.weights, dtype=np.float64)
            if weights.shape != (samples.shape[0], ) or np.any(weights <= 0):
                raise EntityError('weights must be positive, one per sample')
            if abs(float(np.sum(weights)) - 1) > 1e-9:
                raise EntityError('weights must sum to 1',
                                  total=float(np.sum(weights)))
            self.weights = weights

    @property
    def n(self) -> int:
        """The number of samples."""
        return self.samples.shape[0]

    @property
    def dim(self) -> int:
        """The dimension of the samples."""
        return self.samples.shape[1]

    @property
    def is_uniform(self) -> bool:
        """True if all samples have the same weight."""
        return self.weights is None

    def get_weights(self) -> Array:
        """Get the sample weights.

        Returns
        -------
        numpy.ndarray
            The weights of shape (n,) (uniform ones made explicit).

        """
        if self.weights is None:
            return np.full(self.n, 1.0 / self.n)
        return self.weights


@dataclasses.dataclass
class Atom:
    """Weighted Dirac mass.

    Attributes
    ----------
    location : numpy.ndarray
        The location of shape (d,).
    weight : float
        The positive weight.

    """
    location: Array
    weight: float


@dataclasses.dataclass
class LimitMeasure:
    """Weighted Dirac mixture on the global minimizers of a potential.

    Attributes
    ----------
    atoms : list of Atom
        The atoms, with weights summing to 1.

    """
    atoms: typing.List[Atom]

    @property
    def weights(self) -> Array:
        """The atom weights."""
        return np.array([atom.weight for atom in self.atoms])

    @property
    def locations(self) -> Array:
        """The atom locations of shape (k, d)."""
        return np.array([atom.location for atom in self.atoms])

    def to_empirical(self) -> EmpiricalMeasure:
        """Convert the mixture to a weighted empirical measure.

        Returns
        -------
        EmpiricalMeasure
            The atoms as weighted samples.

        """
        return EmpiricalMeasure(self.locations, self.weights)

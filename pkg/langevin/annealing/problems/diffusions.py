"""Module for the builtin diffusion fields and their errors.

"""
import typing

import numpy as np

from langevin.annealing.problems.base import Array
from langevin.annealing.problems.base import DiffusionField
from langevin.annealing.problems.base import ProblemError


class ConstantDiffusionError(ProblemError):
    """Exception class for all constant diffusion field errors.

    """
    pass


class ConstantDiffusion(DiffusionField):
    """Constant diffusion field σ(x) = M.

    """
    def __init__(self, dim: int = 1, scale: float = 1.0,
                 matrix: typing.Optional[typing.Sequence[typing.Sequence[
                     float]]] = None):
        """Construct a constant diffusion field.

        Parameters
        ----------
        dim : int
            The dimension d.
        scale : float
            The multiple of the identity used if no matrix is given.
        matrix : sequence of sequence of float or None
            The nonsingular d×d matrix M.

        Raises
        ------
        ConstantDiffusionError
            If the matrix is singular or does not match the dimension.

        """
        super().__init__(dim)
        self.__matrix = (scale * np.eye(dim) if matrix is None else
                         np.asarray(matrix, dtype=np.float64))
        if self.__matrix.shape != (dim, dim):
            raise self._create_error('matrix does not match the dimension',
                                     shape=self.__matrix.shape, dim=dim)
        singular_values = np.linalg.svd(self.__matrix, compute_uv=False)
        if singular_values[-1] <= 0:
            raise self._create_error('diffusion matrix is singular')
        self.__ellipticity_lb = float(singular_values[-1])
        self.__sup_norm_ub = float(singular_values[0])

    @classmethod
    def get_name(cls) -> str:
        # Docstring inherited
        return 'constant'

    @classmethod
    def get_error_class(cls) -> type[ProblemError]:
        # Docstring inherited
        return ConstantDiffusionError

    @property
    def ellipticity_lb(self) -> float:
        # Docstring inherited
        return self.__ellipticity_lb

    @property
    def sup_norm_ub(self) -> float:
        # Docstring inherited
        return self.__sup_norm_ub

    def is_constant(self) -> bool:
        # Docstring inherited
        return True

    def _evaluate(self, points: Array) -> Array:
        return np.broadcast_to(self.__matrix,
                               (points.shape[0], self.dim, self.dim)).copy()

    def _upsilon(self, points: Array) -> typing.Optional[Array]:
        return np.zeros_like(points)


class SineDiagonalDiffusionError(ProblemError):
    """Exception class for all sine-modulated diagonal diffusion field
    errors.

    """
    pass


class SineDiagonalDiffusion(DiffusionField):
    """Diagonal diffusion field σ(x) = diag(c + m·sin(x_i)) with the
    closed-form correction Υ_i(x) = 2(c + m·sin(x_i))·m·cos(x_i).

    """
    def __init__(self, dim: int = 1, base: float = 2.0,
                 amplitude: float = 1.0):
        """Construct a sine-modulated diagonal diffusion field.

        Parameters
        ----------
        dim : int
            The dimension d.
        base : float
            The base level c.
        amplitude : float
            The modulation amplitude m, with |m| < c.

        Raises
        ------
        SineDiagonalDiffusionError
            If the field would not be uniformly elliptic.

        """
        super().__init__(dim)
        if base - abs(amplitude) <= 0:
            raise self._create_error('amplitude must be smaller than base',
                                     base=base, amplitude=amplitude)
        self.__base = float(base)
        self.__amplitude = float(amplitude)

    @classmethod
    def get_name(cls) -> str:
        # Docstring inherited
        return 'sine_diagonal'

    @classmethod
    def get_error_class(cls) -> type[ProblemError]:
        # Docstring inherited
        return SineDiagonalDiffusionError

    @property
    def ellipticity_lb(self) -> float:
        # Docstring inherited
        return self.__base - abs(self.__amplitude)

    @property
    def sup_norm_ub(self) -> float:
        # Docstring inherited
        return self.__base + abs(self.__amplitude)

    def _evaluate(self, points: Array) -> Array:
        sigmas = np.zeros((points.shape[0], self.dim, self.dim))
        diagonal = np.arange(self.dim)
        sigmas[:, diagonal, diagonal] = self.__scales(points)
        return sigmas

    def _upsilon(self, points: Array) -> typing.Optional[Array]:
        return (2 * self.__scales(points) * self.__amplitude *
                np.cos(points))

    def __scales(self, points: Array) -> Array:
        return self.__base + self.__amplitude * np.sin(points)


class ShearedDiffusionError(ProblemError):
    """Exception class for all sheared diffusion field errors.

    """
    pass


class ShearedDiffusion(DiffusionField):
    """Non-diagonal diffusion field σ(x) = diag(c + m·sin(x_i)) +
    k·tanh(x_1)·E_12 without a closed-form correction term.

    """
    def __init__(self, dim: int = 2, base: float = 2.0,
                 amplitude: float = 0.5, shear: float = 0.5):
        """Construct a sheared diffusion field.

        Parameters
        ----------
        dim : int
            The dimension d ≥ 2.
        base : float
            The base level c of the diagonal.
        amplitude : float
            The modulation amplitude m of the diagonal.
        shear : float
            The shear k of the (1, 2) entry, with |m| + |k| < c.

        Raises
        ------
        ShearedDiffusionError
            If the dimension is smaller than 2 or the field would not
            be uniformly elliptic.

        """
        super().__init__(dim)
        if dim < 2:
            raise self._create_error('sheared diffusion needs d >= 2',
                                     dim=dim)
        if base - abs(amplitude) - abs(shear) <= 0:
            raise self._create_error(
                'amplitude and shear must be smaller than base', base=base,
                amplitude=amplitude, shear=shear)
        self.__base = float(base)
        self.__amplitude = float(amplitude)
        self.__shear = float(shear)

    @classmethod
    def get_name(cls) -> str:
        # Docstring inherited
        return 'sheared'

    @classmethod
    def get_error_class(cls) -> type[ProblemError]:
        # Docstring inherited
        return ShearedDiffusionError

    @property
    def ellipticity_lb(self) -> float:
        # Docstring inherited
        return self.__base - abs(self.__amplitude) - abs(self.__shear)

    @property
    def sup_norm_ub(self) -> float:
        # Docstring inherited
        return self.__base + abs(self.__amplitude) + abs(self.__shear)

    def _evaluate(self, points: Array) -> Array:
        sigmas = np.zeros((points.shape[0], self.dim, self.dim))
        diagonal = np.arange(self.dim)
        sigmas[:, diagonal, diagonal] = (self.__base + self.__amplitude *
                                         np.sin(points))
        sigmas[:, 0, 1] = self.__shear * np.tanh(points[:, 0])
        return sigmas

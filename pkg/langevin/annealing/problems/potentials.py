"""Module for the builtin potentials and their errors.

"""
import itertools
import typing

import numpy as np

from langevin.annealing.problems.base import Array
from langevin.annealing.problems.base import Minimizer
from langevin.annealing.problems.base import Potential
from langevin.annealing.problems.base import PotentialMetadata
from langevin.annealing.problems.base import ProblemError

_SPLICE_OFFSET = 2.0
_R0_OFFSET = 1.0
_ALPHA0_GRID_POINTS = 400
_CUTOFF_WIDTH = 2.0
_FAR_FIELD_ALPHA0 = 0.5


class QuadraticPotentialError(ProblemError):
    """Exception class for all quadratic potential errors.

    """
    pass


class QuadraticPotential(Potential):
    """Quadratic potential V(x) = V* + ½ Σ c_i (x_i − m_i)².

    """
    def __init__(self, dim: int = 1,
                 curvature: typing.Union[float, typing.Sequence[float]] = 1.0,
                 center: typing.Optional[typing.Sequence[float]] = None,
                 v_star: float = 1.0):
        """Construct a quadratic potential.

        Parameters
        ----------
        dim : int
            The dimension d.
        curvature : float or sequence of float
            The positive curvatures c_i (a scalar applies to every
            coordinate).
        center : sequence of float or None
            The minimizer m (the origin if None).
        v_star : float
            The positive minimum value V*.

        Raises
        ------
        QuadraticPotentialError
            If an argument is invalid.

        """
        super().__init__(dim)
        self.__curvature = np.broadcast_to(
            np.asarray(curvature, dtype=np.float64), (dim, )).copy()
        self.__center = (np.zeros(dim) if center is None else np.asarray(
            center, dtype=np.float64))
        if self.__center.shape != (dim, ):
            raise self._create_error('center does not match the dimension',
                                     center=center, dim=dim)
        if np.any(self.__curvature <= 0):
            raise self._create_error('curvatures must be positive',
                                     curvature=curvature)
        if v_star <= 0:
            raise self._create_error('minimum value must be positive',
                                     v_star=v_star)
        self.__v_star = float(v_star)

    @classmethod
    def get_name(cls) -> str:
        # Docstring inherited
        return 'quadratic'

    @classmethod
    def get_error_class(cls) -> type[ProblemError]:
        # Docstring inherited
        return QuadraticPotentialError

    @property
    def v_star(self) -> float:
        # Docstring inherited
        return self.__v_star

    @property
    def minimizers(self) -> typing.List[Minimizer]:
        # Docstring inherited
        return [
            Minimizer(self.__center.copy(), float(np.prod(self.__curvature)))
        ]

    @property
    def metadata(self) -> PotentialMetadata:
        # Docstring inherited
        return PotentialMetadata(r0=0.0,
                                 alpha0=float(np.min(self.__curvature)))

    def _evaluate(self, points: Array) -> Array:
        offsets = points - self.__center
        return self.__v_star + 0.5 * np.sum(self.__curvature * offsets**2,
                                            axis=1)

    def _gradient(self, points: Array) -> Array:
        return self.__curvature * (points - self.__center)

    def _hessian(self, points: Array) -> Array:
        return np.broadcast_to(np.diag(self.__curvature),
                               (points.shape[0], self.dim, self.dim)).copy()


class DoubleWellProfile:
    """One-dimensional double-well profile f ≥ 0 vanishing exactly at
    ±s with f''(−s) = h_left and f''(s) = h_right.

    The core is f(x) = (x² − s²)² w(x), where the weight w blends
    h_left/(8s²) into h_right/(8s²) with a tanh step normalized to be
    exact at ±s. Beyond the splice radius s + 2 the core is continued
    by its second-order Taylor polynomial, so f is C² with bounded
    second derivative.

    """
    def __init__(self, well_sep: float, hess_left: float,
                 hess_right: float):
        if well_sep <= 0:
            raise ValueError('well separation must be positive')
        if hess_left <= 0 or hess_right <= 0:
            raise ValueError('well hessians must be positive')
        self.well_sep = float(well_sep)
        self.hess_left = float(hess_left)
        self.hess_right = float(hess_right)
        self.__scale = self.well_sep / 2
        self.__weight_left = hess_left / (8 * self.well_sep**2)
        self.__weight_right = hess_right / (8 * self.well_sep**2)
        self.__step_left = self.__step(-self.well_sep)
        self.__step_span = self.__step(self.well_sep) - self.__step_left
        weight_span = self.__weight_right - self.__weight_left
        weight_bounds = (self.__weight_left + weight_span * np.array(
            [-self.__step_left, 1 - self.__step_left]) / self.__step_span)
        if np.min(weight_bounds) <= 0:
            raise ValueError('well hessian ratio too large')
        self.splice_radius = self.well_sep + _SPLICE_OFFSET
        self.r0 = self.well_sep + _R0_OFFSET
        self.__splice = {
            sign: self.__core(np.array([sign * self.splice_radius]))
            for sign in (-1.0, 1.0)
        }
        self.alpha0 = self.__compute_alpha0()

    def value(self, x: Array) -> Array:
        return self.__spliced(x)[0]

    def first_derivative(self, x: Array) -> Array:
        return self.__spliced(x)[1]

    def second_derivative(self, x: Array) -> Array:
        return self.__spliced(x)[2]

    def __step(self, x: typing.Union[float, Array]) -> typing.Any:
        return 0.5 * (1 + np.tanh(x / self.__scale))

    def __core(self, x: Array) -> typing.Tuple[Array, Array, Array]:
        weight_span = (self.__weight_right -
                       self.__weight_left) / self.__step_span
        tanh = np.tanh(x / self.__scale)
        sech2 = 1 - tanh**2
        weight = self.__weight_left + weight_span * (self.__step(x) -
                                                     self.__step_left)
        weight1 = weight_span * sech2 / (2 * self.__scale)
        weight2 = -weight_span * sech2 * tanh / self.__scale**2
        p = x**2 - self.well_sep**2
        f0 = p**2 * weight
        f1 = 4 * x * p * weight + p**2 * weight1
        f2 = (8 * x**2 * weight + 4 * p * weight + 8 * x * p * weight1 +
              p**2 * weight2)
        return f0, f1, f2

    def __spliced(self, x: Array) -> typing.Tuple[Array, Array, Array]:
        x = np.asarray(x, dtype=np.float64)
        f0, f1, f2 = self.__core(x)
        for sign in (-1.0, 1.0):
            tail = sign * x > self.splice_radius
            if not np.any(tail):
                continue
            s0, s1, s2 = (value[0] for value in self.__splice[sign])
            offset = x[tail] - sign * self.splice_radius
            f0[tail] = s0 + s1 * offset + 0.5 * s2 * offset**2
            f1[tail] = s1 + s2 * offset
            f2[tail] = s2
        return f0, f1, f2

    def __compute_alpha0(self) -> float:
        outer = np.linspace(self.r0, self.splice_radius + 1,
                            _ALPHA0_GRID_POINTS)
        curvature = min(np.min(self.second_derivative(outer)),
                        np.min(self.second_derivative(-outer)))
        right = self.first_derivative(outer)[:, np.newaxis]
        left = self.first_derivative(-outer)[np.newaxis, :]
        secants = (right - left) / (outer[:, np.newaxis] +
                                    outer[np.newaxis, :])
        return float(min(curvature, np.min(secants)))


class RadialCutoff:
    """C² cutoff χ(|x|) equal to 1 on B(0, inner) and 0 outside
    B(0, outer), with a quintic smoothstep in between.

    """
    def __init__(self, inner: float, outer: float):
        if not 0 < inner < outer:
            raise ValueError('cutoff radii must satisfy 0 < inner < outer')
        self.inner = float(inner)
        self.outer = float(outer)

    def __call__(self, radii: Array) -> typing.Tuple[Array, Array, Array]:
        """Evaluate χ and its first two derivatives at the radii.

        """
        width = self.outer - self.inner
        t = np.clip((radii - self.inner) / width, 0.0, 1.0)
        value = 1 - t**3 * (10 - 15 * t + 6 * t**2)
        first = -30 * t**2 * (1 - t)**2 / width
        second = -60 * t * (1 - t) * (1 - 2 * t) / width**2
        return value, first, second


def _confine(points: Array, excess: Array, excess_gradient: Array,
             excess_hessian: Array, cutoff: RadialCutoff) \
        -> typing.Tuple[Array, Array, Array]:
    # V = 1 + ½|x|² + χ(|x|)·k(x), k the excess of the core over ½|x|²
    dim = points.shape[1]
    radii = np.linalg.norm(points, axis=1)
    chi, chi1, chi2 = cutoff(radii)
    safe_radii = np.maximum(radii, cutoff.inner)
    directions = points / safe_radii[:, np.newaxis]
    values = 1.0 + 0.5 * np.sum(points**2, axis=1) + chi * excess
    gradients = (points + chi[:, np.newaxis] * excess_gradient +
                 (excess * chi1)[:, np.newaxis] * directions)
    identity = np.eye(dim)
    projections = np.einsum('ni,nj->nij', directions, directions)
    cross = np.einsum('ni,nj->nij', excess_gradient, directions)
    hessians = (identity + chi[:, np.newaxis, np.newaxis] * excess_hessian +
                chi1[:, np.newaxis, np.newaxis] *
                (cross + cross.transpose(0, 2, 1)) +
                excess[:, np.newaxis, np.newaxis] *
                (chi2[:, np.newaxis, np.newaxis] * projections +
                 (chi1 / safe_radii)[:, np.newaxis, np.newaxis] *
                 (identity - projections)))
    return values, gradients, hessians


class DoubleWellPotentialError(ProblemError):
    """Exception class for all double-well potential errors.

    """
    pass


class DoubleWellPotential(Potential):
    """Double-well potential with global minimizers ±s·e_1, where f is
    a :class:`DoubleWellProfile`.

    In d = 1, V(x) = 1 + f(x), whose quadratic tails make it
    dissipative outside [−r0, r0]. In d ≥ 2 the core
    1 + f(x_1) + ½ Σ_{i≥2} x_i² is kept on B(0, s + 1) and blended by a
    radial cutoff into 1 + ½|x|², which holds exactly outside
    B(0, r0) with r0 = s + 3. There ∇V(x) = x, so every pair outside
    B(0, r0) satisfies the dissipativity condition with constant 1, of
    which the metadata declares one half.

    """
    def __init__(self, dim: int = 1, well_sep: float = 1.0,
                 hess_left: float = 8.0, hess_right: float = 8.0):
        """Construct a double-well potential.

        Parameters
        ----------
        dim : int
            The dimension d.
        well_sep : float
            The distance s of the wells from the origin.
        hess_left : float
            The second derivative of V along e_1 at −s·e_1.
        hess_right : float
            The second derivative of V along e_1 at +s·e_1.

        Raises
        ------
        DoubleWellPotentialError
            If an argument is invalid.

        """
        super().__init__(dim)
        try:
            self.__profile = DoubleWellProfile(well_sep, hess_left,
                                               hess_right)
        except ValueError as error:
            raise self._create_error(str(error), well_sep=well_sep,
                                     hess_left=hess_left,
                                     hess_right=hess_right)
        self.__cutoff = (None if dim == 1 else RadialCutoff(
            self.__profile.r0, self.__profile.r0 + _CUTOFF_WIDTH))

    @classmethod
    def get_name(cls) -> str:
        # Docstring inherited
        return 'double_well'

    @classmethod
    def get_error_class(cls) -> type[ProblemError]:
        # Docstring inherited
        return DoubleWellPotentialError

    @property
    def v_star(self) -> float:
        # Docstring inherited
        return 1.0

    @property
    def minimizers(self) -> typing.List[Minimizer]:
        # Docstring inherited
        minimizers = []
        for sign, hessian in ((-1.0, self.__profile.hess_left),
                              (1.0, self.__profile.hess_right)):
            location = np.zeros(self.dim)
            location[0] = sign * self.__profile.well_sep
            minimizers.append(Minimizer(location, hessian))
        return minimizers

    @property
    def metadata(self) -> PotentialMetadata:
        # Docstring inherited
        if self.__cutoff is None:
            return PotentialMetadata(
                r0=self.__profile.r0, alpha0=self.__profile.alpha0,
                splice_radius=self.__profile.splice_radius)
        return PotentialMetadata(r0=self.__cutoff.outer,
                                 alpha0=_FAR_FIELD_ALPHA0,
                                 splice_radius=self.__cutoff.outer)

    def _evaluate(self, points: Array) -> Array:
        if self.__cutoff is None:
            return 1.0 + self.__profile.value(points[:, 0])
        return self.__confined(points, self.__cutoff)[0]

    def _gradient(self, points: Array) -> Array:
        if self.__cutoff is None:
            return self.__profile.first_derivative(points)
        return self.__confined(points, self.__cutoff)[1]

    def _hessian(self, points: Array) -> Array:
        if self.__cutoff is None:
            return self.__profile.second_derivative(points)[:, :,
                                                            np.newaxis]
        return self.__confined(points, self.__cutoff)[2]

    def __confined(self, points: Array, cutoff: RadialCutoff) \
            -> typing.Tuple[Array, Array, Array]:
        first = points[:, 0]
        excess = self.__profile.value(first) - 0.5 * first**2
        excess_gradient = np.zeros_like(points)
        excess_gradient[:, 0] = self.__profile.first_derivative(first) - first
        excess_hessian = np.zeros((points.shape[0], self.dim, self.dim))
        excess_hessian[:, 0, 0] = self.__profile.second_derivative(first) - 1
        return _confine(points, excess, excess_gradient, excess_hessian,
                        cutoff)


class ProductDoubleWellPotentialError(ProblemError):
    """Exception class for all product double-well potential errors.

    """
    pass


class ProductDoubleWellPotential(Potential):
    """Product double-well potential with the 2^d global minimizers
    (±s, ..., ±s). The core 1 + Σ_i f(x_i) is kept on B(0, s√d + 1)
    and blended by a radial cutoff into 1 + ½|x|² outside
    B(0, s√d + 3) when d ≥ 2.

    """
    def __init__(self, dim: int = 2, well_sep: float = 1.0,
                 hess_left: float = 8.0, hess_right: float = 8.0):
        """Construct a product double-well potential.

        Parameters
        ----------
        dim : int
            The dimension d.
        well_sep : float
            The distance s of the wells from the origin per coordinate.
        hess_left : float
            The second derivative of every 1D profile at −s.
        hess_right : float
            The second derivative of every 1D profile at +s.

        Raises
        ------
        ProductDoubleWellPotentialError
            If an argument is invalid.

        """
        super().__init__(dim)
        try:
            self.__profile = DoubleWellProfile(well_sep, hess_left,
                                               hess_right)
        except ValueError as error:
            raise self._create_error(str(error), well_sep=well_sep,
                                     hess_left=hess_left,
                                     hess_right=hess_right)
        inner = self.__profile.well_sep * np.sqrt(dim) + _R0_OFFSET
        self.__cutoff = (None if dim == 1 else RadialCutoff(
            inner, inner + _CUTOFF_WIDTH))

    @classmethod
    def get_name(cls) -> str:
        # Docstring inherited
        return 'product_double_well'

    @classmethod
    def get_error_class(cls) -> type[ProblemError]:
        # Docstring inherited
        return ProductDoubleWellPotentialError

    @property
    def v_star(self) -> float:
        # Docstring inherited
        return 1.0

    @property
    def minimizers(self) -> typing.List[Minimizer]:
        # Docstring inherited
        hessians = {
            -1.0: self.__profile.hess_left,
            1.0: self.__profile.hess_right
        }
        return [
            Minimizer(
                np.array(signs) * self.__profile.well_sep,
                float(np.prod([hessians[sign] for sign in signs])))
            for signs in itertools.product((-1.0, 1.0), repeat=self.dim)
        ]

    @property
    def metadata(self) -> PotentialMetadata:
        # Docstring inherited
        if self.__cutoff is None:
            return PotentialMetadata(
                r0=self.__profile.r0, alpha0=self.__profile.alpha0,
                splice_radius=self.__profile.splice_radius)
        return PotentialMetadata(r0=self.__cutoff.outer,
                                 alpha0=_FAR_FIELD_ALPHA0,
                                 splice_radius=self.__cutoff.outer)

    def _evaluate(self, points: Array) -> Array:
        if self.__cutoff is None:
            return 1.0 + np.sum(self.__profile.value(points), axis=1)
        return self.__confined(points, self.__cutoff)[0]

    def _gradient(self, points: Array) -> Array:
        if self.__cutoff is None:
            return self.__profile.first_derivative(points)
        return self.__confined(points, self.__cutoff)[1]

    def _hessian(self, points: Array) -> Array:
        if self.__cutoff is None:
            return self.__profile.second_derivative(points)[:, :,
                                                            np.newaxis]
        return self.__confined(points, self.__cutoff)[2]

    def __confined(self, points: Array, cutoff: RadialCutoff) \
            -> typing.Tuple[Array, Array, Array]:
        excess = np.sum(self.__profile.value(points) - 0.5 * points**2,
                        axis=1)
        excess_gradient = self.__profile.first_derivative(points) - points
        excess_hessian = np.zeros((points.shape[0], self.dim, self.dim))
        diagonal = np.arange(self.dim)
        excess_hessian[:, diagonal, diagonal] = \
            self.__profile.second_derivative(points) - 1
        return _confine(points, excess, excess_gradient, excess_hessian,
                        cutoff)


def builtin_double_well(d: int, well_sep: float, hess_left: float,
                        hess_right: float) -> DoubleWellPotential:
    """Build the double-well test potential.

    Parameters
    ----------
    d : int
        The dimension.
    well_sep : float
        The distance of the wells from the origin.
    hess_left : float
        The curvature along e_1 at the left well.
    hess_right : float
        The curvature along e_1 at the right well.

    Returns
    -------
    DoubleWellPotential
        A C² potential with minimizers ±well_sep·e_1, V* = 1, and
        quadratic tails beyond its metadata splice radius (well_sep + 2
        in d = 1, well_sep + 3 in d ≥ 2).

    Raises
    ------
    DoubleWellPotentialError
        If an argument is invalid.

    """
    return DoubleWellPotential(dim=d, well_sep=well_sep, hess_left=hess_left,
                               hess_right=hess_right)

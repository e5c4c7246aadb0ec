"""Module for the annealing schedule a(t), the decreasing step sequence
with its cumulative clock Γ_n, and the plateau time grid.

"""
import abc
import logging
import math
import threading
import typing

import numpy as np
import numpy.typing as npt

from langevin.annealing.constants import MAX_STEP_COUNT
from langevin.annealing.exceptions import AnnealingLibraryError

_logger = logging.getLogger(__name__)

_INITIAL_CACHE_SIZE = 1024


class ScheduleError(AnnealingLibraryError):
    """Exception class for all schedule errors.

    """
    pass


class NoiseSchedule(abc.ABC):
    """Base class for noise level schedules t ↦ a(t).

    """
    @property
    @abc.abstractmethod
    def initial_level(self) -> float:  # pragma: no cover
        """The noise level a(0)."""
        pass

    def a_of_t(self, t: npt.ArrayLike) -> typing.Any:
        """Evaluate the noise level.

        Parameters
        ----------
        t : array_like
            One or more times t ≥ 0.

        Returns
        -------
        float or numpy.ndarray
            The noise level a(t) for every time.

        Raises
        ------
        ScheduleError
            If a time is negative.

        """
        times = np.asarray(t, dtype=np.float64)
        if np.any(times < 0):
            raise ScheduleError('time must be non-negative', t=t)
        levels = self._a_of_t(times)
        return float(levels) if levels.ndim == 0 else levels

    @abc.abstractmethod
    def _a_of_t(self, times: np.ndarray) -> np.ndarray:  # pragma: no cover
        pass


class AnnealSchedule(NoiseSchedule):
    """Logarithmic annealing schedule a(t) = A/√log(t + e).

    """
    def __init__(self, A: float):
        """Construct an annealing schedule.

        Parameters
        ----------
        A : float
            The positive initial level a(0) = A.

        Raises
        ------
        ScheduleError
            If A is not positive.

        """
        if A <= 0:
            raise ScheduleError('A must be positive', A=A)
        self.A = float(A)

    @property
    def initial_level(self) -> float:
        # Docstring inherited
        return self.A

    def _a_of_t(self, times: np.ndarray) -> np.ndarray:
        return self.A / np.sqrt(np.log(times + math.e))


class FrozenSchedule(NoiseSchedule):
    """Constant schedule a(t) ≡ a₀ (a₀ = 0 gives noise-free dynamics).

    """
    def __init__(self, value: float):
        if value < 0:
            raise ScheduleError('frozen level must be non-negative',
                                value=value)
        self.value = float(value)

    @property
    def initial_level(self) -> float:
        # Docstring inherited
        return self.value

    def _a_of_t(self, times: np.ndarray) -> np.ndarray:
        return np.full_like(times, self.value)


class StepSequence(abc.ABC):
    """Base class for non-increasing step sequences (γ_n)_{n≥1} with
    cached cumulative sums Γ_n = γ_1 + ... + γ_n.

    """
    def __init__(self) -> None:
        self.__cumulative = np.zeros(1)
        self.__lock = threading.Lock()

    @abc.abstractmethod
    def gamma(self, n: npt.ArrayLike) -> typing.Any:  # pragma: no cover
        """Evaluate the steps.

        Parameters
        ----------
        n : array_like
            One or more indices n ≥ 1.

        Returns
        -------
        float or numpy.ndarray
            The steps γ_n.

        """
        pass

    def cumulative(self, n: int) -> float:
        """Compute the cumulative time Γ_n.

        Parameters
        ----------
        n : int
            The number of steps n ≥ 0.

        Returns
        -------
        float
            Γ_n (Γ_0 = 0).

        Raises
        ------
        ScheduleError
            If n is negative or exceeds the cache limit.

        """
        if n < 0:
            raise ScheduleError('step count must be non-negative', n=n)
        return float(self.cumulative_sums(n)[n])

    def cumulative_sums(self, n: int) -> np.ndarray:
        """Get the cached cumulative times.

        Parameters
        ----------
        n : int
            The largest required step count.

        Returns
        -------
        numpy.ndarray
            A read-only array holding at least Γ_0, ..., Γ_n.

        Raises
        ------
        ScheduleError
            If n exceeds the cache limit.

        """
        cumulative = self.__cumulative
        if n < cumulative.shape[0]:
            return cumulative
        if n > MAX_STEP_COUNT:
            raise ScheduleError('step count exceeds the cache limit', n=n,
                                limit=MAX_STEP_COUNT)
        with self.__lock:
            cumulative = self.__cumulative
            size = max(cumulative.shape[0], _INITIAL_CACHE_SIZE)
            while size <= n:
                size *= 2
            size = min(size, MAX_STEP_COUNT + 1)
            if size > cumulative.shape[0]:
                indices = np.arange(cumulative.shape[0], size)
                extension = cumulative[-1] + np.cumsum(self.gamma(indices))
                cumulative = np.concatenate((cumulative, extension))
                cumulative.flags.writeable = False
                self.__cumulative = cumulative
                _logger.debug('cumulative step cache grown to %d entries',
                              size)
        return cumulative

    def n_of_t(self, t: float) -> int:
        """Compute N(t) = max{k ≥ 0 : Γ_k ≤ t}.

        Parameters
        ----------
        t : float
            The time t ≥ 0.

        Returns
        -------
        int
            The number of complete steps up to time t.

        Raises
        ------
        ScheduleError
            If t is negative or N(t) exceeds the cache limit.

        """
        if t < 0:
            raise ScheduleError('time must be non-negative', t=t)
        cumulative = self.cumulative_sums(0)
        while cumulative[-1] <= t:
            cumulative = self.cumulative_sums(cumulative.shape[0])
        return int(np.searchsorted(cumulative, t, side='right')) - 1

    def varpi_estimate(self, n_max: int) -> float:
        """Estimate ϖ = limsup (γ_n − γ_{n+1})/γ_{n+1}² by the maximum
        of the ratio over n ∈ [n_max/2, n_max].

        Parameters
        ----------
        n_max : int
            The end of the window (at least 10).

        Returns
        -------
        float
            The window maximum of the ratio.

        Raises
        ------
        ScheduleError
            If n_max is smaller than 10.

        """
        if n_max < 10:
            raise ScheduleError('window end must be at least 10',
                                n_max=n_max)
        n = np.arange(n_max // 2, n_max + 1, dtype=np.float64)
        gamma = self.gamma(n)
        gamma_next = self.gamma(n + 1)
        return float(np.max((gamma - gamma_next) / gamma_next**2))


class PowerLawStepSequence(StepSequence):
    """Step sequence γ_n = γ_1·n^(−η) with η ∈ (1/2, 1].

    """
    def __init__(self, gamma1: float, eta: float):
        """Construct a power-law step sequence.

        Parameters
        ----------
        gamma1 : float
            The positive first step γ_1.
        eta : float
            The decay exponent η ∈ (1/2, 1].

        Raises
        ------
        ScheduleError
            If an argument is out of range.

        """
        if gamma1 <= 0:
            raise ScheduleError('gamma1 must be positive', gamma1=gamma1)
        if not 0.5 < eta <= 1:
            raise ScheduleError('eta must lie in (1/2, 1]', eta=eta)
        super().__init__()
        self.gamma1 = float(gamma1)
        self.eta = float(eta)

    def gamma(self, n: npt.ArrayLike) -> typing.Any:
        # Docstring inherited
        indices = np.asarray(n, dtype=np.float64)
        steps = self.gamma1 * indices**(-self.eta)
        return float(steps) if steps.ndim == 0 else steps


class PlateauSchedule:
    """Plateau time grid T_n = c_T·n^(1+β). The plateau process uses the
    noise level a_{k+1} = a(T_{k+1}) on [T_k, T_{k+1}).

    """
    def __init__(self, c_T: float, beta: float):
        """Construct a plateau schedule.

        Parameters
        ----------
        c_T : float
            The positive time scale c_T.
        beta : float
            The positive growth exponent β.

        Raises
        ------
        ScheduleError
            If an argument is not positive.

        """
        if c_T <= 0:
            raise ScheduleError('c_T must be positive', c_T=c_T)
        if beta <= 0:
            raise ScheduleError('beta must be positive', beta=beta)
        self.c_T = float(c_T)
        self.beta = float(beta)

    def time(self, n: int) -> float:
        """Compute the plateau boundary T_n.

        Parameters
        ----------
        n : int
            The plateau index n ≥ 0.

        Returns
        -------
        float
            T_n = c_T·n^(1+β).

        Raises
        ------
        ScheduleError
            If n is negative.

        """
        if n < 0:
            raise ScheduleError('plateau index must be non-negative', n=n)
        return self.c_T * float(n)**(1 + self.beta)

    def plateau_times(self, schedule: NoiseSchedule,
                      n: int) -> typing.Tuple[float, float]:
        """Compute the plateau boundary and its noise level.

        Parameters
        ----------
        schedule : NoiseSchedule
            The underlying schedule a(t).
        n : int
            The plateau index n ≥ 0.

        Returns
        -------
        tuple of float
            T_n and a_n = a(T_n).

        Raises
        ------
        ScheduleError
            If n is negative.

        """
        t_n = self.time(n)
        return t_n, schedule.a_of_t(t_n)

    def plateau_index(self, t: float) -> int:
        """Compute the index k of the plateau [T_k, T_{k+1}) holding t.

        Parameters
        ----------
        t : float
            The time t ≥ 0.

        Returns
        -------
        int
            The largest k with T_k ≤ t.

        Raises
        ------
        ScheduleError
            If t is negative.

        """
        if t < 0:
            raise ScheduleError('time must be non-negative', t=t)
        k = int(math.floor((t / self.c_T)**(1 / (1 + self.beta))))
        while self.time(k + 1) <= t:
            k += 1
        while k > 0 and self.time(k) > t:
            k -= 1
        return k

    def level_at(self, schedule: NoiseSchedule, t: float) -> float:
        """Compute the plateau noise level at time t.

        Parameters
        ----------
        schedule : NoiseSchedule
            The underlying schedule a(t).
        t : float
            The time t ≥ 0.

        Returns
        -------
        float
            a_{k+1} for t ∈ [T_k, T_{k+1}).

        """
        return schedule.a_of_t(self.time(self.plateau_index(t) + 1))

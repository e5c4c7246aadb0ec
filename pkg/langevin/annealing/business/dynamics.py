"""Business logic for simulating the annealed Langevin dynamics: the
decreasing-step Euler scheme, the continuous-schedule process, and the
plateau process.

"""
import concurrent.futures
import dataclasses
import logging
import math
import typing

import numpy as np
import scipy.integrate  # type: ignore

from langevin.annealing.business.base import Interactor
from langevin.annealing.business.base import InteractorError
from langevin.annealing.constants import DIVERGENCE_THRESHOLD
from langevin.annealing.constants import MAX_FINE_DT
from langevin.annealing.constants import TRAJECTORY_BLOCK_SIZE
from langevin.annealing.problems.base import Array
from langevin.annealing.problems.base import DiffusionField
from langevin.annealing.problems.base import Potential
from langevin.annealing.problems.drift import drift
from langevin.annealing.schedules import FrozenSchedule
from langevin.annealing.schedules import NoiseSchedule
from langevin.annealing.schedules import PlateauSchedule
from langevin.annealing.schedules import StepSequence

_logger = logging.getLogger(__name__)

_STREAM_INCREMENTS = 0
_STREAM_BRIDGE = 1
_STREAM_GRADIENT_NOISE = 2

_NOISE_KINDS = ('none', 'gaussian_scaled')


class SimulationInteractorError(InteractorError):
    """Exception class for all simulation interactor errors.

    """
    pass


class DivergenceError(SimulationInteractorError):
    """Exception class for diverged trajectories.

    """
    pass


@dataclasses.dataclass
class NoiseModel:
    """Stochastic gradient noise ζ(x) = c_ζ·V(x)^(1/2)·g with a standard
    Gaussian vector g, so that ζ has zero mean and E|ζ|^p ≤ C_p·V^(p/2).

    Attributes
    ----------
    kind : str
        Either 'none' (exact gradients) or 'gaussian_scaled'.
    c_zeta : float
        The non-negative noise scale c_ζ.

    """
    kind: str = 'none'
    c_zeta: float = 0.0

    def __post_init__(self):
        if self.kind not in _NOISE_KINDS:
            raise SimulationInteractorError('unknown gradient noise kind',
                                            kind=self.kind)
        if self.c_zeta < 0:
            raise SimulationInteractorError(
                'gradient noise scale must be non-negative',
                c_zeta=self.c_zeta)

    @property
    def active(self) -> bool:
        """True if the noise is not identically zero."""
        return self.kind != 'none' and self.c_zeta > 0

    def sample(self, values: Array, rng: np.random.Generator,
               dim: int) -> Array:
        """Sample the gradient noise.

        Parameters
        ----------
        values : numpy.ndarray
            The potential values V(x) of shape (n,).
        rng : numpy.random.Generator
            The gradient noise stream.
        dim : int
            The dimension d.

        Returns
        -------
        numpy.ndarray
            The noise of shape (n, d).

        """
        gaussians = rng.standard_normal((values.shape[0], dim))
        return self.c_zeta * np.sqrt(values)[:, np.newaxis] * gaussians


@dataclasses.dataclass
class SimSpec:
    """Specification of an ensemble simulation.

    Attributes
    ----------
    pot : Potential
        The potential V.
    sigma : DiffusionField
        The diffusion field σ.
    schedule : NoiseSchedule
        The noise level schedule a(t).
    x0 : numpy.ndarray
        The initial state of shape (d,).
    horizon : float
        The final time (at least the last record time).
    seed : int
        The master seed.
    record_times : sequence of float
        The non-empty, sorted record times.
    steps : StepSequence or None
        The step sequence of the Euler scheme.
    fine_dt : float or None
        The micro-step of continuous and plateau runs.
    plateau : PlateauSchedule or None
        The plateau grid of plateau runs.
    noise : NoiseModel
        The stochastic gradient noise of the Euler scheme.
    frozen_a : float or None
        If not None, the schedule is replaced by a(t) ≡ frozen_a.
    drift_enabled : bool
        If False, the drift is forced to zero.
    workers : int
        The number of worker threads.

    """
    pot: Potential
    sigma: DiffusionField
    schedule: NoiseSchedule
    x0: Array
    horizon: float
    seed: int
    record_times: typing.Sequence[float]
    steps: typing.Optional[StepSequence] = None
    fine_dt: typing.Optional[float] = None
    plateau: typing.Optional[PlateauSchedule] = None
    noise: NoiseModel = dataclasses.field(default_factory=NoiseModel)
    frozen_a: typing.Optional[float] = None
    drift_enabled: bool = True
    workers: int = 1


@dataclasses.dataclass
class EnsembleResult:
    """Result of an ensemble simulation.

    Attributes
    ----------
    record_times : numpy.ndarray
        The (snapped) record times of shape (r,).
    samples : list of numpy.ndarray
        The sample matrix of shape (n_traj, d) at every record time.
    means : numpy.ndarray
        The ensemble means of shape (r, d).
    covariances : numpy.ndarray
        The ensemble covariances of shape (r, d, d).
    mean_V : numpy.ndarray
        The ensemble means of V at every record time.
    min_V : numpy.ndarray
        The smallest value of V seen along any trajectory up to every
        record time.

    """
    record_times: Array
    samples: typing.List[Array]
    means: Array
    covariances: Array
    mean_V: Array
    min_V: Array

    @property
    def n_traj(self) -> int:
        """The number of trajectories."""
        return self.samples[0].shape[0]

    @property
    def dim(self) -> int:
        """The dimension of the state space."""
        return self.samples[0].shape[1]


class _Clock(typing.Protocol):
    def step(self, n: int) -> typing.Tuple[float, float, float, float]:
        """Get the times t_n and t_{n+1}, the step length, and the noise
        level used on [t_n, t_{n+1})."""
        ...  # pragma: no cover


class _EulerClock:
    def __init__(self, steps: StepSequence, schedule: NoiseSchedule):
        self.__steps = steps
        self.__schedule = schedule

    def step(self, n: int) -> typing.Tuple[float, float, float, float]:
        cumulative = self.__steps.cumulative_sums(n + 1)
        time = float(cumulative[n])
        next_time = float(cumulative[n + 1])
        return (time, next_time, next_time - time,
                self.__schedule.a_of_t(time))


class _FineClock:
    def __init__(self, fine_dt: float,
                 level: typing.Callable[[float], float]):
        self.__fine_dt = fine_dt
        self.__level = level

    def step(self, n: int) -> typing.Tuple[float, float, float, float]:
        time = n * self.__fine_dt
        return (time, (n + 1) * self.__fine_dt, self.__fine_dt,
                self.__level(time))


@dataclasses.dataclass
class _BlockResult:
    samples: typing.List[Array]
    values: typing.List[Array]
    running_min: typing.List[Array]


class SimulationInteractor(Interactor):
    """Interactor for simulating ensembles of annealed Langevin
    trajectories. Trajectories are split into fixed-size blocks, each
    with its own counter-based random streams, so results are bitwise
    independent of the number of workers.

    """
    def simulate_euler_scheme(self, spec: SimSpec,
                              n_traj: int) -> EnsembleResult:
        """Simulate the Euler-Maruyama scheme with decreasing steps

        Ȳ_{Γ_{n+1}} = Ȳ_{Γ_n} + γ_{n+1}(b_{a(Γ_n)}(Ȳ_{Γ_n}) + ζ_{n+1})
                      + a(Γ_n)σ(Ȳ_{Γ_n})(W_{Γ_{n+1}} − W_{Γ_n}).

        Off-grid record times use the genuine continuous interpolation,
        with the Brownian path between grid times drawn as a Brownian
        bridge consistent with the step's full increment.

        Parameters
        ----------
        spec : SimSpec
            The simulation specification (steps required).
        n_traj : int
            The number of trajectories.

        Returns
        -------
        EnsembleResult
            The ensemble at the record times.

        Raises
        ------
        DivergenceError
            If a trajectory diverges.
        SimulationInteractorError
            If the simulation specification is invalid or the simulation fails.

        """
        try:
            self.__validate(spec, n_traj)
            if spec.steps is None:
                raise SimulationInteractorError(
                    'Euler scheme requires a step sequence')
            spec.steps.n_of_t(spec.horizon)
            clock = _EulerClock(spec.steps, self.__level_schedule(spec))
            return self.__simulate(spec, n_traj, clock,
                                   np.asarray(spec.record_times, dtype=float),
                                   spec.noise)
        except SimulationInteractorError:
            raise
        except Exception:
            raise SimulationInteractorError(
                'unable to simulate the Euler scheme', n_traj=n_traj)

    def simulate_continuous(self, spec: SimSpec,
                            n_traj: int) -> EnsembleResult:
        """Simulate the continuous-schedule process
        dY_t = b_{a(t)}(Y_t)dt + a(t)σ(Y_t)dW_t by a fine Euler scheme
        with constant micro-step. Record times are snapped to the
        micro-grid.

        Parameters
        ----------
        spec : SimSpec
            The simulation specification (fine_dt required).
        n_traj : int
            The number of trajectories.

        Returns
        -------
        EnsembleResult
            The ensemble at the snapped record times.

        Raises
        ------
        DivergenceError
            If a trajectory diverges.
        SimulationInteractorError
            If the simulation specification is invalid or the simulation fails.

        """
        try:
            fine_dt = self.__validate_fine_dt(spec, n_traj)
            schedule = self.__level_schedule(spec)
            clock = _FineClock(fine_dt, schedule.a_of_t)
            return self.__simulate(spec, n_traj, clock,
                                   self.__snap(spec, fine_dt), NoiseModel())
        except SimulationInteractorError:
            raise
        except Exception:
            raise SimulationInteractorError(
                'unable to simulate the continuous process', n_traj=n_traj)

    def simulate_plateau(self, spec: SimSpec, n_traj: int) -> EnsembleResult:
        """Simulate the plateau process, whose noise level is frozen at
        a_{k+1} = a(T_{k+1}) on every plateau [T_k, T_{k+1}), by a fine
        Euler scheme with constant micro-step.

        Parameters
        ----------
        spec : SimSpec
            The simulation specification (plateau and fine_dt
            required).
        n_traj : int
            The number of trajectories.

        Returns
        -------
        EnsembleResult
            The ensemble at the snapped record times.

        Raises
        ------
        DivergenceError
            If a trajectory diverges.
        SimulationInteractorError
            If the simulation specification is invalid or the simulation fails.

        """
        try:
            fine_dt = self.__validate_fine_dt(spec, n_traj)
            plateau = spec.plateau
            if plateau is None:
                raise SimulationInteractorError(
                    'plateau process requires a plateau schedule')
            if spec.frozen_a is not None:
                level = FrozenSchedule(spec.frozen_a).a_of_t
            else:
                schedule = spec.schedule

                def level(time: float) -> float:
                    return plateau.level_at(schedule, time)

            clock = _FineClock(fine_dt, level)
            return self.__simulate(spec, n_traj, clock,
                                   self.__snap(spec, fine_dt), NoiseModel())
        except SimulationInteractorError:
            raise
        except Exception:
            raise SimulationInteractorError(
                'unable to simulate the plateau process', n_traj=n_traj)

    def time_change_inverse(self, u: typing.Union[NoiseSchedule, float],
                            t: float) -> float:
        """Compute the inverse time change F^(−1)(t) = ∫₀ᵗ u²(s)ds of
        a driftless process dZ = u(t)σ(Z)dW, which has the law of the
        unit-level process at time F^(−1)(t).

        Parameters
        ----------
        u : NoiseSchedule or float
            The level function (a constant if a float).
        t : float
            The time t ≥ 0.

        Returns
        -------
        float
            F^(−1)(t).

        Raises
        ------
        SimulationInteractorError
            If t is negative, u is not positive on [0, t], or the
            quadrature fails.

        """
        try:
            schedule = (FrozenSchedule(u) if isinstance(u,
                                                        (int, float)) else u)
            if t < 0:
                raise SimulationInteractorError('time must be non-negative',
                                                t=t)
            if t == 0:
                return 0.0
            levels = schedule.a_of_t(np.linspace(0.0, t, 101))
            if np.min(levels) <= 0:
                raise SimulationInteractorError(
                    'level function must be positive', t=t)
            value, _ = scipy.integrate.quad(
                lambda s: schedule.a_of_t(s)**2, 0.0, t, epsabs=1e-14,
                epsrel=1e-13, limit=200)
            return float(value)
        except SimulationInteractorError:
            raise
        except Exception:
            raise SimulationInteractorError(
                'unable to compute the inverse time change', t=t)

    def __validate(self, spec: SimSpec, n_traj: int) -> None:
        if n_traj < 1:
            raise SimulationInteractorError(
                'number of trajectories must be positive', n_traj=n_traj)
        if spec.pot.dim != spec.sigma.dim:
            raise SimulationInteractorError(
                'potential and diffusion dimensions differ',
                potential_dim=spec.pot.dim, diffusion_dim=spec.sigma.dim)
        if np.asarray(spec.x0).shape != (spec.pot.dim, ):
            raise SimulationInteractorError(
                'initial state does not match the dimension', x0=spec.x0)
        record_times = np.asarray(spec.record_times, dtype=float)
        if record_times.ndim != 1 or record_times.shape[0] == 0:
            raise SimulationInteractorError('record times are empty')
        if np.any(np.diff(record_times) < 0) or record_times[0] < 0:
            raise SimulationInteractorError(
                'record times must be sorted and non-negative',
                record_times=list(record_times))
        if spec.horizon < record_times[-1]:
            raise SimulationInteractorError(
                'horizon must not precede the last record time',
                horizon=spec.horizon, last_record_time=record_times[-1])
        if spec.workers < 1:
            raise SimulationInteractorError(
                'number of workers must be positive', workers=spec.workers)

    def __validate_fine_dt(self, spec: SimSpec, n_traj: int) -> float:
        self.__validate(spec, n_traj)
        if spec.fine_dt is None or not 0 < spec.fine_dt <= MAX_FINE_DT:
            raise SimulationInteractorError(
                'fine step must lie in (0, {}]'.format(MAX_FINE_DT),
                fine_dt=spec.fine_dt)
        return spec.fine_dt

    def __level_schedule(self, spec: SimSpec) -> NoiseSchedule:
        if spec.frozen_a is not None:
            return FrozenSchedule(spec.frozen_a)
        return spec.schedule

    def __snap(self, spec: SimSpec, fine_dt: float) -> Array:
        indices = np.rint(np.asarray(spec.record_times, dtype=float) /
                          fine_dt).astype(np.int64)
        return indices * fine_dt

    def __simulate(self, spec: SimSpec, n_traj: int, clock: _Clock,
                   record_times: Array, noise: NoiseModel) -> EnsembleResult:
        block_sizes = [
            min(TRAJECTORY_BLOCK_SIZE, n_traj - start)
            for start in range(0, n_traj, TRAJECTORY_BLOCK_SIZE)
        ]
        _logger.info('simulating %d trajectories in %d blocks on %d workers',
                     n_traj, len(block_sizes), spec.workers)
        block_results: typing.Dict[int, _BlockResult] = {}
        with concurrent.futures.ThreadPoolExecutor(
                max_workers=spec.workers) as executor:
            future_to_block_index = {
                executor.submit(
                    self.__simulate_block,  # yapf bug
                    spec,
                    clock,
                    record_times,
                    noise,
                    block_index,
                    block_size): block_index
                for block_index, block_size in enumerate(block_sizes)
            }
            for future in concurrent.futures.as_completed(
                    future_to_block_index):
                block_results[future_to_block_index[future]] = \
                    future.result()
        ordered = [block_results[index] for index in range(len(block_sizes))]
        samples = [
            np.concatenate([block.samples[k] for block in ordered])
            for k in range(record_times.shape[0])
        ]
        values = [
            np.concatenate([block.values[k] for block in ordered])
            for k in range(record_times.shape[0])
        ]
        running_min = np.array([
            min(float(np.min(block.running_min[k])) for block in ordered)
            for k in range(record_times.shape[0])
        ])
        dim = spec.pot.dim
        covariances = np.array([
            np.cov(cloud, rowvar=False).reshape(dim, dim)
            if n_traj > 1 else np.zeros((dim, dim)) for cloud in samples
        ])
        return EnsembleResult(
            record_times=record_times, samples=samples,
            means=np.array([np.mean(cloud, axis=0) for cloud in samples]),
            covariances=covariances,
            mean_V=np.array([np.mean(cloud) for cloud in values]),
            min_V=running_min)

    def __simulate_block(self, spec: SimSpec, clock: _Clock,
                         record_times: Array, noise: NoiseModel,
                         block_index: int, block_size: int) -> _BlockResult:
        increments_rng = _create_stream(spec.seed, block_index,
                                        _STREAM_INCREMENTS)
        bridge_rng = _create_stream(spec.seed, block_index, _STREAM_BRIDGE)
        noise_rng = _create_stream(spec.seed, block_index,
                                   _STREAM_GRADIENT_NOISE)
        dim = spec.pot.dim
        state = np.tile(np.asarray(spec.x0, dtype=np.float64),
                        (block_size, 1))
        values = np.asarray(spec.pot.evaluate(state))
        running_min = values.copy()
        result = _BlockResult([], [], [])
        record_index = 0
        n = 0
        while record_index < record_times.shape[0]:
            time, next_time, step, level = clock.step(n)
            drift_term = (drift(spec.pot, spec.sigma, level, state)
                          if spec.drift_enabled else np.zeros_like(state))
            if noise.active:
                drift_term = drift_term + noise.sample(values, noise_rng,
                                                       dim)
            increments = math.sqrt(step) * increments_rng.standard_normal(
                (block_size, dim))
            sigmas = spec.sigma.evaluate(state)
            while (record_index < record_times.shape[0]
                   and record_times[record_index] < next_time):
                offset = record_times[record_index] - time
                if offset <= 0:
                    recorded = state.copy()
                    recorded_values = values.copy()
                else:
                    bridge = (offset / step * increments + math.sqrt(
                        offset * (step - offset) / step) *
                              bridge_rng.standard_normal((block_size, dim)))
                    recorded = (state + offset * drift_term + level *
                                np.einsum('nij,nj->ni', sigmas, bridge))
                    recorded_values = np.asarray(
                        spec.pot.evaluate(recorded))
                    np.minimum(running_min, recorded_values,
                               out=running_min)
                result.samples.append(recorded)
                result.values.append(recorded_values)
                result.running_min.append(running_min.copy())
                record_index += 1
            if record_index == record_times.shape[0]:
                break
            state = state + step * drift_term + level * np.einsum(
                'nij,nj->ni', sigmas, increments)
            norms = np.linalg.norm(state, axis=1)
            if not np.all(norms <= DIVERGENCE_THRESHOLD):
                trajectory = int(np.argmax(~(norms <= DIVERGENCE_THRESHOLD)))
                raise DivergenceError(
                    'trajectory diverged', block=block_index,
                    trajectory=block_index * TRAJECTORY_BLOCK_SIZE +
                    trajectory, step=n + 1, time=next_time,
                    state=state[trajectory].tolist())
            values = np.asarray(spec.pot.evaluate(state))
            np.minimum(running_min, values, out=running_min)
            n += 1
        return result


def _create_stream(seed: int, block_index: int,
                   stream: int) -> np.random.Generator:
    sequence = np.random.SeedSequence(seed, spawn_key=(block_index, stream))
    return np.random.Generator(np.random.Philox(sequence))

"""Business logic for running annealing experiments and emitting
their artifacts.

"""
import concurrent.futures
import copy
import dataclasses
import logging
import math
import pathlib
import typing

import numpy as np
import pandas as pd  # type: ignore
import yaml
from pantos.common.configuration import ConfigError

from langevin.annealing.business.base import Interactor
from langevin.annealing.business.base import InteractorError
from langevin.annealing.business.dynamics import EnsembleResult
from langevin.annealing.business.dynamics import NoiseModel
from langevin.annealing.business.dynamics import SimSpec
from langevin.annealing.business.dynamics import SimulationInteractor
from langevin.annealing.business.dynamics import SimulationInteractorError
from langevin.annealing.business.gibbs import GibbsInteractor
from langevin.annealing.business.gibbs import GibbsInteractorError
from langevin.annealing.business.gibbs import GibbsMeasure
from langevin.annealing.business.metrics import MetricInteractor
from langevin.annealing.business.metrics import MetricInteractorError
from langevin.annealing.configuration import validate_config
from langevin.annealing.constants import COMPARISON_FILE_NAME
from langevin.annealing.constants import CONFIG_ECHO_FILE_NAME
from langevin.annealing.constants import CSV_FLOAT_FORMAT
from langevin.annealing.constants import DIAGNOSTIC_FILE_NAME
from langevin.annealing.constants import GIBBS_TV_FILE_NAME
from langevin.annealing.constants import MAX_FINE_DT
from langevin.annealing.constants import MAX_STEP_COUNT
from langevin.annealing.constants import MAX_TV_DIMENSION
from langevin.annealing.constants import MIN_FIT_POINTS
from langevin.annealing.constants import PLOT_DATA_FILE_NAME
from langevin.annealing.constants import PREDICTED_EXPONENT_RANGE
from langevin.annealing.constants import QUADRATURE_MAX_DIMENSION
from langevin.annealing.constants import SAMPLES_FILE_NAME_FORMAT
from langevin.annealing.constants import TRACE_COLUMNS
from langevin.annealing.constants import TRACE_FILE_NAME
from langevin.annealing.entities import EmpiricalMeasure
from langevin.annealing.problems import DiffusionField
from langevin.annealing.problems import Potential
from langevin.annealing.problems import ProblemError
from langevin.annealing.problems import get_diffusion
from langevin.annealing.problems import get_potential
from langevin.annealing.problems.base import Array
from langevin.annealing.schedules import AnnealSchedule
from langevin.annealing.schedules import PlateauSchedule
from langevin.annealing.schedules import PowerLawStepSequence

_logger = logging.getLogger(__name__)


class ExperimentInteractorError(InteractorError):
    """Exception class for all experiment interactor errors.

    """
    pass


def geometric_record_times(t0: float, horizon: float) -> typing.List[float]:
    """Compute the geometric record times t_k = t0·2^k capped at the
    horizon.

    Parameters
    ----------
    t0 : float
        The positive first record time.
    horizon : float
        The final time.

    Returns
    -------
    list of float
        The record times not exceeding the horizon (empty if
        t0 > horizon).

    """
    times = []
    k = 0
    while t0 * 2**k <= horizon:
        times.append(t0 * 2**k)
        k += 1
    return times


def reachable_horizon(gamma1: float, eta: float) -> float:
    """Bound the time the Euler steps γ₁·n^(−η) can reach within the
    step cache limit.

    """
    if eta == 1:
        return gamma1 * (1 + math.log(MAX_STEP_COUNT))
    return gamma1 * (1 + (MAX_STEP_COUNT**(1 - eta) - 1) / (1 - eta))


@dataclasses.dataclass(frozen=True)
class ExperimentConfig:
    """Validated configuration of an experiment. Instances are built
    with `from_config`, which also performs the cross-field checks the
    schema cannot express.

    """
    potential_name: str
    potential_params: typing.Dict[str, typing.Any]
    diffusion_name: str
    diffusion_params: typing.Dict[str, typing.Any]
    A: float
    gamma1: float
    eta: float
    c_T: float
    beta: float
    frozen_a: typing.Optional[float]
    noise_kind: str
    c_zeta: float
    scheme: str
    x0: typing.Tuple[float, ...]
    horizon: float
    fine_dt: float
    n_traj: int
    workers: int
    drift_enabled: bool
    record_times: typing.Tuple[float, ...]
    bandwidth: typing.Union[float, str]
    tol: float
    n_bootstrap: int
    n_slices: int
    etas: typing.Tuple[float, ...]
    output_root: str
    seed: int
    effective: typing.Dict[str, typing.Any]

    @classmethod
    def from_config(
            cls, config_dict: typing.Dict[str, typing.Any]) \
            -> 'ExperimentConfig':
        """Validate a raw configuration dictionary and build the
        experiment configuration.

        Parameters
        ----------
        config_dict : dict
            The raw configuration values.

        Returns
        -------
        ExperimentConfig
            The validated experiment configuration.

        Raises
        ------
        pantos.common.configuration.ConfigError
            If the configuration is invalid.

        """
        effective = validate_config(config_dict)
        problem = effective['problem']
        schedule = effective['schedule']
        noise = effective['noise']
        simulation = effective['simulation']
        metrics = effective['metrics']
        record_times_section = simulation['record_times']
        if record_times_section['kind'] == 'geometric':
            if record_times_section['t0'] <= 0:
                raise ConfigError('first record time must be positive',
                                  t0=record_times_section['t0'])
            record_times = geometric_record_times(
                float(record_times_section['t0']),
                float(simulation['horizon']))
        else:
            record_times = sorted(
                float(value) for value in record_times_section['values'])
        experiment_config = cls(
            potential_name=problem['potential']['name'],
            potential_params=dict(problem['potential']['params']),
            diffusion_name=problem['diffusion']['name'],
            diffusion_params=dict(problem['diffusion']['params']),
            A=float(schedule['A']), gamma1=float(schedule['gamma1']),
            eta=float(schedule['eta']), c_T=float(schedule['c_T']),
            beta=float(schedule['beta']),
            frozen_a=(None if schedule['frozen_a'] is None else float(
                schedule['frozen_a'])), noise_kind=noise['kind'],
            c_zeta=float(noise['c_zeta']), scheme=simulation['scheme'],
            x0=tuple(float(value) for value in simulation['x0']),
            horizon=float(simulation['horizon']),
            fine_dt=float(simulation['fine_dt']),
            n_traj=simulation['n_traj'], workers=simulation['workers'],
            drift_enabled=simulation['drift'],
            record_times=tuple(record_times),
            bandwidth=metrics['bandwidth'], tol=float(metrics['tol']),
            n_bootstrap=metrics['n_bootstrap'],
            n_slices=metrics['n_slices'],
            etas=tuple(float(eta) for eta in effective['compare']['etas']),
            output_root=effective['output']['root'], seed=effective['seed'],
            effective=effective)
        experiment_config.__check()
        return experiment_config

    @property
    def run_name(self) -> str:
        """The name of the run directory."""
        if self.scheme == 'euler':
            return 'run-euler-eta{:g}-seed{}'.format(self.eta, self.seed)
        return 'run-{}-seed{}'.format(self.scheme, self.seed)

    def with_scheme(self, scheme: str,
                    eta: typing.Optional[float] = None,
                    output_root: typing.Optional[str] = None) \
            -> 'ExperimentConfig':
        """Derive the configuration of another scheme.

        Parameters
        ----------
        scheme : str
            The simulation scheme.
        eta : float or None
            The step exponent (unchanged if None).
        output_root : str or None
            The output root (unchanged if None).

        Returns
        -------
        ExperimentConfig
            The derived configuration, with a matching effective
            configuration.

        Raises
        ------
        pantos.common.configuration.ConfigError
            If the Euler steps cannot reach the horizon.

        """
        effective = copy.deepcopy(self.effective)
        effective['simulation']['scheme'] = scheme
        if eta is None:
            eta = self.eta
        effective['schedule']['eta'] = eta
        if output_root is None:
            output_root = self.output_root
        effective['output']['root'] = output_root
        if scheme == 'euler':
            _check_reachable(self.gamma1, eta, self.horizon)
        return dataclasses.replace(self, scheme=scheme, eta=eta,
                                   output_root=output_root,
                                   effective=effective)

    def get_potential(self) -> Potential:
        """Get the configured potential.

        Returns
        -------
        Potential
            The (cached) builtin potential.

        """
        return get_potential(self.potential_name, **self.potential_params)

    def get_diffusion(self) -> DiffusionField:
        """Get the configured diffusion field.

        Returns
        -------
        DiffusionField
            The (cached) builtin diffusion field.

        """
        return get_diffusion(self.diffusion_name, **self.diffusion_params)

    def get_sim_spec(self) -> SimSpec:
        """Build the simulation specification of the configured
        scheme.

        Returns
        -------
        SimSpec
            The simulation specification.

        """
        return SimSpec(
            pot=self.get_potential(), sigma=self.get_diffusion(),
            schedule=AnnealSchedule(self.A), x0=np.array(self.x0),
            horizon=self.horizon, seed=self.seed,
            record_times=list(self.record_times),
            steps=(PowerLawStepSequence(self.gamma1, self.eta)
                   if self.scheme == 'euler' else None),
            fine_dt=self.fine_dt,
            plateau=(PlateauSchedule(self.c_T, self.beta)
                     if self.scheme == 'plateau' else None),
            noise=NoiseModel(self.noise_kind, self.c_zeta),
            frozen_a=self.frozen_a, drift_enabled=self.drift_enabled,
            workers=self.workers)

    def level(self, t: float) -> float:
        """Compute the noise level targeted at time t: the frozen
        level, the plateau level of plateau runs, or a(t).

        Parameters
        ----------
        t : float
            The time t ≥ 0.

        Returns
        -------
        float
            The targeted noise level.

        """
        if self.frozen_a is None and self.scheme == 'plateau':
            return float(
                PlateauSchedule(self.c_T, self.beta).level_at(
                    AnnealSchedule(self.A), t))
        return self.schedule_level(t)

    def schedule_level(self, t: float) -> float:
        """Compute the noise level of the schedule at time t regardless
        of the scheme: the frozen level or a(t).

        Parameters
        ----------
        t : float
            The time t ≥ 0.

        Returns
        -------
        float
            The scheme-independent noise level.

        """
        if self.frozen_a is not None:
            return self.frozen_a
        return float(AnnealSchedule(self.A).a_of_t(t))

    def __check(self) -> None:
        if self.A <= 0:
            raise ConfigError('A must be positive', A=self.A)
        for eta in (self.eta, ) + self.etas:
            if not 0.5 < eta <= 1:
                raise ConfigError('eta must lie in (1/2, 1]', eta=eta)
        if self.gamma1 <= 0:
            raise ConfigError('gamma1 must be positive', gamma1=self.gamma1)
        if self.c_T <= 0 or self.beta <= 0:
            raise ConfigError('c_T and beta must be positive', c_T=self.c_T,
                              beta=self.beta)
        if len(self.record_times) == 0:
            raise ConfigError('record times are empty')
        if self.record_times[0] < 0:
            raise ConfigError('record times must be non-negative',
                              record_times=list(self.record_times))
        if self.horizon < self.record_times[-1]:
            raise ConfigError('horizon must not precede the last record time',
                              horizon=self.horizon,
                              last_record_time=self.record_times[-1])
        if not 0 < self.fine_dt <= MAX_FINE_DT:
            raise ConfigError(
                'fine_dt must lie in (0, {}]'.format(MAX_FINE_DT),
                fine_dt=self.fine_dt)
        if self.scheme == 'euler':
            _check_reachable(self.gamma1, self.eta, self.horizon)
        try:
            pot = self.get_potential()
            sigma = self.get_diffusion()
            NoiseModel(self.noise_kind, self.c_zeta)
        except (ProblemError, SimulationInteractorError) as error:
            raise ConfigError('invalid problem selection', cause=str(error))
        if pot.dim != sigma.dim or len(self.x0) != pot.dim:
            raise ConfigError('dimensions of potential, diffusion, and x0 '
                              'differ', potential_dim=pot.dim,
                              diffusion_dim=sigma.dim, x0=list(self.x0))


@dataclasses.dataclass
class RateFit:
    """Power-law fit value ≈ e^intercept·t^(−exponent) on a time
    window.

    Attributes
    ----------
    exponent : float
        The fitted exponent (the negated log-log slope).
    intercept : float
        The log-log intercept.
    r_squared : float
        The coefficient of determination in [0, 1].
    window : tuple of float
        The fit window (t_min, t_max).

    """
    exponent: float
    intercept: float
    r_squared: float
    window: typing.Tuple[float, float]


@dataclasses.dataclass
class PredictedRate:
    """Predicted range of the decay exponent.

    Attributes
    ----------
    lower : float
        The lower end of the open range.
    upper : float
        The upper end of the open range.
    plateau_bound : float or None
        The exponent bound (1+β)^(−1) of plateau runs.

    """
    lower: float
    upper: float
    plateau_bound: typing.Optional[float] = None


@dataclasses.dataclass
class ComparisonReport:
    """Side-by-side distances of several schemes.

    Attributes
    ----------
    directory : pathlib.Path
        The directory holding the comparison and the runs.
    frame : pandas.DataFrame
        The shared t and a_t columns followed by tv and w1 columns per
        scheme.

    """
    directory: pathlib.Path
    frame: pd.DataFrame


@dataclasses.dataclass
class GibbsTvSweep:
    """Distances between successive plateau Gibbs measures.

    Attributes
    ----------
    path : pathlib.Path
        The emitted CSV file.
    frame : pandas.DataFrame
        The columns n, a_n, a_next, tv, and scaled_tv = n·log(n)·tv.

    """
    path: pathlib.Path
    frame: pd.DataFrame


def predicted_rate(scheme: str, beta: float) -> PredictedRate:
    """Get the predicted range of the decay exponent of a scheme.

    Parameters
    ----------
    scheme : str
        The simulation scheme.
    beta : float
        The plateau growth exponent β.

    Returns
    -------
    PredictedRate
        The open range (0, 1), with the bound (1+β)^(−1) for plateau
        runs.

    """
    lower, upper = PREDICTED_EXPONENT_RANGE
    plateau_bound = 1 / (1 + beta) if scheme == 'plateau' else None
    return PredictedRate(lower, upper, plateau_bound)


def load_trace(run_dir: typing.Union[str, pathlib.Path]) -> pd.DataFrame:
    """Load the trace of a run.

    Parameters
    ----------
    run_dir : str or pathlib.Path
        The run directory.

    Returns
    -------
    pandas.DataFrame
        The trace with the documented columns.

    Raises
    ------
    ExperimentInteractorError
        If the trace cannot be loaded.

    """
    try:
        return pd.read_csv(pathlib.Path(run_dir) / TRACE_FILE_NAME,
                           float_precision='round_trip')
    except Exception:
        raise ExperimentInteractorError('unable to load the trace',
                                        run_dir=str(run_dir))


def load_config_echo(
        run_dir: typing.Union[str,
                              pathlib.Path]) -> typing.Dict[str, typing.Any]:
    """Load the effective configuration of a run.

    Parameters
    ----------
    run_dir : str or pathlib.Path
        The run directory.

    Returns
    -------
    dict
        The effective configuration values.

    Raises
    ------
    ExperimentInteractorError
        If the configuration echo cannot be loaded.

    """
    try:
        with (pathlib.Path(run_dir) / CONFIG_ECHO_FILE_NAME).open() as file:
            return yaml.safe_load(file)
    except Exception:
        raise ExperimentInteractorError(
            'unable to load the configuration echo', run_dir=str(run_dir))


class ExperimentInteractor(Interactor):
    """Interactor for experiments: ensemble runs with distance
    tracking, rate fits, scheme comparisons, and Gibbs sweeps.

    """
    def run_experiment(self, cfg: ExperimentConfig) -> pathlib.Path:
        """Run the configured scheme and track its distances to the
        Gibbs measures at every record time. The run directory receives
        the trace, the sample clouds, the configuration echo, and
        gnuplot-compatible plot data. If the run fails, a diagnostic
        file is written before the error is raised.

        Parameters
        ----------
        cfg : ExperimentConfig
            The experiment configuration.

        Returns
        -------
        pathlib.Path
            The run directory.

        Raises
        ------
        SimulationInteractorError
            If the simulation fails (DivergenceError if a trajectory
            diverges).
        MetricInteractorError
            If a distance cannot be estimated.
        GibbsInteractorError
            If a Gibbs reference cannot be computed.
        ExperimentInteractorError
            If the run fails otherwise.

        """
        run_dir = pathlib.Path(cfg.output_root) / cfg.run_name
        try:
            run_dir.mkdir(parents=True, exist_ok=True)
            with (run_dir / CONFIG_ECHO_FILE_NAME).open('w') as file:
                yaml.safe_dump(cfg.effective, file, sort_keys=True)
            _logger.info('starting experiment %s (%d trajectories)',
                         cfg.run_name, cfg.n_traj)
            result = self.__simulate(cfg)
            trace = self.__track(cfg, result.record_times, result.samples,
                                 result.mean_V, result.min_V)
            trace.to_csv(run_dir / TRACE_FILE_NAME, index=False,
                         float_format=CSV_FLOAT_FORMAT)
            for index, (t, samples) in enumerate(
                    zip(result.record_times, result.samples)):
                pd.DataFrame(
                    samples, columns=[
                        'x{}'.format(k + 1) for k in range(samples.shape[1])
                    ]).to_csv(
                        run_dir /
                        SAMPLES_FILE_NAME_FORMAT.format(index=index, t=t),
                        index=False, float_format=CSV_FLOAT_FORMAT)
            _write_plot_data(run_dir / PLOT_DATA_FILE_NAME, trace,
                             cfg.run_name)
            _logger.info('finished experiment %s', cfg.run_name)
            return run_dir
        except (SimulationInteractorError, GibbsInteractorError,
                MetricInteractorError) as error:
            _write_diagnostic(run_dir, error)
            raise
        except ExperimentInteractorError:
            raise
        except Exception:
            raise ExperimentInteractorError('unable to run the experiment',
                                            run_name=cfg.run_name)

    def fit_rate(
            self, trace: pd.DataFrame, column: str,
            window: typing.Optional[typing.Tuple[float, float]] = None) \
            -> RateFit:
        """Fit a power law to a trace column by least squares on the
        log-log pairs of the window.

        Parameters
        ----------
        trace : pandas.DataFrame
            The trace (with column t).
        column : str
            The fitted column.
        window : tuple of float or None
            The window (t_min, t_max) with t_min > 0 (all positive
            times if None).

        Returns
        -------
        RateFit
            The fitted exponent, intercept, and r².

        Raises
        ------
        ExperimentInteractorError
            If the window holds fewer than five finite points, or
            non-positive values (the estimator's noise floor may have
            been reached; shrink the window).

        """
        try:
            if column not in trace.columns or 't' not in trace.columns:
                raise ExperimentInteractorError('unknown trace column',
                                                column=column)
            times = trace['t'].to_numpy(dtype=np.float64)
            values = trace[column].to_numpy(dtype=np.float64)
            if window is None:
                positive_times = times[times > 0]
                if positive_times.shape[0] == 0:
                    raise ExperimentInteractorError(
                        'trace has no positive times')
                window = (float(positive_times.min()),
                          float(positive_times.max()))
            t_min, t_max = window
            if t_min <= 0 or t_max < t_min:
                raise ExperimentInteractorError(
                    'window must satisfy 0 < t_min <= t_max', window=window)
            selected = ((times >= t_min) & (times <= t_max)
                        & np.isfinite(values))
            times, values = times[selected], values[selected]
            if times.shape[0] < MIN_FIT_POINTS:
                raise ExperimentInteractorError(
                    'fit needs at least {} points'.format(MIN_FIT_POINTS),
                    points=times.shape[0], window=window)
            if np.any(values <= 0):
                raise ExperimentInteractorError(
                    'non-positive values in the fit window, the noise floor '
                    'may be reached; shrink the window', column=column,
                    window=window)
            log_times, log_values = np.log(times), np.log(values)
            slope, intercept = np.polyfit(log_times, log_values, 1)
            residuals = log_values - (slope * log_times + intercept)
            total = float(np.sum((log_values - np.mean(log_values))**2))
            r_squared = (1.0 if total == 0 else
                         1.0 - float(np.sum(residuals**2)) / total)
            return RateFit(float(-slope), float(intercept),
                           min(max(r_squared, 0.0), 1.0),
                           (float(t_min), float(t_max)))
        except ExperimentInteractorError:
            raise
        except Exception:
            raise ExperimentInteractorError('unable to fit the rate',
                                            column=column, window=window)

    def compare_schemes(self, cfg: ExperimentConfig) -> ComparisonReport:
        """Run the Euler scheme for every configured step exponent and
        the continuous process at matched record times, and emit their
        distances side by side. The cells run concurrently, each in its
        own run directory.

        Parameters
        ----------
        cfg : ExperimentConfig
            The experiment configuration (with the compared etas).

        Returns
        -------
        ComparisonReport
            The comparison directory and table.

        Raises
        ------
        SimulationInteractorError
            If a simulation fails.
        MetricInteractorError
            If a distance cannot be estimated.
        pantos.common.configuration.ConfigError
            If the Euler steps of a compared eta cannot reach the
            horizon.
        GibbsInteractorError
            If a Gibbs reference cannot be computed.
        ExperimentInteractorError
            If the comparison fails otherwise.

        """
        directory = pathlib.Path(
            cfg.output_root) / 'compare-seed{}'.format(cfg.seed)
        try:
            cells = {
                'euler_eta{:g}'.format(eta): cfg.with_scheme(
                    'euler', eta, str(directory))
                for eta in cfg.etas
            }
            cells['continuous'] = cfg.with_scheme('continuous',
                                                  output_root=str(directory))
            traces: typing.Dict[str, pd.DataFrame] = {}
            with concurrent.futures.ThreadPoolExecutor(
                    max_workers=len(cells)) as executor:
                future_to_label = {
                    executor.submit(
                        self.run_experiment,  # yapf bug
                        cell_cfg): label
                    for label, cell_cfg in cells.items()
                }
                for future in concurrent.futures.as_completed(
                        future_to_label):
                    label = future_to_label[future]
                    traces[label] = load_trace(future.result())
            frame = pd.DataFrame({
                't': list(cfg.record_times),
                'a_t': [cfg.schedule_level(t) for t in cfg.record_times]
            })
            for label in cells:
                frame['tv_' + label] = traces[label]['tv'].to_numpy()
                frame['w1_' + label] = traces[label]['w1'].to_numpy()
            frame.to_csv(directory / COMPARISON_FILE_NAME, index=False,
                         float_format=CSV_FLOAT_FORMAT)
            return ComparisonReport(directory, frame)
        except (SimulationInteractorError, GibbsInteractorError,
                MetricInteractorError, ExperimentInteractorError,
                ConfigError):
            raise
        except Exception:
            raise ExperimentInteractorError('unable to compare the schemes',
                                            seed=cfg.seed)

    def gibbs_tv_sweep(self, cfg: ExperimentConfig, n_min: int, n_max: int,
                       points: int) -> GibbsTvSweep:
        """Compute d_TV(ν_{a_n}, ν_{a_{n+1}}) by quadrature along the
        plateau levels a_n = a(T_n) for geometrically spaced n, together
        with n·log(n)·d_TV, which stays bounded.

        Parameters
        ----------
        cfg : ExperimentConfig
            The experiment configuration (potential, A, c_T, and β).
        n_min : int
            The smallest plateau index (at least 2).
        n_max : int
            The largest plateau index.
        points : int
            The number of geometrically spaced indices (at least 2).

        Returns
        -------
        GibbsTvSweep
            The emitted file and table.

        Raises
        ------
        GibbsInteractorError
            If a distance cannot be computed.
        ExperimentInteractorError
            If the sweep arguments are invalid or the sweep fails.

        """
        try:
            if n_min < 2 or n_max <= n_min or points < 2:
                raise ExperimentInteractorError(
                    'sweep needs 2 <= n_min < n_max and at least 2 points',
                    n_min=n_min, n_max=n_max, points=points)
            indices = np.unique(
                np.rint(np.geomspace(n_min, n_max,
                                     points)).astype(np.int64)).tolist()
            pot = cfg.get_potential()
            schedule = AnnealSchedule(cfg.A)
            plateau = PlateauSchedule(cfg.c_T, cfg.beta)
            gibbs_interactor = GibbsInteractor()
            levels = {
                n: float(plateau.plateau_times(schedule, n)[1])
                for n in indices + [n + 1 for n in indices]
            }
            distances: typing.Dict[int, float] = {}
            with concurrent.futures.ThreadPoolExecutor(
                    max_workers=cfg.workers) as executor:
                future_to_index = {
                    executor.submit(
                        gibbs_interactor.tv_gibbs_pair,  # yapf bug
                        pot,
                        levels[n],
                        levels[n + 1],
                        tol=cfg.tol): n
                    for n in indices
                }
                for future in concurrent.futures.as_completed(
                        future_to_index):
                    distances[future_to_index[future]] = future.result()
            frame = pd.DataFrame({
                'n': indices,
                'a_n': [levels[n] for n in indices],
                'a_next': [levels[n + 1] for n in indices],
                'tv': [distances[n] for n in indices],
                'scaled_tv': [
                    n * math.log(n) * distances[n] for n in indices
                ]
            })
            directory = pathlib.Path(cfg.output_root) / 'gibbs-tv'
            directory.mkdir(parents=True, exist_ok=True)
            path = directory / GIBBS_TV_FILE_NAME
            frame.to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT)
            return GibbsTvSweep(path, frame)
        except (GibbsInteractorError, ExperimentInteractorError):
            raise
        except Exception:
            raise ExperimentInteractorError(
                'unable to sweep the Gibbs distances', n_min=n_min,
                n_max=n_max, points=points)

    def __simulate(self, cfg: ExperimentConfig) -> EnsembleResult:
        simulation_interactor = SimulationInteractor()
        spec = cfg.get_sim_spec()
        if cfg.scheme == 'euler':
            return simulation_interactor.simulate_euler_scheme(
                spec, cfg.n_traj)
        if cfg.scheme == 'continuous':
            return simulation_interactor.simulate_continuous(spec, cfg.n_traj)
        return simulation_interactor.simulate_plateau(spec, cfg.n_traj)

    def __track(self, cfg: ExperimentConfig, record_times: Array,
                samples: typing.List[Array], mean_V: Array,
                min_V: Array) -> pd.DataFrame:
        pot = cfg.get_potential()
        gibbs_interactor = GibbsInteractor()
        metric_interactor = MetricInteractor()
        limit = gibbs_interactor.limit_measure(pot)
        if pot.dim > MAX_TV_DIMENSION:
            _logger.warning('total variation not tracked in dimension %d',
                            pot.dim)
        rows = []
        for index, (t, cloud) in enumerate(zip(record_times, samples)):
            measure = EmpiricalMeasure(cloud)
            a_t = cfg.level(float(t))
            tv, tv_se, w1 = math.nan, math.nan, math.nan
            if a_t > 0 and pot.dim <= MAX_TV_DIMENSION:
                estimate = metric_interactor.tv_empirical_vs_density(
                    measure, GibbsMeasure(pot, a_t, cfg.tol), cfg.bandwidth,
                    cfg.n_bootstrap, cfg.seed + index)
                tv, tv_se = estimate.value, estimate.std_error
            if a_t > 0 and pot.dim <= QUADRATURE_MAX_DIMENSION:
                reference = gibbs_interactor.sample_gibbs(
                    pot, a_t, cloud.shape[0], cfg.seed + index).measure
                w1 = (metric_interactor.w1_1d(measure, reference)
                      if pot.dim == 1 else metric_interactor.w1_sliced(
                          measure, reference, cfg.n_slices, cfg.seed))
            elif a_t == 0:
                _logger.warning('Gibbs distances undefined for a = 0 at t=%g',
                                t)
            w1_limit = metric_interactor.w1_to_limit(measure, limit,
                                                     cfg.n_slices, cfg.seed)
            _logger.debug('t=%g a_t=%g tv=%g w1=%g w1_limit=%g', t, a_t, tv,
                          w1, w1_limit)
            rows.append((float(t), a_t, tv, tv_se, w1, float(mean_V[index]),
                         float(min_V[index]), w1_limit))
        return pd.DataFrame(rows, columns=list(TRACE_COLUMNS))


def _check_reachable(gamma1: float, eta: float, horizon: float) -> None:
    reachable = reachable_horizon(gamma1, eta)
    if horizon > reachable:
        raise ConfigError(
            'horizon unreachable by the Euler steps, raise gamma1 or '
            'lower eta', horizon=horizon, reachable=reachable, gamma1=gamma1,
            eta=eta)


def _write_plot_data(path: pathlib.Path, trace: pd.DataFrame,
                     title: str) -> None:
    # one gnuplot index per column, blocks separated by two blank lines
    blocks = []
    for column in trace.columns:
        if column == 't':
            continue
        lines = ['# {}: {}'.format(title, column), '# t {}'.format(column)]
        lines += [
            '{} {}'.format(CSV_FLOAT_FORMAT % t, CSV_FLOAT_FORMAT % value)
            for t, value in zip(trace['t'], trace[column])
        ]
        blocks.append('\n'.join(lines))
    path.write_text('\n\n\n'.join(blocks) + '\n')


def _write_diagnostic(run_dir: pathlib.Path, error: Exception) -> None:
    try:
        run_dir.mkdir(parents=True, exist_ok=True)
        (run_dir / DIAGNOSTIC_FILE_NAME).write_text('{}: {}\n'.format(
            type(error).__name__, error))
    except OSError:
        _logger.error('unable to write the diagnostic file', exc_info=True)

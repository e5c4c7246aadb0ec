"""Module that implements the Langevin annealing toolkit's API which is
exposed to the users of the toolkit.

"""
__all__ = [
    'AnnealSchedule', 'AssumptionReport', 'DiffusionField',
    'EmpiricalMeasure', 'EnsembleResult', 'ExperimentConfig',
    'FrozenSchedule', 'GibbsMeasure', 'LangevinAnnealingError',
    'LimitMeasure', 'NoiseModel', 'PlateauSchedule', 'Potential',
    'PowerLawStepSequence', 'RateFit', 'SimSpec', 'TvEstimate', 'a_of_t',
    'audit_assumptions', 'bandwidth_stable', 'builtin_double_well',
    'compare_schemes', 'correction_term', 'cumulative', 'drift', 'fit_rate',
    'get_diffusion', 'get_potential', 'gibbs_first_moment',
    'gibbs_tv_sweep', 'limit_measure', 'load_experiment_config', 'load_trace',
    'n_of_t', 'partition_constant', 'plateau_times', 'run_experiment',
    'sample_gibbs', 'simulate_continuous', 'simulate_euler_scheme',
    'simulate_plateau', 'time_change_inverse', 'tv_empirical',
    'tv_empirical_vs_density', 'tv_gaussian_1d', 'tv_gibbs_pair',
    'varpi_estimate', 'w1_1d', 'w1_sliced', 'w1_to_limit', 'well_masses'
]

import pathlib as _pathlib
import typing as _typing

import numpy.typing as _npt
import pandas as _pd  # type: ignore

from langevin.annealing import initialize_library as _initialize_library
from langevin.annealing.business.assumptions import AssumptionInteractor \
    as _AssumptionInteractor
from langevin.annealing.business.assumptions import AssumptionReport
from langevin.annealing.business.assumptions import \
    audit_grid as _audit_grid
from langevin.annealing.business.assumptions import \
    audit_pairs as _audit_pairs
from langevin.annealing.business.dynamics import EnsembleResult
from langevin.annealing.business.dynamics import NoiseModel
from langevin.annealing.business.dynamics import SimSpec
from langevin.annealing.business.dynamics import \
    SimulationInteractor as _SimulationInteractor
from langevin.annealing.business.experiments import ComparisonReport \
    as _ComparisonReport
from langevin.annealing.business.experiments import ExperimentConfig
from langevin.annealing.business.experiments import \
    ExperimentInteractor as _ExperimentInteractor
from langevin.annealing.business.experiments import GibbsTvSweep \
    as _GibbsTvSweep
from langevin.annealing.business.experiments import RateFit
from langevin.annealing.business.experiments import \
    load_trace as _load_trace
from langevin.annealing.business.gibbs import Box as _Box
from langevin.annealing.business.gibbs import GibbsInteractor \
    as _GibbsInteractor
from langevin.annealing.business.gibbs import GibbsMeasure
from langevin.annealing.business.metrics import Bandwidth as _Bandwidth
from langevin.annealing.business.metrics import \
    MetricInteractor as _MetricInteractor
from langevin.annealing.business.metrics import TvEstimate
from langevin.annealing.configuration import config as _config
from langevin.annealing.configuration import load_config as _load_config
from langevin.annealing.constants import AUDIT_GRID_SIZE as _AUDIT_GRID_SIZE
from langevin.annealing.constants import \
    DEFAULT_BOOTSTRAP_RESAMPLES as _DEFAULT_BOOTSTRAP_RESAMPLES
from langevin.annealing.constants import DEFAULT_SLICES as _DEFAULT_SLICES
from langevin.annealing.constants import \
    DEFAULT_TOLERANCE as _DEFAULT_TOLERANCE
from langevin.annealing.constants import FD_STEP as _FD_STEP
from langevin.annealing.entities import EmpiricalMeasure
from langevin.annealing.entities import LimitMeasure
from langevin.annealing.exceptions import \
    AnnealingLibraryError as _AnnealingLibraryError
from langevin.annealing.problems import DiffusionField
from langevin.annealing.problems import Potential
from langevin.annealing.problems import get_diffusion
from langevin.annealing.problems import get_potential
from langevin.annealing.problems.base import Array as _Array
from langevin.annealing.problems.drift import \
    correction_term as _correction_term
from langevin.annealing.problems.drift import drift as _drift
from langevin.annealing.problems.potentials import \
    builtin_double_well as _builtin_double_well
from langevin.annealing.schedules import AnnealSchedule
from langevin.annealing.schedules import FrozenSchedule
from langevin.annealing.schedules import NoiseSchedule as _NoiseSchedule
from langevin.annealing.schedules import PlateauSchedule
from langevin.annealing.schedules import PowerLawStepSequence
from langevin.annealing.schedules import StepSequence as _StepSequence

# Exception to be used by external toolkit users
LangevinAnnealingError = _AnnealingLibraryError


def correction_term(sigma: DiffusionField, x: _npt.ArrayLike,
                    fd_step: float = _FD_STEP) -> _Array:
    """Compute the correction term Υ_i(x) = Σ_j ∂_j(σσᵀ)_ij(x), in
    closed form if the diffusion field provides one and by central
    finite differences otherwise.

    Parameters
    ----------
    sigma : DiffusionField
        The diffusion field.
    x : array_like
        A point of shape (d,) or a batch of shape (n, d).
    fd_step : float
        The positive finite-difference step.

    Returns
    -------
    numpy.ndarray
        Υ(x) with the shape of x.

    Raises
    ------
    LangevinAnnealingError
        If the arguments are invalid or Υ is not finite.

    """
    return _correction_term(sigma, x, fd_step)


def drift(pot: Potential, sigma: DiffusionField, a: float,
          x: _npt.ArrayLike) -> _Array:
    """Compute the annealed drift b_a(x) = −(σσᵀ∇V)(x) + a²Υ(x). The
    Gibbs measure ν_a is invariant under the resulting diffusion when Υ
    vanishes, e.g. for constant σ; a state-dependent σ leaves a stationary
    flux (a²/2)Υν_a, an O(a²) bias that vanishes as a → 0.

    Parameters
    ----------
    pot : Potential
        The potential V.
    sigma : DiffusionField
        The diffusion field σ (same dimension).
    a : float
        The noise level a ≥ 0.
    x : array_like
        A point of shape (d,) or a batch of shape (n, d).

    Returns
    -------
    numpy.ndarray
        b_a(x) with the shape of x.

    Raises
    ------
    LangevinAnnealingError
        If the arguments are invalid or the drift is not finite.

    """
    return _drift(pot, sigma, a, x)


def audit_assumptions(
        pot: Potential, sigma: DiffusionField,
        grid: _typing.Optional[_npt.ArrayLike] = None,
        pairs: _typing.Optional[_typing.Tuple[_Array, _Array]] = None,
        r0: _typing.Optional[float] = None,
        alpha0: _typing.Optional[float] = None, a_max: float = 1.0,
        seed: int = 0) -> AssumptionReport:
    """Audit the standing assumptions on V and σ numerically. Missing
    grids are generated in the default audit box, and missing
    dissipativity constants are taken from the potential's metadata.

    Parameters
    ----------
    pot : Potential
        The potential V.
    sigma : DiffusionField
        The diffusion field σ.
    grid : array_like or None
        The audit points of shape (n, d).
    pairs : tuple of numpy.ndarray or None
        The first and second points of the dissipativity audit pairs.
    r0 : float or None
        The radius outside of which dissipativity is audited.
    alpha0 : float or None
        The dissipativity constant to be certified.
    a_max : float
        The largest noise level of the drift Lipschitz audit.
    seed : int
        The seed of generated grids and pairs.

    Returns
    -------
    AssumptionReport
        The worst-case margins of all audited assumptions.

    Raises
    ------
    LangevinAnnealingError
        If the audit cannot be performed.

    """
    metadata = pot.metadata
    if r0 is None:
        r0 = metadata.r0
    if alpha0 is None:
        alpha0 = metadata.alpha0
    if grid is None:
        grid = _audit_grid(pot.dim, _AUDIT_GRID_SIZE, seed=seed)
    if pairs is None:
        pairs = _audit_pairs(pot.dim, r0, _AUDIT_GRID_SIZE, seed=seed)
    request = _AssumptionInteractor.AuditRequest(pot, sigma, grid, pairs,
                                                 r0, alpha0, a_max=a_max)
    return _AssumptionInteractor().audit_assumptions(request)


def builtin_double_well(d: int, well_sep: float, hess_left: float,
                        hess_right: float) -> Potential:
    """Build the double-well test potential with minimizers at
    ±well_sep·e₁, prescribed Hessian determinants there, and V* = 1.

    Parameters
    ----------
    d : int
        The positive dimension.
    well_sep : float
        The positive distance of the minimizers from the origin.
    hess_left : float
        The positive Hessian determinant at −well_sep·e₁.
    hess_right : float
        The positive Hessian determinant at +well_sep·e₁.

    Returns
    -------
    Potential
        The double-well potential.

    Raises
    ------
    LangevinAnnealingError
        If an argument is invalid.

    """
    return _builtin_double_well(d, well_sep, hess_left, hess_right)


def a_of_t(s: _NoiseSchedule, t: _npt.ArrayLike) -> _typing.Any:
    """Evaluate the noise level schedule.

    Parameters
    ----------
    s : NoiseSchedule
        The schedule, e.g. a(t) = A/√log(t+e).
    t : array_like
        The times t ≥ 0.

    Returns
    -------
    float or numpy.ndarray
        a(t) with the shape of t.

    Raises
    ------
    LangevinAnnealingError
        If a time is negative.

    """
    return s.a_of_t(t)


def cumulative(sq: _StepSequence, n: int) -> float:
    """Compute Γ_n = γ_1 + ... + γ_n (Γ_0 = 0).

    Raises
    ------
    LangevinAnnealingError
        If n is negative or too large.

    """
    return sq.cumulative(n)


def n_of_t(sq: _StepSequence, t: float) -> int:
    """Compute N(t), the index with Γ_{N(t)} ≤ t < Γ_{N(t)+1}.

    Raises
    ------
    LangevinAnnealingError
        If t is negative or beyond the reachable horizon.

    """
    return sq.n_of_t(t)


def varpi_estimate(sq: _StepSequence, n_max: int) -> float:
    """Estimate ϖ = limsup (γ_n − γ_{n+1})/γ_{n+1}² on the tail
    [n_max/2, n_max].

    Raises
    ------
    LangevinAnnealingError
        If n_max is too small.

    """
    return sq.varpi_estimate(n_max)


def plateau_times(ps: PlateauSchedule, s: _NoiseSchedule,
                  n: int) -> _typing.Tuple[float, float]:
    """Compute the plateau boundary T_n = c_T·n^(1+β) and its level
    a_n = a(T_n).

    Raises
    ------
    LangevinAnnealingError
        If n is negative.

    """
    return ps.plateau_times(s, n)


def simulate_euler_scheme(spec: SimSpec, n_traj: int) -> EnsembleResult:
    """Simulate the Euler-Maruyama scheme with decreasing steps and its
    genuine continuous interpolation at the record times.

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
    LangevinAnnealingError
        If the simulation specification is invalid or a trajectory diverges.

    """
    return _SimulationInteractor().simulate_euler_scheme(spec, n_traj)


def simulate_continuous(spec: SimSpec, n_traj: int) -> EnsembleResult:
    """Simulate the continuous-schedule process by a fine Euler scheme.

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
    LangevinAnnealingError
        If the simulation specification is invalid or a trajectory diverges.

    """
    return _SimulationInteractor().simulate_continuous(spec, n_traj)


def simulate_plateau(spec: SimSpec, n_traj: int) -> EnsembleResult:
    """Simulate the plateau process by a fine Euler scheme.

    Parameters
    ----------
    spec : SimSpec
        The simulation specification (plateau and fine_dt required).
    n_traj : int
        The number of trajectories.

    Returns
    -------
    EnsembleResult
        The ensemble at the snapped record times.

    Raises
    ------
    LangevinAnnealingError
        If the simulation specification is invalid or a trajectory diverges.

    """
    return _SimulationInteractor().simulate_plateau(spec, n_traj)


def time_change_inverse(s: _typing.Union[_NoiseSchedule, float],
                        t: float) -> float:
    """Compute the inverse time change ∫₀ᵗ u²(s)ds.

    Parameters
    ----------
    s : NoiseSchedule or float
        The level function (a constant if a float).
    t : float
        The time t ≥ 0.

    Returns
    -------
    float
        The time of the unit-level process with the same law.

    Raises
    ------
    LangevinAnnealingError
        If the arguments are invalid.

    """
    return _SimulationInteractor().time_change_inverse(s, t)


def partition_constant(pot: Potential, a: float,
                       box: _typing.Optional[_Box] = None,
                       tol: float = _DEFAULT_TOLERANCE) -> float:
    """Compute Z_a = ∫exp(−2(V−V*)/a²) by adaptive quadrature.

    Raises
    ------
    LangevinAnnealingError
        If the arguments are invalid or the quadrature does not
        converge.

    """
    return _GibbsInteractor().partition_constant(pot, a, box, tol)


def limit_measure(pot: Potential) -> LimitMeasure:
    """Compute the limit measure ν*, the Dirac mixture on the global
    minimizers with weights proportional to det(∇²V)^(−1/2).

    Raises
    ------
    LangevinAnnealingError
        If a Hessian determinant is not positive.

    """
    return _GibbsInteractor().limit_measure(pot)


def sample_gibbs(pot: Potential, a: float, n: int,
                 seed: int) -> EmpiricalMeasure:
    """Draw exact samples of the Gibbs measure ν_a.

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
    EmpiricalMeasure
        The samples.

    Raises
    ------
    LangevinAnnealingError
        If the samples cannot be drawn.

    """
    return _GibbsInteractor().sample_gibbs(pot, a, n, seed).measure


def tv_gibbs_pair(pot: Potential, a1: float, a2: float,
                  box: _typing.Optional[_Box] = None,
                  tol: float = _DEFAULT_TOLERANCE) -> float:
    """Compute d_TV(ν_{a1}, ν_{a2}) ∈ [0, 2] (L¹ convention) by adaptive
    quadrature.

    Raises
    ------
    LangevinAnnealingError
        If the arguments are invalid or the quadrature does not
        converge.

    """
    return _GibbsInteractor().tv_gibbs_pair(pot, a1, a2, box, tol)


def gibbs_first_moment(pot: Potential, a: float, x: _npt.ArrayLike,
                       tol: float = _DEFAULT_TOLERANCE) -> float:
    """Compute ν_a(|x − ·|) by adaptive quadrature.

    Raises
    ------
    LangevinAnnealingError
        If the arguments are invalid or the quadrature does not
        converge.

    """
    return _GibbsInteractor().gibbs_first_moment(pot, a, x, tol)


def well_masses(pot: Potential, a: float, radius: float,
                tol: float = _DEFAULT_TOLERANCE,
                seed: int = 0) -> _Array:
    """Compute the ν_a masses of the balls of the given radius around
    the global minimizers.

    Raises
    ------
    LangevinAnnealingError
        If the masses cannot be computed.

    """
    return _GibbsInteractor().well_masses(pot, a, radius, tol, seed)


def tv_empirical(p: EmpiricalMeasure, q: EmpiricalMeasure,
                 bandwidth: _Bandwidth = 'auto',
                 n_bootstrap: int = _DEFAULT_BOOTSTRAP_RESAMPLES,
                 seed: int = 0) -> TvEstimate:
    """Estimate d_TV(p, q) ∈ [0, 2] (L¹ convention) between two clouds
    in dimension at most 2 by binned kernel density estimates.

    Parameters
    ----------
    p : EmpiricalMeasure
        The first cloud.
    q : EmpiricalMeasure
        The second cloud.
    bandwidth : float or str
        A positive bandwidth, or 'auto' for the Silverman rule.
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
    LangevinAnnealingError
        If the distance cannot be estimated (e.g. for d > 2).

    """
    return _MetricInteractor().tv_empirical(p, q, bandwidth, n_bootstrap,
                                            seed)


def bandwidth_stable(p: EmpiricalMeasure, q: EmpiricalMeasure,
                     bandwidth: _Bandwidth = 'auto',
                     n_bootstrap: int = _DEFAULT_BOOTSTRAP_RESAMPLES,
                     seed: int = 0) -> bool:
    """Check that halving and doubling the bandwidth changes the
    total variation estimate of tv_empirical by less than 3 bootstrap
    standard errors.

    Raises
    ------
    LangevinAnnealingError
        If the distance cannot be estimated.

    """
    return _MetricInteractor().bandwidth_stable(p, q, bandwidth,
                                                n_bootstrap, seed)


def tv_empirical_vs_density(
        p: EmpiricalMeasure, g: GibbsMeasure, bandwidth: _Bandwidth = 'auto',
        n_bootstrap: int = _DEFAULT_BOOTSTRAP_RESAMPLES,
        seed: int = 0) -> TvEstimate:
    """Estimate d_TV(p, ν_a) ∈ [0, 2] (L¹ convention) between a cloud and
    a Gibbs measure in dimension at most 2.

    Raises
    ------
    LangevinAnnealingError
        If the distance cannot be estimated (e.g. for d > 2).

    """
    return _MetricInteractor().tv_empirical_vs_density(
        p, g, bandwidth, n_bootstrap, seed)


def w1_1d(p: EmpiricalMeasure, q: EmpiricalMeasure) -> float:
    """Compute the exact Wasserstein-1 distance of one-dimensional
    clouds.

    Raises
    ------
    LangevinAnnealingError
        If a cloud is not one-dimensional.

    """
    return _MetricInteractor().w1_1d(p, q)


def w1_sliced(p: EmpiricalMeasure, q: EmpiricalMeasure,
              n_slices: int = _DEFAULT_SLICES, seed: int = 0) -> float:
    """Compute the sliced Wasserstein-1 distance over random unit
    directions.

    Raises
    ------
    LangevinAnnealingError
        If the dimensions differ or n_slices is not positive.

    """
    return _MetricInteractor().w1_sliced(p, q, n_slices, seed)


def w1_to_limit(p: EmpiricalMeasure, limit: LimitMeasure,
                n_slices: int = _DEFAULT_SLICES, seed: int = 0) -> float:
    """Compute the Wasserstein-1 distance between a cloud and the limit
    measure ν* (exact in d = 1, sliced otherwise).

    """
    return _MetricInteractor().w1_to_limit(p, limit, n_slices, seed)


def tv_gaussian_1d(m1: float, s1: float, m2: float, s2: float) -> float:
    """Compute the exact d_TV(N(m1, s1²), N(m2, s2²)) ∈ [0, 2] (L¹
    convention).

    Raises
    ------
    LangevinAnnealingError
        If a standard deviation is not positive.

    """
    return _MetricInteractor().tv_gaussian_1d(m1, s1, m2, s2)


def load_experiment_config(
        file_path: _typing.Optional[str] = None,
        overrides: _typing.Optional[_typing.Mapping[str,
                                                    _typing.Any]] = None
) -> ExperimentConfig:
    """Load an experiment configuration from a configuration file.

    Parameters
    ----------
    file_path : str or None
        The path to the configuration file (typical configuration file
        locations are searched if none is specified).
    overrides : mapping or None
        Dotted keys mapped to values replacing those of the file.

    Returns
    -------
    ExperimentConfig
        The validated experiment configuration.

    Raises
    ------
    LangevinAnnealingError
        If the library cannot be initialized.
    pantos.common.configuration.ConfigError
        If the configuration is invalid.

    """
    if file_path is None and not overrides:
        _initialize_library()
    else:
        _load_config(file_path, reload=True, overrides=overrides)
    return ExperimentConfig.from_config(_config.as_dict())


def run_experiment(cfg: ExperimentConfig) -> _pathlib.Path:
    """Run an experiment and write its trace, samples, configuration
    echo, and plot data.

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
    LangevinAnnealingError
        If the run fails (a diagnostic file is written to the run
        directory).

    """
    return _ExperimentInteractor().run_experiment(cfg)


def fit_rate(
        trace: _pd.DataFrame, column: str,
        window: _typing.Optional[_typing.Tuple[float, float]] = None) \
        -> RateFit:
    """Fit a power law t^(−α) to a trace column on a time window.

    Raises
    ------
    LangevinAnnealingError
        If the window holds too few or non-positive values.

    """
    return _ExperimentInteractor().fit_rate(trace, column, window)


def compare_schemes(cfg: ExperimentConfig) -> _ComparisonReport:
    """Compare the Euler scheme for the configured step exponents with
    the continuous process at matched record times.

    Raises
    ------
    LangevinAnnealingError
        If a run fails.

    """
    return _ExperimentInteractor().compare_schemes(cfg)


def gibbs_tv_sweep(cfg: ExperimentConfig, n_min: int, n_max: int,
                   points: int) -> _GibbsTvSweep:
    """Sweep n·log(n)·d_TV(ν_{a_n}, ν_{a_{n+1}}) along the plateau
    levels.

    Raises
    ------
    LangevinAnnealingError
        If the sweep fails.

    """
    return _ExperimentInteractor().gibbs_tv_sweep(cfg, n_min, n_max, points)


def load_trace(run_dir: _typing.Union[str, _pathlib.Path]) -> _pd.DataFrame:
    """Load the trace of a run directory.

    Raises
    ------
    LangevinAnnealingError
        If the trace cannot be loaded.

    """
    return _load_trace(run_dir)

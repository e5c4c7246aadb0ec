"""Constants to be used by multiple modules of the Langevin annealing
toolkit.

"""
import typing

FD_STEP: typing.Final[float] = 1e-4
"""Default step of central finite differences (correction term and
Hessians)."""

DIVERGENCE_THRESHOLD: typing.Final[float] = 1e6
"""Euclidean norm above which a trajectory is considered diverged."""

MAX_FINE_DT: typing.Final[float] = 1e-2
"""Largest admissible micro-step of continuous-process runs."""

DEFAULT_FINE_DT: typing.Final[float] = 1e-3
"""Default micro-step of continuous-process runs."""

TRAJECTORY_BLOCK_SIZE: typing.Final[int] = 1000
"""Number of trajectories simulated by one worker task. Each block owns
its own random stream, so results do not depend on the number of
workers."""

MAX_STEP_COUNT: typing.Final[int] = 2**27
"""Upper limit of cached cumulative step sums."""

AUDIT_GRID_SIZE: typing.Final[int] = 10**4
"""Default number of audit grid points and of audit pairs."""

AUDIT_BOX_HALF_WIDTH: typing.Final[float] = 10.0
"""Default half width of the audit box [-10, 10]^d."""

QUADRATURE_MAX_DIMENSION: typing.Final[int] = 3
"""Largest dimension supported by Gibbs quadrature and sampling."""

QUADRATURE_MIN_HALF_WIDTH: typing.Final[float] = 5.0
"""Smallest half width of a minimizer-centered quadrature box."""

QUADRATURE_BOX_DOUBLINGS: typing.Final[int] = 3
"""Number of box doublings before a tail check is considered failed."""

DEFAULT_TOLERANCE: typing.Final[float] = 1e-6
"""Default quadrature tolerance."""

REJECTION_INFLATION: typing.Final[float] = 2.0
"""Covariance inflation of the Gaussian-mixture rejection proposal."""

REJECTION_SAFETY_FACTOR: typing.Final[float] = 1.05
"""Safety factor applied to the grid estimate of the rejection bound."""

MIN_ACCEPTANCE_RATE: typing.Final[float] = 1e-4
"""Smallest acceptable rejection sampling acceptance rate."""

KDE_GRID_POINTS: typing.Final[int] = 512
"""Number of KDE grid points per dimension."""

KDE_GRID_PADDING: typing.Final[float] = 3.0
"""Padding of the KDE grid in bandwidths."""

MAX_TV_DIMENSION: typing.Final[int] = 2
"""Largest dimension supported by the total variation estimators."""

DEFAULT_BOOTSTRAP_RESAMPLES: typing.Final[int] = 50
"""Default number of bootstrap resamples of total variation estimates."""

BANDWIDTH_STABILITY_STD_ERRORS: typing.Final[float] = 3.0
"""Largest change of a total variation estimate, in bootstrap standard
errors, when its bandwidth is halved or doubled."""

DEFAULT_SLICES: typing.Final[int] = 64
"""Default number of random directions of sliced Wasserstein
distances."""

MIN_FIT_POINTS: typing.Final[int] = 5
"""Minimum number of points of a rate fit."""

PREDICTED_EXPONENT_RANGE: typing.Final[typing.Tuple[float, float]] = (0.0,
                                                                      1.0)
"""Open range of decay exponents predicted for annealed runs."""

EXIT_CODE_SUCCESS: typing.Final[int] = 0
EXIT_CODE_AUDIT_FAILED: typing.Final[int] = 1
EXIT_CODE_CONFIG_ERROR: typing.Final[int] = 2
EXIT_CODE_DIVERGENCE: typing.Final[int] = 3
EXIT_CODE_METRIC_ERROR: typing.Final[int] = 4

OUTPUT_ROOT_ENV_VAR: typing.Final[str] = 'LANGEVIN_ANNEALING_OUTPUT_ROOT'
"""Environment variable holding the default output root directory."""

TRACE_FILE_NAME: typing.Final[str] = 'trace.csv'
CONFIG_ECHO_FILE_NAME: typing.Final[str] = 'config.echo'
PLOT_DATA_FILE_NAME: typing.Final[str] = 'plots.dat'
COMPARISON_FILE_NAME: typing.Final[str] = 'compare.csv'
GIBBS_TV_FILE_NAME: typing.Final[str] = 'gibbs_tv.csv'
DIAGNOSTIC_FILE_NAME: typing.Final[str] = 'diagnostic.txt'
SAMPLES_FILE_NAME_FORMAT: typing.Final[str] = 'samples_{index:03d}_t{t:g}.csv'
"""Name of the sample file of the record time t with the given index."""

TRACE_COLUMNS: typing.Final[typing.Tuple[str, ...]] = ('t', 'a_t', 'tv',
                                                        'tv_se', 'w1',
                                                        'mean_V', 'min_V',
                                                        'w1_limit')
"""Header of trace files."""

CSV_FLOAT_FORMAT: typing.Final[str] = '%.17g'
"""Float format of all emitted CSV files (exact round trip)."""

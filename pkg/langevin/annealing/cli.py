"""Command-line interface of the Langevin annealing toolkit.

"""
import argparse
import logging
import sys
import typing

from pantos.common.configuration import ConfigError
from pantos.common.exceptions import BaseError

from langevin.annealing.business.assumptions import AssumptionInteractor
from langevin.annealing.business.assumptions import audit_grid
from langevin.annealing.business.assumptions import audit_pairs
from langevin.annealing.business.dynamics import DivergenceError
from langevin.annealing.business.experiments import ExperimentConfig
from langevin.annealing.business.experiments import ExperimentInteractor
from langevin.annealing.business.experiments import load_config_echo
from langevin.annealing.business.experiments import load_trace
from langevin.annealing.business.experiments import predicted_rate
from langevin.annealing.configuration import config
from langevin.annealing.configuration import load_config
from langevin.annealing.configuration import parse_override
from langevin.annealing.constants import AUDIT_GRID_SIZE
from langevin.annealing.constants import EXIT_CODE_AUDIT_FAILED
from langevin.annealing.constants import EXIT_CODE_CONFIG_ERROR
from langevin.annealing.constants import EXIT_CODE_DIVERGENCE
from langevin.annealing.constants import EXIT_CODE_METRIC_ERROR
from langevin.annealing.constants import EXIT_CODE_SUCCESS

_logger = logging.getLogger(__name__)

_LOG_FORMAT = '%(asctime)s %(levelname)s %(name)s: %(message)s'


def create_parser() -> argparse.ArgumentParser:
    """Create the argument parser of all commands.

    Returns
    -------
    argparse.ArgumentParser
        The argument parser.

    """
    parser = argparse.ArgumentParser(
        prog='langevin-annealing',
        description='Simulate annealed Langevin dynamics and track their '
        'convergence to the Gibbs measures.')
    parser.add_argument('--config', default=None,
                        help='path to the configuration file')
    parser.add_argument('--set', dest='overrides', action='append',
                        default=[], metavar='KEY=VALUE',
                        help='override a configuration value (repeatable)')
    parser.add_argument('--output-root', default=None,
                        help='root directory of the run directories')
    parser.add_argument('-v', '--verbose', action='count', default=0,
                        help='log INFO messages (DEBUG with -vv)')
    subparsers = parser.add_subparsers(dest='command', required=True)

    subparsers.add_parser('run', help='run the configured experiment')

    cmd_fit = subparsers.add_parser(
        'fit', help='fit the decay exponent of a trace column')
    cmd_fit.add_argument('run_dir', help='the run directory')
    cmd_fit.add_argument('--column', default='tv',
                         help='the fitted column (default: tv)')
    cmd_fit.add_argument('--t-min', type=float, default=None,
                         help='the first time of the fit window')
    cmd_fit.add_argument('--t-max', type=float, default=None,
                         help='the last time of the fit window')

    subparsers.add_parser(
        'compare', help='compare the Euler scheme for the configured step '
        'exponents with the continuous process')

    cmd_audit = subparsers.add_parser(
        'audit', help='audit the assumptions on the configured problem')
    cmd_audit.add_argument(
        '--r0', type=float, default=None,
        help='dissipativity radius (default: from the potential)')
    cmd_audit.add_argument(
        '--alpha0', type=float, default=None,
        help='certified dissipativity constant (default: from the '
        'potential)')
    cmd_audit.add_argument('--grid-size', type=int, default=AUDIT_GRID_SIZE,
                           help='number of audit points and pairs')

    cmd_gibbs_tv = subparsers.add_parser(
        'gibbs-tv', help='sweep n·log(n)·TV between successive plateau '
        'Gibbs measures')
    cmd_gibbs_tv.add_argument('--n-min', type=int, default=10)
    cmd_gibbs_tv.add_argument('--n-max', type=int, default=1000)
    cmd_gibbs_tv.add_argument('--points', type=int, default=20)
    return parser


def main(argv: typing.Optional[typing.List[str]] = None) -> int:
    """Main CLI entry point.

    Parameters
    ----------
    argv : list of str or None
        The command-line arguments (sys.argv if None).

    Returns
    -------
    int
        The exit code: 0 on success, 1 for a failed assumption audit,
        2 for a configuration error, 3 for a divergence, and 4 for any
        other failure.

    """
    args = create_parser().parse_args(argv)
    level = (logging.WARNING if args.verbose == 0 else
             logging.INFO if args.verbose == 1 else logging.DEBUG)
    logging.basicConfig(level=level, format=_LOG_FORMAT)
    command_map: typing.Dict[str, typing.Callable[[argparse.Namespace],
                                                  int]] = {
        'run': _run,
        'fit': _fit,
        'compare': _compare,
        'audit': _audit,
        'gibbs-tv': _gibbs_tv
    }
    try:
        return command_map[args.command](args)
    except ConfigError as error:
        _logger.error('configuration error: %s', error)
        return EXIT_CODE_CONFIG_ERROR
    except DivergenceError as error:
        _logger.error('divergence: %s', error)
        return EXIT_CODE_DIVERGENCE
    except BaseError as error:
        _logger.error('command failed: %s', error)
        return EXIT_CODE_METRIC_ERROR


def _load_experiment_config(args: argparse.Namespace) -> ExperimentConfig:
    overrides = dict(parse_override(assignment)
                     for assignment in args.overrides)
    if args.output_root is not None:
        overrides['output.root'] = args.output_root
    load_config(args.config, reload=True, overrides=overrides)
    return ExperimentConfig.from_config(config.as_dict())


def _run(args: argparse.Namespace) -> int:
    cfg = _load_experiment_config(args)
    run_dir = ExperimentInteractor().run_experiment(cfg)
    print(run_dir)
    return EXIT_CODE_SUCCESS


def _fit(args: argparse.Namespace) -> int:
    trace = load_trace(args.run_dir)
    window = None
    if args.t_min is not None or args.t_max is not None:
        times = trace['t'][trace['t'] > 0]
        t_min = float(times.min()) if args.t_min is None else args.t_min
        t_max = float(times.max()) if args.t_max is None else args.t_max
        window = (t_min, t_max)
    fit = ExperimentInteractor().fit_rate(trace, args.column, window)
    effective = load_config_echo(args.run_dir)
    predicted = predicted_rate(effective['simulation']['scheme'],
                               effective['schedule']['beta'])
    print('column: {}'.format(args.column))
    print('window: [{:g}, {:g}]'.format(*fit.window))
    print('exponent: {:.6g}'.format(fit.exponent))
    print('intercept: {:.6g}'.format(fit.intercept))
    print('r_squared: {:.6g}'.format(fit.r_squared))
    print('predicted exponent range: ({:g}, {:g})'.format(
        predicted.lower, predicted.upper))
    if predicted.plateau_bound is not None:
        print('plateau exponent bound: {:.6g}'.format(
            predicted.plateau_bound))
    return EXIT_CODE_SUCCESS


def _compare(args: argparse.Namespace) -> int:
    cfg = _load_experiment_config(args)
    report = ExperimentInteractor().compare_schemes(cfg)
    print(report.directory)
    return EXIT_CODE_SUCCESS


def _audit(args: argparse.Namespace) -> int:
    cfg = _load_experiment_config(args)
    pot = cfg.get_potential()
    metadata = pot.metadata
    r0 = metadata.r0 if args.r0 is None else args.r0
    alpha0 = metadata.alpha0 if args.alpha0 is None else args.alpha0
    request = AssumptionInteractor.AuditRequest(
        pot, cfg.get_diffusion(),
        audit_grid(pot.dim, args.grid_size, seed=cfg.seed),
        audit_pairs(pot.dim, r0, args.grid_size, seed=cfg.seed), r0, alpha0,
        a_max=cfg.A)
    report = AssumptionInteractor().audit_assumptions(request)
    print(report.to_frame().to_string(index=False))
    return EXIT_CODE_SUCCESS if report.passed else EXIT_CODE_AUDIT_FAILED


def _gibbs_tv(args: argparse.Namespace) -> int:
    cfg = _load_experiment_config(args)
    sweep = ExperimentInteractor().gibbs_tv_sweep(cfg, args.n_min,
                                                  args.n_max, args.points)
    print(sweep.path)
    return EXIT_CODE_SUCCESS


if __name__ == '__main__':
    sys.exit(main())

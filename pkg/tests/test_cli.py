import pathlib
import unittest.mock

import pandas as pd  # type: ignore
import pytest
import yaml

from langevin.annealing.business.assumptions import AssumptionInteractor
from langevin.annealing.business.dynamics import DivergenceError
from langevin.annealing.business.experiments import ExperimentInteractor
from langevin.annealing.business.experiments import GibbsTvSweep
from langevin.annealing.business.metrics import MetricInteractorError
from langevin.annealing.cli import create_parser
from langevin.annealing.cli import main
from langevin.annealing.constants import CONFIG_ECHO_FILE_NAME
from langevin.annealing.constants import EXIT_CODE_AUDIT_FAILED
from langevin.annealing.constants import EXIT_CODE_CONFIG_ERROR
from langevin.annealing.constants import EXIT_CODE_DIVERGENCE
from langevin.annealing.constants import EXIT_CODE_METRIC_ERROR
from langevin.annealing.constants import EXIT_CODE_SUCCESS
from langevin.annealing.constants import TRACE_FILE_NAME

_CONFIG = '''
problem:
    potential:
        name: quadratic
    diffusion:
        name: constant
schedule:
    A: 1
simulation:
    x0: [1.0]
    horizon: 8
    n_traj: 200
output:
    root: {root}
'''


@pytest.fixture
def config_file(tmp_path):
    path = tmp_path / 'langevin-annealing.yml'
    path.write_text(_CONFIG.format(root=tmp_path / 'runs'))
    return str(path)


@pytest.fixture
def run_dir(tmp_path):
    directory = tmp_path / 'run-euler-eta0.55-seed0'
    directory.mkdir()
    times = [1.0, 2.0, 4.0, 8.0, 16.0, 32.0]
    pd.DataFrame({
        't': times,
        'tv': [t**-0.5 for t in times]
    }).to_csv(directory / TRACE_FILE_NAME, index=False)
    with (directory / CONFIG_ECHO_FILE_NAME).open('w') as file:
        yaml.safe_dump(
            {
                'simulation': {
                    'scheme': 'plateau'
                },
                'schedule': {
                    'beta': 1.0
                }
            }, file)
    return directory


def test_create_parser_correct():
    args = create_parser().parse_args(
        ['--set', 'seed=3', '--set', 'schedule.A=2', '-vv', 'fit', 'runs/x',
         '--t-min', '2'])
    assert args.command == 'fit'
    assert args.overrides == ['seed=3', 'schedule.A=2']
    assert args.verbose == 2
    assert args.t_min == 2.0
    assert args.column == 'tv'


@unittest.mock.patch.object(ExperimentInteractor, 'run_experiment')
def test_main_run_correct(mocked_run_experiment, config_file, tmp_path,
                          capsys):
    mocked_run_experiment.return_value = tmp_path / 'runs' / 'run'
    exit_code = main([
        '--config', config_file, '--set', 'simulation.horizon=16', '--set',
        'seed=5', 'run'
    ])
    assert exit_code == EXIT_CODE_SUCCESS
    cfg = mocked_run_experiment.call_args.args[0]
    assert cfg.horizon == 16.0
    assert cfg.seed == 5
    assert cfg.record_times == (1.0, 2.0, 4.0, 8.0, 16.0)
    assert capsys.readouterr().out.strip() == str(tmp_path / 'runs' / 'run')


@unittest.mock.patch.object(ExperimentInteractor, 'run_experiment')
def test_main_run_output_root(mocked_run_experiment, config_file, tmp_path):
    output_root = str(tmp_path / 'elsewhere')
    assert main(['--config', config_file, '--output-root', output_root,
                 'run']) == EXIT_CODE_SUCCESS
    assert mocked_run_experiment.call_args.args[0].output_root == output_root


@pytest.mark.parametrize('overrides', [['horizon'], ['schedule.A=0'],
                                       ['simulation.horizon=0.5']])
@unittest.mock.patch.object(ExperimentInteractor, 'run_experiment')
def test_main_run_config_error(mocked_run_experiment, config_file,
                               overrides):
    arguments = ['--config', config_file]
    for assignment in overrides:
        arguments += ['--set', assignment]
    assert main(arguments + ['run']) == EXIT_CODE_CONFIG_ERROR
    mocked_run_experiment.assert_not_called()


def test_main_run_missing_config_file_error(tmp_path):
    assert main(['--config', str(tmp_path / 'missing.yml'),
                 'run']) == EXIT_CODE_CONFIG_ERROR


@unittest.mock.patch.object(ExperimentInteractor, 'run_experiment',
                            side_effect=DivergenceError('diverged'))
def test_main_run_divergence_error(mocked_run_experiment, config_file):
    assert main(['--config', config_file, 'run']) == EXIT_CODE_DIVERGENCE


@unittest.mock.patch.object(ExperimentInteractor, 'run_experiment',
                            side_effect=MetricInteractorError('no estimate'))
def test_main_run_metric_error(mocked_run_experiment, config_file):
    assert main(['--config', config_file, 'run']) == EXIT_CODE_METRIC_ERROR


def test_main_fit_correct(run_dir, capsys):
    assert main(['fit', str(run_dir), '--t-min', '2']) == EXIT_CODE_SUCCESS
    output = capsys.readouterr().out
    assert 'window: [2, 32]' in output
    assert 'exponent: 0.5\n' in output
    assert 'plateau exponent bound: 0.5' in output


def test_main_fit_too_few_points_error(run_dir):
    assert main(['fit', str(run_dir), '--t-min', '8']) == \
        EXIT_CODE_METRIC_ERROR


def test_main_fit_missing_trace_error(tmp_path):
    assert main(['fit', str(tmp_path)]) == EXIT_CODE_METRIC_ERROR


def test_main_audit_correct(config_file, capsys):
    assert main(['--config', config_file, 'audit', '--grid-size',
                 '200']) == EXIT_CODE_SUCCESS
    assert 'dissipativity' in capsys.readouterr().out


@unittest.mock.patch.object(AssumptionInteractor, 'audit_assumptions')
def test_main_audit_failed(mocked_audit_assumptions, config_file):
    mocked_audit_assumptions.return_value.passed = False
    assert main(['--config', config_file, 'audit', '--r0', '2', '--alpha0',
                 '0.1']) == EXIT_CODE_AUDIT_FAILED
    request = mocked_audit_assumptions.call_args.args[0]
    assert request.r0 == 2.0
    assert request.alpha0 == 0.1
    assert request.a_max == 1.0


@unittest.mock.patch.object(ExperimentInteractor, 'compare_schemes')
def test_main_compare_correct(mocked_compare_schemes, config_file, capsys):
    mocked_compare_schemes.return_value.directory = pathlib.Path('compare')
    assert main(['--config', config_file, 'compare']) == EXIT_CODE_SUCCESS
    assert mocked_compare_schemes.call_args.args[0].etas == (0.55, 0.6)
    assert capsys.readouterr().out.strip() == 'compare'


@unittest.mock.patch.object(ExperimentInteractor, 'gibbs_tv_sweep')
def test_main_gibbs_tv_correct(mocked_gibbs_tv_sweep, config_file):
    mocked_gibbs_tv_sweep.return_value = GibbsTvSweep(
        pathlib.Path('gibbs_tv.csv'), pd.DataFrame())
    assert main(['--config', config_file, 'gibbs-tv', '--n-min', '5',
                 '--n-max', '50', '--points', '4']) == EXIT_CODE_SUCCESS
    assert mocked_gibbs_tv_sweep.call_args.args[1:] == (5, 50, 4)

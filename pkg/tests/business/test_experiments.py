import pathlib
import unittest.mock

import numpy as np
import pandas as pd  # type: ignore
import pytest
from pantos.common.configuration import ConfigError

from langevin.annealing.business.dynamics import DivergenceError
from langevin.annealing.business.dynamics import SimulationInteractor
from langevin.annealing.business.experiments import ExperimentConfig
from langevin.annealing.business.experiments import ExperimentInteractor
from langevin.annealing.business.experiments import \
    ExperimentInteractorError
from langevin.annealing.business.experiments import geometric_record_times
from langevin.annealing.business.experiments import load_config_echo
from langevin.annealing.business.experiments import load_trace
from langevin.annealing.business.experiments import predicted_rate
from langevin.annealing.business.experiments import reachable_horizon
from langevin.annealing.constants import COMPARISON_FILE_NAME
from langevin.annealing.constants import CONFIG_ECHO_FILE_NAME
from langevin.annealing.constants import DIAGNOSTIC_FILE_NAME
from langevin.annealing.constants import PLOT_DATA_FILE_NAME
from langevin.annealing.constants import SAMPLES_FILE_NAME_FORMAT
from langevin.annealing.constants import TRACE_COLUMNS
from langevin.annealing.constants import TRACE_FILE_NAME
from langevin.annealing.schedules import AnnealSchedule
from langevin.annealing.schedules import PlateauSchedule

_RECORD_TIMES = [1.0, 2.0, 4.0, 8.0]

_FIT_TIMES = [1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0]


def _config_dict(output_root, **simulation):
    simulation_section = {
        'scheme': 'euler',
        'x0': [1.0],
        'horizon': _RECORD_TIMES[-1],
        'n_traj': 200,
        'record_times': {
            'kind': 'explicit',
            'values': list(_RECORD_TIMES)
        }
    }
    simulation_section.update(simulation)
    return {
        'problem': {
            'potential': {
                'name': 'quadratic'
            },
            'diffusion': {
                'name': 'constant'
            }
        },
        'schedule': {
            'A': 1.0,
            'gamma1': 0.5,
            'eta': 0.6
        },
        'simulation': simulation_section,
        'metrics': {
            'n_bootstrap': 2,
            'n_slices': 16
        },
        'output': {
            'root': str(output_root)
        }
    }


@pytest.fixture(scope='module')
def experiment_interactor():
    return ExperimentInteractor()


@pytest.fixture
def experiment_config(tmp_path):
    return ExperimentConfig.from_config(_config_dict(tmp_path))


def test_geometric_record_times_correct():
    assert geometric_record_times(1.0, 10.0) == [1.0, 2.0, 4.0, 8.0]
    assert geometric_record_times(0.5, 2.0) == [0.5, 1.0, 2.0]
    assert geometric_record_times(4.0, 2.0) == []


def test_reachable_horizon_correct():
    assert reachable_horizon(1.0, 1.0) == pytest.approx(1 + 27 * np.log(2))
    assert reachable_horizon(0.05, 0.55) > 32.0
    assert reachable_horizon(0.05, 1.0) < 2.0


def test_predicted_rate_correct():
    rate = predicted_rate('euler', 1.0)
    assert (rate.lower, rate.upper) == (0.0, 1.0)
    assert rate.plateau_bound is None
    assert predicted_rate('plateau', 1.0).plateau_bound == pytest.approx(0.5)


def test_experiment_config_from_config_defaults(tmp_path):
    config_dict = _config_dict(tmp_path)
    del config_dict['simulation']['record_times']
    config_dict['simulation']['horizon'] = 10.0
    cfg = ExperimentConfig.from_config(config_dict)
    assert cfg.record_times == (1.0, 2.0, 4.0, 8.0)
    assert cfg.fine_dt == pytest.approx(1e-3)
    assert cfg.frozen_a is None
    assert cfg.noise_kind == 'none'
    assert cfg.etas == (0.55, 0.6)
    assert cfg.seed == 0
    assert cfg.output_root == str(tmp_path)
    assert cfg.effective['simulation']['horizon'] == 10.0


def test_experiment_config_explicit_record_times_sorted(tmp_path):
    cfg = ExperimentConfig.from_config(
        _config_dict(tmp_path, record_times={
            'kind': 'explicit',
            'values': [4, 1, 2]
        }))
    assert cfg.record_times == (1.0, 2.0, 4.0)


@pytest.mark.parametrize('section, changes', [
    ('simulation', {
        'record_times': {
            'kind': 'explicit',
            'values': []
        }
    }),
    ('simulation', {
        'record_times': {
            'kind': 'geometric',
            't0': 0.0
        }
    }),
    ('simulation', {
        'horizon': 4.0
    }),
    ('simulation', {
        'fine_dt': 0.1
    }),
    ('simulation', {
        'x0': [1.0, 2.0]
    }),
    ('simulation', {
        'scheme': 'milstein'
    }),
    ('schedule', {
        'eta': 0.5
    }),
    ('schedule', {
        'A': 0.0
    }),
    ('schedule', {
        'gamma1': 0.0
    }),
    ('schedule', {
        'gamma1': 1e-3,
        'eta': 1.0
    }),
    ('noise', {
        'kind': 'gaussian_scaled',
        'c_zeta': -1.0
    }),
])
def test_experiment_config_from_config_error(tmp_path, section, changes):
    config_dict = _config_dict(tmp_path)
    config_dict.setdefault(section, {}).update(changes)
    with pytest.raises(ConfigError):
        ExperimentConfig.from_config(config_dict)


def test_experiment_config_unknown_potential_error(tmp_path):
    config_dict = _config_dict(tmp_path)
    config_dict['problem']['potential']['name'] = 'triple_well'
    with pytest.raises(ConfigError):
        ExperimentConfig.from_config(config_dict)


def test_experiment_config_unreachable_compared_eta_error(tmp_path):
    config_dict = _config_dict(tmp_path)
    config_dict['compare'] = {'etas': [1.0]}
    config_dict['schedule']['gamma1'] = 0.05
    cfg = ExperimentConfig.from_config(config_dict)
    with pytest.raises(ConfigError):
        cfg.with_scheme('euler', 1.0)


def test_experiment_config_run_name_correct(experiment_config):
    assert experiment_config.run_name == 'run-euler-eta0.6-seed0'
    assert experiment_config.with_scheme('continuous').run_name == \
        'run-continuous-seed0'
    assert experiment_config.with_scheme('euler', 0.75).run_name == \
        'run-euler-eta0.75-seed0'


def test_experiment_config_with_scheme_effective(experiment_config):
    derived = experiment_config.with_scheme('plateau', output_root='other')
    assert derived.scheme == 'plateau'
    assert derived.eta == experiment_config.eta
    assert derived.effective['simulation']['scheme'] == 'plateau'
    assert derived.effective['output']['root'] == 'other'
    assert experiment_config.effective['simulation']['scheme'] == 'euler'


def test_experiment_config_level_correct(experiment_config):
    assert experiment_config.level(4.0) == pytest.approx(
        AnnealSchedule(1.0).a_of_t(4.0))
    plateau_cfg = experiment_config.with_scheme('plateau')
    assert plateau_cfg.level(4.0) == pytest.approx(
        PlateauSchedule(1.0, 1.0).level_at(AnnealSchedule(1.0), 4.0))


def test_experiment_config_level_frozen(tmp_path):
    config_dict = _config_dict(tmp_path)
    config_dict['schedule']['frozen_a'] = 0.5
    cfg = ExperimentConfig.from_config(config_dict)
    assert cfg.level(100.0) == 0.5


def test_experiment_config_get_sim_spec_correct(experiment_config):
    spec = experiment_config.get_sim_spec()
    assert spec.steps is not None
    assert spec.plateau is None
    assert spec.record_times == _RECORD_TIMES
    np.testing.assert_array_equal(spec.x0, [1.0])
    continuous_spec = experiment_config.with_scheme(
        'continuous').get_sim_spec()
    assert continuous_spec.steps is None
    assert experiment_config.with_scheme(
        'plateau').get_sim_spec().plateau is not None


def test_run_experiment_correct(experiment_interactor, experiment_config):
    run_dir = experiment_interactor.run_experiment(experiment_config)
    assert run_dir.name == 'run-euler-eta0.6-seed0'
    for file_name in (TRACE_FILE_NAME, CONFIG_ECHO_FILE_NAME,
                      PLOT_DATA_FILE_NAME):
        assert (run_dir / file_name).is_file()
    assert not (run_dir / DIAGNOSTIC_FILE_NAME).exists()
    for index, t in enumerate(_RECORD_TIMES):
        samples = pd.read_csv(
            run_dir / SAMPLES_FILE_NAME_FORMAT.format(index=index, t=t))
        assert list(samples.columns) == ['x1']
        assert len(samples) == 200
    trace = load_trace(run_dir)
    assert list(trace.columns) == list(TRACE_COLUMNS)
    np.testing.assert_allclose(trace['t'], _RECORD_TIMES)
    assert np.all((trace['tv'] >= 0) & (trace['tv'] <= 2))
    assert np.all(trace['w1'] >= 0)
    assert np.all(trace['min_V'] <= trace['mean_V'])
    assert load_config_echo(run_dir) == experiment_config.effective
    assert (run_dir / PLOT_DATA_FILE_NAME).read_text().count(
        '# t ') == len(TRACE_COLUMNS) - 1


def test_run_experiment_close_record_times_distinct_samples(
        experiment_interactor, tmp_path):
    record_times = [1.0000001, 1.0000002, 2.0]
    cfg = ExperimentConfig.from_config(
        _config_dict(tmp_path, horizon=2.0, record_times={
            'kind': 'explicit',
            'values': record_times
        }))
    run_dir = experiment_interactor.run_experiment(cfg)
    assert len(list(run_dir.glob('samples_*.csv'))) == len(record_times)
    for index, t in enumerate(record_times):
        samples = pd.read_csv(
            run_dir / SAMPLES_FILE_NAME_FORMAT.format(index=index, t=t))
        assert len(samples) == 200


def test_run_experiment_reproducible(experiment_interactor, experiment_config,
                                     tmp_path):
    first = experiment_interactor.run_experiment(
        experiment_config.with_scheme('euler',
                                      output_root=str(tmp_path / 'first')))
    second = experiment_interactor.run_experiment(
        experiment_config.with_scheme('euler',
                                      output_root=str(tmp_path / 'second')))
    assert (first / TRACE_FILE_NAME).read_bytes() == \
        (second / TRACE_FILE_NAME).read_bytes()


@unittest.mock.patch.object(SimulationInteractor, 'simulate_euler_scheme',
                            side_effect=DivergenceError(
                                'trajectory diverged', trajectory=7))
def test_run_experiment_divergence_diagnostic(mocked_simulate,
                                              experiment_interactor,
                                              experiment_config):
    with pytest.raises(DivergenceError):
        experiment_interactor.run_experiment(experiment_config)
    run_dir = (pathlib.Path(experiment_config.output_root) /
               experiment_config.run_name)
    diagnostic = (run_dir / DIAGNOSTIC_FILE_NAME).read_text()
    assert diagnostic.startswith('DivergenceError')
    assert not (run_dir / TRACE_FILE_NAME).exists()
    assert (run_dir / CONFIG_ECHO_FILE_NAME).is_file()
    mocked_simulate.assert_called_once()


@unittest.mock.patch.object(SimulationInteractor, 'simulate_euler_scheme',
                            side_effect=KeyError)
def test_run_experiment_error(mocked_simulate, experiment_interactor,
                              experiment_config):
    with pytest.raises(ExperimentInteractorError):
        experiment_interactor.run_experiment(experiment_config)


def test_load_trace_error(tmp_path):
    with pytest.raises(ExperimentInteractorError):
        load_trace(tmp_path)


def test_load_config_echo_error(tmp_path):
    with pytest.raises(ExperimentInteractorError):
        load_config_echo(tmp_path)


def test_fit_rate_exact_power_law(experiment_interactor):
    times = np.array(_FIT_TIMES)
    trace = pd.DataFrame({'t': times, 'tv': 3 * times**-0.5})
    fit = experiment_interactor.fit_rate(trace, 'tv')
    assert fit.exponent == pytest.approx(0.5)
    assert fit.intercept == pytest.approx(np.log(3))
    assert fit.r_squared == pytest.approx(1.0)
    assert fit.window == (1.0, 64.0)


def test_fit_rate_constant_values(experiment_interactor):
    trace = pd.DataFrame({'t': _FIT_TIMES, 'tv': np.full(7, 0.2)})
    fit = experiment_interactor.fit_rate(trace, 'tv')
    assert fit.exponent == pytest.approx(0.0, abs=1e-12)
    assert fit.r_squared == 1.0


def test_fit_rate_noisy_power_law(experiment_interactor, rng):
    times = np.geomspace(1, 1000, 20)
    values = times**-1.0 * np.exp(0.05 * rng.standard_normal(20))
    fit = experiment_interactor.fit_rate(pd.DataFrame({
        't': times,
        'w1': values
    }), 'w1', window=(1.0, 1000.0))
    assert fit.exponent == pytest.approx(1.0, abs=0.05)
    assert fit.r_squared > 0.95


def test_fit_rate_ignores_non_finite_values(experiment_interactor):
    times = np.array([0.0] + _FIT_TIMES)
    values = np.concatenate([[np.nan], times[1:]**-1.0])
    fit = experiment_interactor.fit_rate(pd.DataFrame({
        't': times,
        'tv': values
    }), 'tv')
    assert fit.exponent == pytest.approx(1.0)


@pytest.mark.parametrize('window', [(1.0, 4.0), (0.0, 64.0), (8.0, 4.0)])
def test_fit_rate_window_error(experiment_interactor, window):
    times = np.array(_FIT_TIMES)
    with pytest.raises(ExperimentInteractorError):
        experiment_interactor.fit_rate(
            pd.DataFrame({
                't': times,
                'tv': times**-0.5
            }), 'tv', window)


def test_fit_rate_non_positive_values_error(experiment_interactor):
    values = np.array(_FIT_TIMES)**-0.5
    values[-1] = 0.0
    with pytest.raises(ExperimentInteractorError):
        experiment_interactor.fit_rate(
            pd.DataFrame({
                't': _FIT_TIMES,
                'tv': values
            }), 'tv')


def test_fit_rate_unknown_column_error(experiment_interactor):
    with pytest.raises(ExperimentInteractorError):
        experiment_interactor.fit_rate(
            pd.DataFrame({
                't': _FIT_TIMES,
                'tv': np.ones(7)
            }), 'w1')


def test_compare_schemes_correct(experiment_interactor, tmp_path):
    config_dict = _config_dict(tmp_path, horizon=2.0, record_times={
        'kind': 'explicit',
        'values': [0.5, 1.0, 2.0]
    }, fine_dt=1e-2)
    config_dict['compare'] = {'etas': [1.0, 0.75]}
    cfg = ExperimentConfig.from_config(config_dict)
    report = experiment_interactor.compare_schemes(cfg)
    assert report.directory == tmp_path / 'compare-seed0'
    assert (report.directory / COMPARISON_FILE_NAME).is_file()
    assert list(report.frame.columns) == [
        't', 'a_t', 'tv_euler_eta1', 'w1_euler_eta1', 'tv_euler_eta0.75',
        'w1_euler_eta0.75', 'tv_continuous', 'w1_continuous'
    ]
    np.testing.assert_allclose(report.frame['t'], [0.5, 1.0, 2.0])
    np.testing.assert_allclose(report.frame['a_t'],
                               AnnealSchedule(1.0).a_of_t([0.5, 1.0, 2.0]))
    for run_name in ('run-euler-eta1-seed0', 'run-euler-eta0.75-seed0',
                     'run-continuous-seed0'):
        assert (report.directory / run_name / TRACE_FILE_NAME).is_file()


def test_compare_schemes_unreachable_base_eta(experiment_interactor,
                                              tmp_path):
    config_dict = _config_dict(tmp_path, scheme='continuous', horizon=2.0,
                               record_times={
                                   'kind': 'explicit',
                                   'values': [1.0, 2.0]
                               }, fine_dt=1e-2)
    config_dict['schedule'].update({'gamma1': 0.05, 'eta': 1.0})
    config_dict['compare'] = {'etas': [0.75]}
    cfg = ExperimentConfig.from_config(config_dict)
    with pytest.raises(ConfigError):
        cfg.with_scheme('euler')
    report = experiment_interactor.compare_schemes(cfg)
    np.testing.assert_allclose(report.frame['a_t'],
                               AnnealSchedule(1.0).a_of_t([1.0, 2.0]))
    assert list(report.frame.columns)[2:] == [
        'tv_euler_eta0.75', 'w1_euler_eta0.75', 'tv_continuous',
        'w1_continuous'
    ]


def test_experiment_config_schedule_level_ignores_scheme(experiment_config):
    plateau_cfg = experiment_config.with_scheme('plateau')
    assert plateau_cfg.schedule_level(4.0) == pytest.approx(
        AnnealSchedule(1.0).a_of_t(4.0))
    assert plateau_cfg.schedule_level(4.0) != plateau_cfg.level(4.0)


def test_compare_schemes_unreachable_eta_error(experiment_interactor,
                                               tmp_path):
    config_dict = _config_dict(tmp_path)
    config_dict['compare'] = {'etas': [1.0]}
    config_dict['schedule']['gamma1'] = 0.05
    with pytest.raises(ConfigError):
        experiment_interactor.compare_schemes(
            ExperimentConfig.from_config(config_dict))


def test_gibbs_tv_sweep_correct(experiment_interactor, experiment_config):
    sweep = experiment_interactor.gibbs_tv_sweep(experiment_config, 2, 64, 4)
    assert sweep.path.is_file()
    assert sweep.path.parent.name == 'gibbs-tv'
    frame = sweep.frame
    assert list(frame['n']) == [2, 6, 20, 64]
    assert np.all(frame['a_next'] < frame['a_n'])
    assert np.all((frame['tv'] > 0) & (frame['tv'] <= 2))
    np.testing.assert_allclose(
        frame['scaled_tv'], frame['n'] * np.log(frame['n']) * frame['tv'])
    assert frame['tv'].is_monotonic_decreasing
    assert frame['scaled_tv'].max() < 10.0


@pytest.mark.parametrize('n_min, n_max, points', [(1, 10, 3), (5, 5, 3),
                                                  (2, 10, 1)])
def test_gibbs_tv_sweep_error(experiment_interactor, experiment_config, n_min,
                              n_max, points):
    with pytest.raises(ExperimentInteractorError):
        experiment_interactor.gibbs_tv_sweep(experiment_config, n_min, n_max,
                                             points)

#! /usr/bin/env python
"""Example usage of the Langevin annealing toolkit.

"""
import numpy as np

import langevin.annealing.api as la

potential = la.builtin_double_well(1, 1.0, 1.0, 4.0)
diffusion = la.get_diffusion('sine_diagonal', dim=1, base=2.0, amplitude=0.5)

# Example audit of the standing assumptions
try:
    report = la.audit_assumptions(potential, diffusion)
    print(report.to_frame().to_string(index=False))
except la.LangevinAnnealingError:
    # Handle exception
    raise

# Example Gibbs quantities
try:
    limit = la.limit_measure(potential)
    print('Limit weights: {}'.format(limit.weights))
    print('Well masses at a=0.3: {}'.format(
        la.well_masses(potential, 0.3, 0.5)))
except la.LangevinAnnealingError:
    # Handle exception
    raise

# Example annealed Euler simulation
try:
    spec = la.SimSpec(pot=potential, sigma=diffusion,
                      schedule=la.AnnealSchedule(2.0), x0=np.array([3.0]),
                      horizon=8.0, seed=0, record_times=[1.0, 2.0, 4.0, 8.0],
                      steps=la.PowerLawStepSequence(0.05, 0.55))
    result = la.simulate_euler_scheme(spec, 2000)
    for t, samples in zip(result.record_times, result.samples):
        estimate = la.tv_empirical_vs_density(
            la.EmpiricalMeasure(samples),
            la.GibbsMeasure(potential, la.a_of_t(spec.schedule, t)))
        print('t={:g} tv={:.4f} ± {:.4f}'.format(t, estimate.value,
                                                estimate.std_error))
except la.LangevinAnnealingError:
    # Handle exception
    raise

# Example configured experiment with a rate fit
try:
    cfg = la.load_experiment_config('langevin-annealing.yml',
                                    {'simulation.n_traj': 2000})
    run_dir = la.run_experiment(cfg)
    trace = la.load_trace(run_dir)
    fit = la.fit_rate(trace, 'tv')
    print('Fitted exponent: {:.3f} (r²={:.3f})'.format(fit.exponent,
                                                        fit.r_squared))
except la.LangevinAnnealingError:
    # Handle exception
    raise

import math

import numpy as np
import pytest

from diracmech.constraints import ConstraintSet
from diracmech.dynamics import (DiracFlow, GaugeFlow, IntegratorConfig, NewtonProjection,
                                PoissonFlow, constraint_drift, evolve,
                                gauge_orbit_closed_form, multiplier_from_gauge)
from diracmech.errors import DegeneracyError, NumericDomainError, UsageError
from diracmech.fields import constant_field, polynomial_field
from diracmech.models import KlauderModel, KRamp, RadialPotential
from diracmech.phase import ChartSpec

FLAT = ChartSpec(labels=("q1", "p1"), name="flat1d")


def cartesian_monitor(model):
    return ConstraintSet(model.cartesian_chart, (model.cartesian_generator,), ("C",))


# -- closed-form gauge orbit -----------------------------------------------------

def test_gauge_orbit_identity_at_zero():
    q, p = gauge_orbit_closed_form([1.0, -2.0], [0.5, 3.0], alpha=1.3, T=0.0)
    assert np.array_equal(q, [1.0, -2.0]) and np.array_equal(p, [0.5, 3.0])


def test_gauge_orbit_exponential_directions():
    q, p = gauge_orbit_closed_form([1.0, 0.0], [1.0, 0.0], alpha=1.0, T=1.0)
    assert q[0] == pytest.approx(math.e, rel=1e-15) and q[1] == 0.0
    assert p[0] == pytest.approx(math.e, rel=1e-15)
    q, p = gauge_orbit_closed_form([1.0, 0.0], [-1.0, 0.0], alpha=1.0, T=1.0)
    assert q[0] == pytest.approx(1.0 / math.e, rel=1e-14)
    assert p[0] == pytest.approx(-1.0 / math.e, rel=1e-14)


def test_gauge_orbit_rejects_zero_alpha():
    with pytest.raises(UsageError):
        gauge_orbit_closed_form([1.0], [1.0], alpha=0.0, T=1.0)


# -- gauge flow -------------------------------------------------------------------

def test_gauge_flow_matches_closed_form():
    model = KlauderModel(alpha=1.0, k=0.0)
    x0 = model.cartesian_chart.point([1.0, 0.0, 1.0, 0.0])
    traj = evolve(x0, GaugeFlow(model.cartesian_generator, 1.0),
                  IntegratorConfig(dt=1e-3, steps=1000), monitor=cartesian_monitor(model))
    q, p = gauge_orbit_closed_form([1.0, 0.0], [1.0, 0.0], 1.0, 1.0)
    assert np.max(np.abs(traj.states[-1] - np.concatenate([q, p]))) < 1e-8
    assert np.max(traj.residuals["C"]) < 1e-10


def test_gauge_flow_time_dependent_multiplier():
    # lambda(t) = cos t accumulates T = sin(1) by t = 1
    model = KlauderModel(alpha=1.0, k=0.0)
    x0 = model.cartesian_chart.point([0.8, -0.3, 0.8, 0.3])
    traj = evolve(x0, GaugeFlow(model.cartesian_generator, math.cos),
                  IntegratorConfig(dt=1e-3, steps=1000))
    q, p = gauge_orbit_closed_form([0.8, -0.3], [0.8, 0.3], 1.0, math.sin(1.0))
    assert np.max(np.abs(traj.states[-1] - np.concatenate([q, p]))) < 1e-8


def test_gauge_residual_scales_as_fourth_order():
    model = KlauderModel(alpha=1.0, k=0.0)
    x0 = model.cartesian_chart.point([1.3, -0.4, 0.9, 0.8])
    start = abs(model.cartesian_generator.value(x0))
    deviations = []
    for dt, steps in ((2e-2, 50), (1e-2, 100)):
        traj = evolve(x0, GaugeFlow(model.cartesian_generator, 1.0),
                      IntegratorConfig(dt=dt, steps=steps), monitor=cartesian_monitor(model))
        deviations.append(np.max(np.abs(traj.residuals["C"] - start)))
    assert deviations[0] / deviations[1] >= 15.0


# -- Dirac flow -------------------------------------------------------------------

def test_dirac_flow_circular_orbit():
    model = KlauderModel(alpha=1.0, k=1.0, potential=RadialPotential.harmonic())
    x0 = model.embed_reduced(phi=0.1, p_phi=1.0)
    traj = evolve(x0, DiracFlow(model.hamiltonian(), model.constraint_set),
                  IntegratorConfig(dt=1e-3, steps=2000))
    for column in (0, 2, 3):  # r, p_r, p_phi frozen
        assert np.max(np.abs(traj.states[:, column] - traj.states[0, column])) < 1e-10
    measured = (traj.states[-1, 1] - traj.states[0, 1]) / traj.times[-1]
    assert measured == pytest.approx(model.phi_rate(1.0), abs=1e-8)
    drift = constraint_drift(traj)
    assert drift["C"].max_residual < 1e-8 and drift["chi"].max_residual < 1e-8


def test_dirac_flow_requires_surface_start():
    model = KlauderModel(alpha=1.0, k=1.0)
    off = model.polar_chart.point([2.0, 0.0, 3.0, 1.0])
    with pytest.raises(UsageError, match="constraint surface"):
        evolve(off, DiracFlow(model.hamiltonian(), model.constraint_set),
               IntegratorConfig(dt=1e-3, steps=10))


def test_dirac_flow_with_ramped_gauge_parameter():
    # k(t) = k0 + k1 t drags the orbit radius along r*(t); the flow's explicit-time
    # correction keeps both constraints pinned
    model = KlauderModel(alpha=1.0, k=KRamp(1.0, 0.5), potential=RadialPotential.harmonic())
    x0 = model.embed_reduced(phi=0.0, p_phi=2.0)
    traj = evolve(x0, DiracFlow(model.hamiltonian(), model.constraint_set),
                  IntegratorConfig(dt=1e-3, steps=2000))
    drift = constraint_drift(traj)
    assert drift["chi"].max_residual < 1e-9
    assert drift["C"].max_residual < 1e-9
    expected_r = np.array([model.reduced_point(2.0, t)[0] for t in traj.times])
    assert np.max(np.abs(traj.states[:, 0] - expected_r)) < 1e-8  # non-circular orbit


def test_zero_hamiltonian_identity():
    zero = constant_field(FLAT, 0.0, name="H0")
    x0 = FLAT.point([1.0, 2.0])
    traj = evolve(x0, PoissonFlow(zero), IntegratorConfig(dt=0.1, steps=50))
    assert np.max(np.abs(traj.states - traj.states[0])) == 0.0


def test_zero_steps_single_row():
    h = polynomial_field(FLAT, [(0.5, (0, 2))], name="kinetic")
    traj = evolve(FLAT.point([1.0, 2.0]), PoissonFlow(h), IntegratorConfig(dt=0.1, steps=0))
    assert len(traj) == 1
    assert np.array_equal(traj.states[0], [1.0, 2.0])


def test_energy_conservation_long_run():
    h = polynomial_field(FLAT, [(0.5, (2, 0)), (0.5, (0, 2))], name="oscillator")
    traj = evolve(FLAT.point([1.0, 0.0]), PoissonFlow(h),
                  IntegratorConfig(dt=1e-3, steps=10000))
    values = traj.generator_values
    assert np.max(np.abs(values - values[0])) / max(1.0, abs(values[0])) < 1e-8


def test_blowup_detected():
    # H = -q p gives dp/dt = p: exponential escape past the 1e12 guard
    h = polynomial_field(FLAT, [(-1.0, (1, 1))], name="hyperbolic")
    x0 = FLAT.point([1.0, 10.0])
    with pytest.raises(NumericDomainError, match="blew up"):
        evolve(x0, PoissonFlow(h), IntegratorConfig(dt=0.5, steps=10000))


def test_newton_projection_restores_surface():
    model = KlauderModel(alpha=1.0, k=1.0, potential=RadialPotential.harmonic())
    x0 = model.embed_reduced(phi=0.0, p_phi=1.0)
    cfg = IntegratorConfig(dt=1e-2, steps=200, projection=NewtonProjection())
    traj = evolve(x0, DiracFlow(model.hamiltonian(), model.constraint_set), cfg)
    drift = constraint_drift(traj)
    assert max(s.max_residual for s in drift.values()) < 1e-11


def test_degeneracy_mid_run_keeps_partial_trajectory():
    # drive the radial pair toward the excluded origin: k(t) ramps down through 0
    # with p_phi = 0 the pairing matrix det -> 0 as r -> 0
    model = KlauderModel(alpha=1.0, k=KRamp(0.05, -1.0))
    chart = model.polar_chart
    x0 = model.embed_reduced(phi=0.0, p_phi=0.0)
    with pytest.raises(DegeneracyError) as err:
        evolve(x0, DiracFlow(model.hamiltonian(), model.constraint_set),
               IntegratorConfig(dt=1e-3, steps=2000))
    partial = err.value.partial_trajectory
    assert partial is not None and 1 <= len(partial) < 2001


# -- trajectory bookkeeping ---------------------------------------------------------

def test_trajectory_invariants():
    h = polynomial_field(FLAT, [(0.5, (0, 2))], name="free")
    traj = evolve(FLAT.point([0.0, 1.0]), PoissonFlow(h), IntegratorConfig(dt=0.1, steps=5))
    assert len(traj.times) == len(traj.states) == 6
    assert np.all(np.diff(traj.times) > 0)
    assert traj.final_point["q1"] == pytest.approx(0.5, abs=1e-12)


def test_constraint_drift_constant_trajectory():
    model = KlauderModel(alpha=1.0, k=1.0)
    x0 = model.embed_reduced(0.0, 1.0)
    traj = evolve(x0, PoissonFlow(constant_field(model.polar_chart, 0.0)),
                  IntegratorConfig(dt=0.1, steps=10), monitor=model.constraint_set)
    drift = constraint_drift(traj)
    assert drift["C"].max_residual < 1e-12
    assert abs(drift["C"].growth_rate) < 1e-12


# -- multiplier fixing -----------------------------------------------------------

def test_multiplier_examples():
    model = KlauderModel(alpha=1.0, k=1.0)
    chart = model.cartesian_chart
    x = chart.point([1.0, 0.0, 2.0, 0.0])
    assert multiplier_from_gauge(x, kdot=0.0, alpha=1.0) == 0.0
    assert multiplier_from_gauge(x, kdot=5.0, alpha=1.0) == pytest.approx(1.0)
    # on-surface point with r = 1: denominator 2 alpha^2 r^2 = 2
    x_surf = chart.point([1.0, 0.0, 1.0, 0.0])
    assert multiplier_from_gauge(x_surf, kdot=2.0, alpha=1.0) == pytest.approx(1.0)


def test_multiplier_degenerate_origin():
    chart = ChartSpec(labels=("q1", "q2", "p1", "p2"))
    with pytest.raises(DegeneracyError):
        multiplier_from_gauge(chart.point([0.0, 0.0, 0.0, 0.0]), kdot=1.0, alpha=1.0)


# -- config validation ---------------------------------------------------------------

def test_integrator_config_validation():
    with pytest.raises(UsageError):
        IntegratorConfig(dt=0.0, steps=5)
    with pytest.raises(UsageError):
        IntegratorConfig(dt=0.1, steps=-1)
    with pytest.raises(UsageError):
        IntegratorConfig(dt=0.1, steps=5, scheme="euler")


def test_dirac_flow_rejects_odd_or_empty_sets():
    model = KlauderModel(alpha=1.0, k=1.0)
    alone = ConstraintSet(model.polar_chart, (model.constraint,), ("C",))
    x0 = model.embed_reduced(0.0, 1.0)
    with pytest.raises(UsageError):
        evolve(x0, DiracFlow(model.hamiltonian(), alone), IntegratorConfig(dt=0.1, steps=1))

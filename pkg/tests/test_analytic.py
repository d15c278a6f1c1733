"""Closed-form motions against independent oracles (differences, quadrature, boosts)."""

import math

import numpy as np
import pytest
from scipy.integrate import simpson

from chronodyn.analytic import (
    CyclotronParams,
    OscDriftParams,
    UniformEParams,
    cyclotron_state,
    cyclotron_worldline,
    electric_proper_time,
    electric_time_map,
    magnetic_half_period_map,
    magnetic_period_map,
    osc_drift_period_map,
    osc_drift_state,
    osc_drift_worldline,
    simultaneity_difference,
    uniform_e_state,
    uniform_e_worldline,
)
from chronodyn.frames import Boost, lorentz_gamma


def _unit_omega_cyclotron(u0=0.3, alpha=0.0):
    # B' = gamma(u0) makes omega' = e*B'/(m0*gamma) exactly 1
    return CyclotronParams(u0_prime=u0, B_prime=lorentz_gamma(u0), alpha=alpha)


def _central_velocity_error(state_fn, t, h):
    """Max |dr/dt by central difference - closed-form u| at times t."""
    r_plus, _ = state_fn(t + h)
    r_minus, _ = state_fn(t - h)
    _, u = state_fn(t)
    return np.abs((r_plus - r_minus) / (2.0 * h) - u).max()


# -- cyclotron ---------------------------------------------------------------

def test_cyclotron_phase_zero():
    p = CyclotronParams(u0_prime=0.4, B_prime=1.0, alpha=0.0)
    r, u = cyclotron_state(p, 0.0)
    assert np.abs(u - [0.4, 0.0, 0.0]).max() < 1e-15
    assert np.abs(r - [0.0, 0.4 / p.omega_prime, 0.0]).max() < 1e-15


def test_cyclotron_speed_constant():
    p = CyclotronParams(u0_prime=0.37, B_prime=0.8, alpha=1.1)
    t = np.linspace(-5.0, 30.0, 400)
    _, u = cyclotron_state(p, t)
    assert np.abs(np.linalg.norm(u, axis=1) - 0.37).max() < 1e-15


def test_cyclotron_velocity_is_position_derivative():
    p = CyclotronParams(u0_prime=0.3, B_prime=1.2, alpha=0.5)
    t = np.linspace(0.0, 10.0, 50)
    errs = [_central_velocity_error(lambda tt: cyclotron_state(p, tt), t, h) for h in (1e-3, 5e-4)]
    assert errs[0] / errs[1] == pytest.approx(4.0, rel=0.05)  # 2nd-order stencil


def test_cyclotron_solves_equations_of_motion():
    # dp'/dt' = e u' x B' with relativistic momentum at constant gamma
    p = CyclotronParams(u0_prime=0.5, B_prime=0.7, alpha=0.3, m0=2.0, e=-1.5)
    t = np.linspace(0.0, 12.0, 200)
    _, u = cyclotron_state(p, t)
    gamma = lorentz_gamma(p.u0_prime)
    h = 1e-5
    _, u_plus = cyclotron_state(p, t + h)
    _, u_minus = cyclotron_state(p, t - h)
    dp = p.m0 * gamma * (u_plus - u_minus) / (2.0 * h)
    force = p.e * np.cross(u, [0.0, 0.0, p.B_prime])
    assert np.abs(dp - force).max() < 1e-8


def test_cyclotron_params_validation():
    with pytest.raises(ValueError):
        CyclotronParams(u0_prime=1.0, B_prime=1.0)
    with pytest.raises(ValueError):
        CyclotronParams(u0_prime=0.3, B_prime=0.0)
    with pytest.raises(ValueError):
        CyclotronParams(u0_prime=0.3, B_prime=1.0, e=0.0)


# -- simultaneity ------------------------------------------------------------

def test_simultaneity_zero_for_equal_phases():
    p = _unit_omega_cyclotron(alpha=0.4)
    b = Boost(0.7)
    t = np.linspace(0.0, 20.0, 64)
    assert np.abs(simultaneity_difference(p, p, b, t)).max() == 0.0


def test_simultaneity_envelope_hand_value():
    # v0 = 0.5, u0' = 0.3, omega' = 1, alpha2 - alpha1 = pi: amplitude 2*gamma*v0*u0'
    p1 = _unit_omega_cyclotron(u0=0.3, alpha=0.0)
    p2 = _unit_omega_cyclotron(u0=0.3, alpha=math.pi)
    b = Boost(0.5)
    t = np.linspace(0.0, 2.0 * math.pi, 1000)
    amp = np.abs(simultaneity_difference(p1, p2, b, t)).max()
    assert amp == pytest.approx(0.346410, abs=5e-6)
    assert amp == pytest.approx(2.0 * b.gamma * 0.5 * 0.3, rel=1e-5)


def test_simultaneity_matches_boosted_events():
    # oracle: boost both worldlines' equal-t' events and subtract the K times
    rng = np.random.default_rng(11)
    for _ in range(100):
        u0 = rng.uniform(0.05, 0.9)
        b_field = rng.uniform(0.2, 2.0) * rng.choice([-1.0, 1.0])
        a1, a2 = rng.uniform(0.0, 2.0 * math.pi, size=2)
        p1 = CyclotronParams(u0_prime=u0, B_prime=b_field, alpha=a1)
        p2 = CyclotronParams(u0_prime=u0, B_prime=b_field, alpha=a2)
        b = Boost(rng.uniform(-0.95, 0.95))
        t = rng.uniform(0.0, 20.0, size=8)
        r1, _ = cyclotron_state(p1, t)
        r2, _ = cyclotron_state(p2, t)
        t1 = b.gamma * (t + b.v0 * r1[:, 0])
        t2 = b.gamma * (t + b.v0 * r2[:, 0])
        closed = simultaneity_difference(p1, p2, b, t)
        assert np.abs((t2 - t1) - closed).max() < 1e-12


def test_simultaneity_rejects_mismatched_orbits():
    p1 = CyclotronParams(u0_prime=0.3, B_prime=1.0)
    p2 = CyclotronParams(u0_prime=0.4, B_prime=1.0)
    with pytest.raises(ValueError):
        simultaneity_difference(p1, p2, Boost(0.5), 0.0)


# -- period maps -------------------------------------------------------------

def test_magnetic_period_map_values():
    p = _unit_omega_cyclotron()
    t_prime, t_lab = magnetic_period_map(p, Boost(0.0))
    assert t_lab == t_prime == pytest.approx(2.0 * math.pi, abs=1e-14)
    _, t_lab = magnetic_period_map(p, Boost(0.6))
    assert t_lab == pytest.approx(2.5 * math.pi, abs=1e-13)


def test_magnetic_period_is_quadrature_of_g():
    # integral of gamma*(1 + v0*ux'(t')) over one period, any start time
    rng = np.random.default_rng(12)
    p = CyclotronParams(u0_prime=0.45, B_prime=1.3, alpha=0.9)
    b = Boost(0.7)
    t_p = p.period_prime
    for t0 in rng.uniform(0.0, t_p, size=10):
        t = np.linspace(t0, t0 + t_p, 4001)
        _, u = cyclotron_state(p, t)
        g = b.gamma * (1.0 + b.v0 * u[:, 0])
        integral = simpson(g, x=t)
        assert abs(integral - b.gamma * t_p) / (b.gamma * t_p) < 1e-9


def test_half_period_map_hand_values():
    p = _unit_omega_cyclotron(u0=0.3, alpha=0.0)
    b = Boost(0.5)
    t_p = p.period_prime
    # sine node: exactly half the full-period map
    assert magnetic_half_period_map(p, b, 0.0) == pytest.approx(
        b.gamma * t_p / 2.0, abs=1e-13
    )
    # sine crest (omega'*t0 = pi/2): reduced by (2/pi)*v0*u0'
    got = magnetic_half_period_map(p, b, math.pi / 2.0)
    expected = b.gamma * (t_p / 2.0) * (1.0 - (2.0 / math.pi) * 0.5 * 0.3)
    assert got == pytest.approx(expected, abs=1e-13)
    assert got != pytest.approx(b.gamma * t_p / 2.0, abs=1e-3)  # genuinely off T/2


def test_half_period_map_is_quadrature_of_g():
    p = CyclotronParams(u0_prime=0.35, B_prime=0.9, alpha=0.4)
    b = Boost(-0.6)
    t_p = p.period_prime
    for t0 in (0.0, 0.3 * t_p, 0.77 * t_p):
        t = np.linspace(t0, t0 + t_p / 2.0, 4001)
        _, u = cyclotron_state(p, t)
        g = b.gamma * (1.0 + b.v0 * u[:, 0])
        integral = simpson(g, x=t)
        assert abs(integral - magnetic_half_period_map(p, b, t0)) < 1e-9


# -- uniform electric field --------------------------------------------------

def test_uniform_e_starts_from_rest():
    p = UniformEParams(E_prime=np.array([0.5, 0.1, 0.0]))
    r, u = uniform_e_state(p, 0.0)
    assert np.abs(u).max() == 0.0
    assert np.abs(r - p.r0_prime).max() == 0.0


def test_uniform_e_speed_monotone_and_subluminal():
    p = UniformEParams(E_prime=np.array([1.0, 0.0, 0.0]))
    t = np.geomspace(1e-3, 1e6, 200)
    _, u = uniform_e_state(p, t)
    speeds = np.linalg.norm(u, axis=1)
    assert np.all(np.diff(speeds) > 0)
    assert np.all(speeds < 1.0)
    assert speeds[-1] > 1.0 - 1e-12


def test_uniform_e_velocity_is_position_derivative():
    p = UniformEParams(E_prime=np.array([0.8, -0.3, 0.2]), m0=1.7, e=-0.9)
    t = np.linspace(-3.0, 3.0, 40)
    errs = [_central_velocity_error(lambda tt: uniform_e_state(p, tt), t, h) for h in (1e-3, 5e-4)]
    assert errs[0] / errs[1] == pytest.approx(4.0, rel=0.05)


def test_electric_time_map_values_and_signs():
    p = UniformEParams(E_prime=np.array([1.0, 0.0, 0.0]))
    b = Boost(0.5)
    assert electric_time_map(p, b, 0.0) == pytest.approx(b.gamma, abs=1e-15)
    assert electric_time_map(p, b, 2.0) > b.gamma  # ax*t' > 0
    assert electric_time_map(p, b, -2.0) < b.gamma  # ax*t' < 0
    # a along +x, t' -> infinity: gamma*(1 + v0)
    assert electric_time_map(p, b, 1e9) == pytest.approx(b.gamma * 1.5, rel=1e-9)


def test_electric_proper_time_values():
    p = UniformEParams(E_prime=np.array([0.0, 2.0, 0.0]))
    rate0, tau0 = electric_proper_time(p, 0.0)
    assert rate0 == 1.0 and tau0 == 0.0
    # |a|*t' = 1: tau = asinh(1)/|a|
    rate, tau = electric_proper_time(p, 1.0 / p.a_mag)
    assert tau == pytest.approx(0.881374 / p.a_mag, abs=1e-6)
    assert rate < 1.0


def test_electric_proper_time_matches_quadrature():
    p = UniformEParams(E_prime=np.array([0.6, 0.3, 0.0]))
    t = np.linspace(0.0, 5.0, 4001)
    rate, tau = electric_proper_time(p, t)
    tau_num = np.concatenate(
        [[0.0], [simpson(rate[: i + 1], x=t[: i + 1]) for i in range(1, t.size)]]
    )
    assert np.abs(tau_num - tau).max() < 1e-10


# -- oscillatory drift -------------------------------------------------------

def test_osc_drift_state_values():
    p = OscDriftParams(
        a_prime=np.array([0.2, 0.0, 0.1]),
        omega_prime=1.5,
        u0_prime=np.array([0.1, 0.2, 0.0]),
    )
    _, u = osc_drift_state(p, 0.0)
    assert np.abs(u - (p.a_prime * 1.5 + p.u0_prime)).max() < 1e-15
    r, _ = osc_drift_state(p, math.pi / 1.5)  # omega'*t' = pi
    assert np.abs(r - p.u0_prime * (math.pi / 1.5)).max() < 1e-15


def test_osc_drift_velocity_is_position_derivative():
    p = OscDriftParams(
        a_prime=np.array([0.15, 0.1, 0.0]),
        omega_prime=2.0,
        u0_prime=np.array([0.2, 0.0, 0.1]),
    )
    t = np.linspace(0.0, 8.0, 40)
    errs = [_central_velocity_error(lambda tt: osc_drift_state(p, tt), t, h) for h in (1e-3, 5e-4)]
    assert errs[0] / errs[1] == pytest.approx(4.0, rel=0.05)


def test_osc_drift_rejects_superluminal():
    with pytest.raises(ValueError):
        OscDriftParams(
            a_prime=np.array([0.5, 0.0, 0.0]),
            omega_prime=2.0,
            u0_prime=np.array([0.3, 0.0, 0.0]),
        )


def test_osc_drift_period_map_values():
    p = OscDriftParams(a_prime=np.array([0.1, 0.0, 0.0]), omega_prime=1.0)
    b = Boost(0.6)
    t_prime, t_lab = osc_drift_period_map(p, b)
    assert t_lab == pytest.approx(b.gamma * t_prime, abs=1e-13)  # magnetic law recovered
    p2 = OscDriftParams(
        a_prime=np.array([0.1, 0.0, 0.0]),
        omega_prime=1.0,
        u0_prime=np.array([0.2, 0.0, 0.0]),
    )
    b2 = Boost(0.5)
    _, t_lab2 = osc_drift_period_map(p2, b2)
    assert t_lab2 == pytest.approx(b2.gamma * 1.1 * t_prime, abs=1e-13)


def test_osc_drift_period_is_quadrature_of_g():
    p = OscDriftParams(
        a_prime=np.array([0.15, 0.05, 0.0]),
        omega_prime=0.8,
        u0_prime=np.array([-0.25, 0.1, 0.0]),
    )
    b = Boost(0.65)
    t_p, t_lab = osc_drift_period_map(p, b)
    t = np.linspace(0.0, t_p, 4001)
    _, u = osc_drift_state(p, t)
    g = b.gamma * (1.0 + b.v0 * u[:, 0])
    assert abs(simpson(g, x=t) - t_lab) / t_lab < 1e-9


# -- worldline samplers ------------------------------------------------------

def test_worldline_samplers_consistent_with_state():
    pc = CyclotronParams(u0_prime=0.3, B_prime=1.0)
    w = cyclotron_worldline(pc, 0.0, 5.0, 51)
    r, u = cyclotron_state(pc, w.t)
    assert np.array_equal(w.r, r) and np.array_equal(w.u, u)

    pe = UniformEParams(E_prime=np.array([1.0, 0.0, 0.0]))
    w = uniform_e_worldline(pe, -1.0, 1.0, 21)
    r, u = uniform_e_state(pe, w.t)
    assert np.array_equal(w.r, r) and np.array_equal(w.u, u)

    po = OscDriftParams(a_prime=np.array([0.1, 0.0, 0.0]), omega_prime=1.0)
    w = osc_drift_worldline(po, 0.0, 6.0, 61)
    r, u = osc_drift_state(po, w.t)
    assert np.array_equal(w.r, r) and np.array_equal(w.u, u)

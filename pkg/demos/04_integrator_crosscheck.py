"""The relativistic integrator against the closed forms, plus energy audits.

Fixed-step RK4 advances the momentum form of the equations of motion; here
it reproduces the cyclotron circle and the hyperbolic electric-field motion
to integrator accuracy, shows textbook 4th-order convergence, and keeps the
energy-plus-potential audit flat.  The Boris pusher trades accuracy for
exact magnetic energy behavior.

Run:  python3 demos/04_integrator_crosscheck.py
"""

import math

import numpy as np

from chronodyn.analytic import (
    CyclotronParams,
    UniformEParams,
    cyclotron_state,
    uniform_e_state,
)
from chronodyn.dynamics import (
    FieldConfig,
    IntegratorConfig,
    ParticleState,
    energy_audit,
    integrate,
)

p = CyclotronParams(u0_prime=0.3, B_prime=1.0)
f_b = FieldConfig(E=np.zeros(3), B=np.array([0.0, 0.0, 1.0]))
r0, u0 = cyclotron_state(p, 0.0)
s0 = ParticleState(t=0.0, r=r0, u=u0)
t_p = p.period_prime

print("RK4 versus the cyclotron closed form, one period:")
for n in (250, 500, 1000):
    w = integrate(s0, f_b, IntegratorConfig(dt=t_p / n, n_steps=n))
    r_exact, _ = cyclotron_state(p, w.t)
    print(f"  {n:5d} steps: max position error = {np.abs(w.r - r_exact).max():.3e}")
errs = []
for n in (200, 400):
    w = integrate(s0, f_b, IntegratorConfig(dt=t_p / n, n_steps=n))
    r_exact, _ = cyclotron_state(p, w.t[-1])
    errs.append(np.abs(w.r[-1] - r_exact).max())
print(f"  convergence order from step halving: {math.log2(errs[0] / errs[1]):.2f}")
print()

pe = UniformEParams(E_prime=np.array([1.0, 0.0, 0.0]))
f_e = FieldConfig(E=pe.E_prime, B=np.zeros(3))
rest = ParticleState(t=0.0, r=np.zeros(3), u=np.zeros(3))
w = integrate(rest, f_e, IntegratorConfig(dt=3e-3, n_steps=1000))
r_exact, u_exact = uniform_e_state(pe, w.t)
print("RK4 versus the electric-field closed form, |a|t' in [0, 3]:")
print(f"  max position error = {np.abs(w.r - r_exact).max():.3e}")
print(f"  max velocity error = {np.abs(w.u - u_exact).max():.3e}")
audit = energy_audit(w, f_e, m0=1.0, e=1.0)
print(f"  energy + potential drift (relative): {audit.max_relative_drift:.3e}")
print()

print("energy drift shrinks 16x per step halving (4th-order scheme):")
prev = None
for dt, n in ((0.03, 100), (0.015, 200), (0.0075, 400)):
    w = integrate(rest, f_e, IntegratorConfig(dt=dt, n_steps=n))
    d = energy_audit(w, f_e, m0=1.0, e=1.0).max_relative_drift
    note = f"   ratio {prev / d:5.1f}" if prev else ""
    print(f"  dt = {dt:7.4f}: drift = {d:.3e}{note}")
    prev = d
print()

w = integrate(s0, f_b, IntegratorConfig(method="boris", dt=t_p / 500, n_steps=10 * 500))
audit = energy_audit(w, f_b, m0=1.0, e=1.0)
print("Boris pusher, pure magnetic field, ten periods:")
print(f"  energy drift (relative): {audit.max_relative_drift:.3e}  (rotation preserves |p|)")

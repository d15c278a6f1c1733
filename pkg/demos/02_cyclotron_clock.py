"""An ideal circular-motion clock in K' runs irregularly as seen from K.

A charge circling in a homogeneous magnetic field passes equal arcs in equal
K'-times: a perfect clock.  Watched from K, those equal ticks map to
intervals g(t') dt' that oscillate over the orbit; whole periods still map
uniformly (T = gamma * T'), but half periods depend on where the count
starts, and two orbiting particles' simultaneous events trade time order
once per half turn.

Run:  python3 demos/02_cyclotron_clock.py
"""

import numpy as np

from chronodyn import Boost
from chronodyn.analytic import (
    CyclotronParams,
    cyclotron_worldline,
    magnetic_half_period_map,
    magnetic_period_map,
    simultaneity_difference,
)
from chronodyn.chronometry import (
    period_map_numeric,
    simultaneity_series,
    time_map_kinematic,
)

b = Boost(0.6)
p = CyclotronParams(u0_prime=0.3, B_prime=1.0)
t_p = p.period_prime
print(f"orbit: speed {p.u0_prime}, omega' = {p.omega_prime:.6f}, T' = {t_p:.6f}")
print(f"boost: v0 = {b.v0}, gamma = {b.gamma}")
print()

w = cyclotron_worldline(p, 0.0, 2.0 * t_p, 4001)
tm = time_map_kinematic(w, b)
print(f"g(t') along the orbit swings between {tm.g.min():.6f} and {tm.g.max():.6f}")
print(f"  (gamma*(1 - v0*u0') = {b.gamma * (1 - 0.6 * 0.3):.6f},"
      f" gamma*(1 + v0*u0') = {b.gamma * (1 + 0.6 * 0.3):.6f})")
print()

_, t_lab = magnetic_period_map(p, b)
print("whole periods map uniformly:")
for t0 in (0.0, 0.25 * t_p, 0.8 * t_p):
    num = period_map_numeric(w, b, t_p, t0, window=1.0)
    print(f"  start {t0:8.4f}: integral of g over one period = {num:.12f}"
          f"  (gamma*T' = {t_lab:.12f})")
print()

print("half periods do not: the K-interval depends on the start phase")
for t0 in np.linspace(0.0, t_p, 5, endpoint=False):
    num = period_map_numeric(w, b, t_p, float(t0), window=0.5)
    closed = magnetic_half_period_map(p, b, float(t0))
    print(f"  start {t0:8.4f}: Delta_t = {num:.9f}   closed form {closed:.9f}")
print(f"  (T/2 = {t_lab / 2:.9f} for comparison)")
print()

p2 = CyclotronParams(u0_prime=0.3, B_prime=1.0, alpha=np.pi / 2)
w2 = cyclotron_worldline(p2, 0.0, 2.0 * t_p, 4001)
series = simultaneity_series(w, w2, b)
closed = simultaneity_difference(p, p2, b, series[:, 0])
signs = np.sign(series[:, 1])
flips = int(np.sum(signs[:-1] * signs[1:] < 0))
print("two orbits, phases 0 and pi/2: equal-t' events split in K by t2 - t1")
print(f"  envelope: {np.abs(series[:, 1]).max():.6f}")
print(f"  closed-form check, max deviation: {np.abs(series[:, 1] - closed).max():.3e}")
print(f"  time-order reversals over two periods: {flips}")

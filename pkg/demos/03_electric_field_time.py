"""Time course in a homogeneous electric field: direction matters.

A charge released from rest runs up a hyperbolic velocity law, approaching
light speed but never reaching it.  The K-frame time map exceeds the bare
kinematic factor gamma exactly when the field's pull along the boost axis
and the elapsed K'-time have the same sign, and the particle's own proper
time crawls to a halt as the speed saturates.

Run:  python3 demos/03_electric_field_time.py
"""

import numpy as np

from chronodyn import Boost
from chronodyn.analytic import (
    UniformEParams,
    electric_proper_time,
    electric_time_map,
    uniform_e_state,
)

b = Boost(0.5)
p = UniformEParams(E_prime=np.array([1.0, 0.0, 0.0]))
print(f"field along +x, |a| = e|E'|/m0 = {p.a_mag}, boost v0 = {b.v0} (gamma = {b.gamma:.6f})")
print()

print("hyperbolic velocity law u'(t') = a t'/sqrt(1 + a^2 t'^2):")
for t in (0.0, 0.5, 1.0, 3.0, 10.0, 100.0):
    _, u = uniform_e_state(p, t)
    print(f"  t' = {t:7.1f}: |u'| = {np.linalg.norm(u):.9f}")
print()

print("time map g = dt/dt' versus the kinematic gamma:")
for t in (-3.0, -1.0, 0.0, 1.0, 3.0):
    g = electric_time_map(p, b, t)
    rel = ">" if g > b.gamma else ("<" if g < b.gamma else "=")
    print(f"  t' = {t:+.1f}: g = {g:.6f}  {rel} gamma  (ax*t' = {p.a[0] * t:+.1f})")
print(f"  late-time limit: g -> gamma*(1 + v0) = {b.gamma * 1.5:.6f};"
      f" at t' = 1e6, g = {electric_time_map(p, b, 1e6):.6f}")
print()

print("proper time stalls: tau(t') = asinh(|a| t')/|a|")
for t in (1.0, 10.0, 100.0, 1000.0):
    rate, tau = electric_proper_time(p, t)
    print(f"  t' = {t:7.1f}: tau = {tau:9.4f}   dtau/dt' = {rate:.6f}")

"""How the course of time maps between two inertial frames along a worldline.

A clock moving with a particle ticks dt' in the frame K'; the same two ticks
are separated by dt = g * dt' in the frame K, and g depends on the
particle's velocity, not just on the frames' relative speed v0.  This demo
walks the basic algebra: the Lorentz factor, the local time-course factor,
the velocity at which both frames agree, and the reciprocity that keeps the
two directions consistent.

Run:  python3 demos/01_time_course_basics.py
"""

import numpy as np

from chronodyn import (
    Boost,
    crossover_velocity,
    inverse_kinematic_g,
    kinematic_g,
    lorentz_gamma,
    velocity_addition_x,
)

v0 = 0.6
b = Boost(v0)
print(f"frames K and K' in standard configuration, v0 = {v0}")
print(f"gamma = {b.gamma:.6f}")
print()

print("time-course factor g = dt/dt' for a few K'-velocities along x:")
for ux in (-0.9, -1.0 / 3.0, 0.0, 0.5, 0.9):
    g = kinematic_g(ux, b)
    note = ""
    if abs(g - 1.0) < 1e-12:
        note = "   <- clocks agree"
    elif g > b.gamma:
        note = "   (faster than the kinematic gamma)"
    print(f"  ux' = {ux:+.4f}: g = {g:.6f}{note}")
print()

u_star = crossover_velocity(v0)
print(f"crossover velocity u* = (sqrt(1 - v0^2) - 1)/v0 = {u_star:+.6f}")
print(f"  g at u*               = {kinematic_g(u_star, b):.15f}")
print(f"  K-frame mirror: g' at ux = -u* is {inverse_kinematic_g(-u_star, b):.15f}")
print()

print("reciprocity: gamma^2 * (1 + v0*ux') * (1 - v0*ux) = 1 with ux from the")
print("velocity addition rule, for random draws:")
rng = np.random.default_rng(0)
worst = 0.0
for _ in range(100_000):
    vv = rng.uniform(-0.99, 0.99)
    uxp = rng.uniform(-1.0, 1.0)
    ux = velocity_addition_x(uxp, vv)
    g2 = lorentz_gamma(vv) ** 2
    worst = max(worst, abs(g2 * (1.0 + vv * uxp) * (1.0 - vv * ux) - 1.0))
print(f"  worst defect over 1e5 draws: {worst:.3e}")

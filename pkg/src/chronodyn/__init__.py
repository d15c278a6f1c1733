"""chronodyn: frame chronometry along particle worldlines, in natural units.

The package computes how the course of time maps between two inertial
frames along a moving particle's trajectory, dt = g(t') dt', by three
independent routes (coordinate kinematics, velocity ratio, 4-force ratio),
provides the closed-form motions that make the map exactly solvable
(cyclotron, uniform electric field, oscillatory drift), a relativistic
fixed-step integrator to cross-check them, and a slow-motion perturbation
split that isolates the extra force attributable to the changed course of
time.

Quick start::

    import numpy as np
    from chronodyn import Boost, analytic, chronometry

    b = Boost(0.6)
    p = analytic.CyclotronParams(u0_prime=0.3, B_prime=1.0)
    w = analytic.cyclotron_worldline(p, 0.0, 2 * p.period_prime, 2001)
    tm = chronometry.time_map_kinematic(w, b)   # g(t') along the orbit

Everything is pure and immutable after construction; concurrent use is
unrestricted.
"""

from . import analytic, chronometry, dynamics, frames, perturbation, scenarios
from .frames import (
    Boost,
    Event,
    Worldline,
    boost_event,
    boost_worldline,
    crossover_velocity,
    inverse_kinematic_g,
    kinematic_g,
    lorentz_gamma,
    proper_time_rate,
    velocity_addition_x,
    velocity_boost,
)

__version__ = "0.1.0"

__all__ = [
    "analytic",
    "chronometry",
    "dynamics",
    "frames",
    "perturbation",
    "scenarios",
    "Boost",
    "Event",
    "Worldline",
    "boost_event",
    "boost_worldline",
    "crossover_velocity",
    "inverse_kinematic_g",
    "kinematic_g",
    "lorentz_gamma",
    "proper_time_rate",
    "velocity_addition_x",
    "velocity_boost",
]

"""One time-course map, three independent derivations.

The ratio dt/dt' along a worldline can be computed from the coordinate
transformation (kinematic), from the two frames' speeds (velocity ratio),
or from the 4-force: boost the K'-frame force components to K and divide by
the K-frame force on the boosted state.  The third route also checks that
every non-degenerate force component gives the same ratio.

Run:  python3 demos/05_three_route_time_map.py
"""

import numpy as np

from chronodyn import Boost
from chronodyn.analytic import CyclotronParams, UniformEParams, cyclotron_worldline, uniform_e_worldline
from chronodyn.chronometry import (
    index_independence_report,
    time_map_dynamic,
    time_map_kinematic,
    time_map_ratio,
)
from chronodyn.dynamics import FieldConfig, IntegratorConfig, ParticleState, integrate

b = Boost(0.5)

cases = []
p_cyc = CyclotronParams(u0_prime=0.3, B_prime=1.0, alpha=0.3)
cases.append(
    (
        "cyclotron orbit",
        cyclotron_worldline(p_cyc, 0.0, p_cyc.period_prime, 2001),
        FieldConfig(E=np.zeros(3), B=np.array([0.0, 0.0, 1.0])),
    )
)
p_e = UniformEParams(E_prime=np.array([0.6, 0.2, 0.0]))
cases.append(
    (
        "uniform electric field",
        uniform_e_worldline(p_e, -2.0, 2.0, 2001),
        FieldConfig(E=p_e.E_prime, B=np.zeros(3)),
    )
)
f_mix = FieldConfig(E=np.array([0.2, -0.1, 0.3]), B=np.array([0.4, 0.8, -0.2]))
s0 = ParticleState(t=0.0, r=np.zeros(3), u=np.array([0.2, -0.1, 0.15]))
cases.append(
    (
        "integrated E+B motion",
        integrate(s0, f_mix, IntegratorConfig(dt=2e-3, n_steps=2000)),
        f_mix,
    )
)

for label, w, f in cases:
    g_kin = time_map_kinematic(w, b).g
    g_rat = time_map_ratio(w, b).g
    g_dyn = time_map_dynamic(w, f, b).g
    report = index_independence_report(w, f, b, threshold=1e-3)
    print(f"{label} ({len(w)} samples):")
    print(f"  g range                      [{g_kin.min():.6f}, {g_kin.max():.6f}]")
    print(f"  |kinematic - ratio|   max    {np.abs(g_kin - g_rat).max():.3e}")
    print(f"  |kinematic - dynamic| max    {np.abs(g_kin - g_dyn).max():.3e}")
    print(f"  force-component spread max   {report.max_spread:.3e}"
          f"   (components in play: up to {report.n_defined.max()})")
    print()

print("a free particle has no 4-force to divide by:")
from chronodyn.chronometry import DegenerateForceError
from chronodyn.frames import Worldline

t = np.linspace(0.0, 1.0, 11)
free = Worldline(frame_tag="Kprime", t=t, r=np.outer(t, [0.3, 0, 0]),
                 u=np.tile([0.3, 0.0, 0.0], (11, 1)))
try:
    time_map_dynamic(free, FieldConfig(E=np.zeros(3), B=np.zeros(3)), b)
except DegenerateForceError as exc:
    print(f"  DegenerateForceError: {exc}")

"""Separating the extra force tied to the changed course of time.

In the slow-motion regime the dynamics splits into a Newtonian zero order
plus a linear correction whose right-hand side is the explicit "time
force".  The correction equation is homogeneous, so its magnitude rides on
the initial perturbation (naturally proportional to the boost speed v0);
the first-order expansion's own error then shrinks quadratically as v0
drops, and vanishes identically for a linear force.

Run:  python3 demos/06_time_force.py
"""

import math

import numpy as np

from chronodyn.perturbation import (
    ForceLaw,
    expansion_residual,
    residual_sweep,
    solve_perturbation,
)

k, eps, m0 = 1.0, 0.5, 1.0
anharmonic = ForceLaw(
    evaluate=lambda r, u, t: -k * r - eps * float(r @ r) * r,
    jac_r=lambda r, u, t: -(k + eps * float(r @ r)) * np.eye(3)
    - 2.0 * eps * np.outer(r, r),
    jac_u=lambda r, u, t: np.zeros((3, 3)),
)

span = (0.0, 4.0 * math.pi)
v0 = 0.002
run = solve_perturbation(
    anharmonic, [1.0, 0.0, 0.0], [0.0, 0.0, 0.0], m0, span, 2e-3, v0,
    r1_0=[v0, 0.0, 0.0],
)
print(f"anharmonic oscillator (k = {k}, eps = {eps}), v0 = {v0}, seed r1(0) = v0")
print(f"  zero-order amplitude      {np.abs(run.zero_order.r).max():.6f}")
print(f"  correction amplitude      {np.abs(run.correction.r).max():.6f}")
print(f"  time-force amplitude      {np.abs(run.time_force).max():.6f}")
print(f"  expansion residual        {expansion_residual(anharmonic, run):.3e}")
print()

print("residual versus boost speed (seed scales with v0):")
residuals, exponent = residual_sweep(
    anharmonic, [1.0, 0.0, 0.0], [0.0, 0.0, 0.0], m0, span, 2e-3,
    [0.001, 0.002, 0.004],
)
for v, r in zip([0.001, 0.002, 0.004], residuals):
    print(f"  v0 = {v:.3f}: residual = {r:.3e}")
print(f"  fitted scaling exponent: {exponent:.2f}  (quadratic: the expansion error)")
print()

harmonic = ForceLaw(
    evaluate=lambda r, u, t: -k * r,
    jac_r=lambda r, u, t: -k * np.eye(3),
    jac_u=lambda r, u, t: np.zeros((3, 3)),
)
run_h = solve_perturbation(
    harmonic, [1.0, 0.0, 0.0], [0.0, 0.0, 0.0], m0, span, 2e-3, 0.004,
    r1_0=[0.004, 0.0, 0.0],
)
print("for a linear force the first-order split is exact:")
print(f"  harmonic residual at v0 = 0.004: {expansion_residual(harmonic, run_h):.3e}")
print()

zero_seed = solve_perturbation(
    harmonic, [1.0, 0.0, 0.0], [0.0, 0.0, 0.0], m0, span, 2e-3, 0.004
)
print("and with no initial perturbation the correction never wakes up:")
print(f"  max |r1| = {np.abs(zero_seed.correction.r).max():.1e},"
      f"  max |time force| = {np.abs(zero_seed.time_force).max():.1e}")

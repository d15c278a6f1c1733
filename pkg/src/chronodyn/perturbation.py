"""Slow-motion split of the dynamics into a Newtonian zero order plus a
linear correction attributed to the frame-dependent course of time.

For speeds well below light speed the primed-frame equation of motion,
re-expressed in the unprimed time via t' = t - v0*x' and truncated at first
order, separates into

    zero order:   m0 * d^2 r0/dt^2 = F(r0, u0, t)
    correction:   m0 * d^2 r1/dt^2 = (r1 . grad_r) F + (u1 . grad_u) F,

with the gradients evaluated along the zero-order trajectory.  The
correction equation is homogeneous: after the zero-order equation is used,
the explicit -v0*x' terms of the expansion cancel, so a nonzero r1 exists
only for a nonzero initial perturbation, which this module takes as an
explicit input (its natural scale is proportional to v0).  The right-hand
side of the correction equation is the extra "time force" the split
isolates.

Everything here is Newtonian by construction (the expansion regime); the
relativistic integrator lives in :mod:`chronodyn.dynamics` and is
deliberately not reused.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

__all__ = [
    "ForceLaw",
    "Trajectory",
    "PerturbationRun",
    "zero_order_solve",
    "force_jacobians",
    "correction_solve",
    "time_force",
    "expansion_residual",
    "solve_perturbation",
    "residual_sweep",
    "fit_power_law",
]

Vec3Fn = Callable[[np.ndarray, np.ndarray, float], np.ndarray]


@dataclass(frozen=True)
class ForceLaw:
    """A force field F(r, u, t) with optional analytic Jacobians.

    ``jac_r`` and ``jac_u`` return the 3x3 matrices dF_i/dr_j and
    dF_i/du_j.  When both are supplied the constructor spot-checks them
    against central finite differences at ``probe`` (default: the origin at
    rest, t = 0) and rejects disagreement beyond 1e-6 relative.  Evaluators
    must be pure; the module never serializes calls.
    """

    evaluate: Vec3Fn
    jac_r: Callable[[np.ndarray, np.ndarray, float], np.ndarray] | None = None
    jac_u: Callable[[np.ndarray, np.ndarray, float], np.ndarray] | None = None
    probe: tuple | None = None

    def __post_init__(self):
        if (self.jac_r is None) != (self.jac_u is None):
            raise ValueError("supply both analytic Jacobians or neither")
        if self.jac_r is not None:
            if self.probe is not None:
                r, u, t = self.probe
                r, u = np.asarray(r, dtype=float), np.asarray(u, dtype=float)
            else:
                r, u, t = np.zeros(3), np.zeros(3), 0.0
            jr_fd, ju_fd = _fd_jacobians(self.evaluate, r, u, t)
            jr, ju = self.jac_r(r, u, t), self.jac_u(r, u, t)
            for name, analytic, fd in (("jac_r", jr, jr_fd), ("jac_u", ju, ju_fd)):
                scale = max(float(np.abs(analytic).max()), 1.0)
                err = float(np.abs(analytic - fd).max()) / scale
                if not err < 1e-6:
                    raise ValueError(
                        f"analytic {name} disagrees with finite differences at the "
                        f"probe point (relative error {err:.3e})"
                    )

    def __call__(self, r: np.ndarray, u: np.ndarray, t: float) -> np.ndarray:
        F = np.asarray(self.evaluate(r, u, t), dtype=float)
        if F.shape != (3,) or not np.all(np.isfinite(F)):
            raise ValueError(f"force evaluator returned a bad value: {F}")
        return F


@dataclass(frozen=True)
class Trajectory:
    """A sampled Newtonian trajectory: times (n,), positions and velocities (n, 3)."""

    t: np.ndarray
    r: np.ndarray
    u: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.t, dtype=float)
        r = np.asarray(self.r, dtype=float)
        u = np.asarray(self.u, dtype=float)
        n = t.shape[0]
        if t.ndim != 1 or r.shape != (n, 3) or u.shape != (n, 3):
            raise ValueError("inconsistent trajectory shapes")
        for a in (t, r, u):
            a.flags.writeable = False
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "u", u)

    def __len__(self) -> int:
        return self.t.shape[0]


@dataclass(frozen=True)
class PerturbationRun:
    """Zero-order trajectory, correction, and the extra-force series.

    ``time_force`` holds the correction equation's right-hand side sampled
    along the run: the explicit force attributed to the altered course of
    time.
    """

    zero_order: Trajectory
    correction: Trajectory
    v0: float
    m0: float
    time_force: np.ndarray


def _fd_step(x: np.ndarray, h: float | None) -> np.ndarray:
    if h is not None:
        return np.full(3, h)
    return np.maximum(1e-6, 1e-6 * np.abs(x))


def _fd_jacobians(force: Vec3Fn, r, u, t, h: float | None = None):
    hr = _fd_step(r, h)
    hu = _fd_step(u, h)
    jr = np.empty((3, 3))
    ju = np.empty((3, 3))
    for j in range(3):
        dr = np.zeros(3)
        dr[j] = hr[j]
        jr[:, j] = (force(r + dr, u, t) - force(r - dr, u, t)) / (2.0 * hr[j])
        du = np.zeros(3)
        du[j] = hu[j]
        ju[:, j] = (force(r, u + du, t) - force(r, u - du, t)) / (2.0 * hu[j])
    return jr, ju


def force_jacobians(f: ForceLaw, at: tuple, h: float | None = None):
    """Jacobians (dF/dr, dF/du) at a phase-space point ``at`` = (r, u, t).

    Uses the force law's analytic Jacobians when present, otherwise central
    differences with per-component step max(1e-6, 1e-6*|component|); pass
    ``h`` to override the step (the truncation error is 2nd order in it).
    """
    r, u, t = at
    r = np.asarray(r, dtype=float)
    u = np.asarray(u, dtype=float)
    if f.jac_r is not None and h is None:
        jr = np.asarray(f.jac_r(r, u, t), dtype=float)
        ju = np.asarray(f.jac_u(r, u, t), dtype=float)
    else:
        jr, ju = _fd_jacobians(f, r, u, t, h)
    if not (np.all(np.isfinite(jr)) and np.all(np.isfinite(ju))):
        raise ValueError("non-finite force Jacobian")
    return jr, ju


def _rk4(deriv, y0: np.ndarray, t0: float, dt: float, n_steps: int) -> np.ndarray:
    out = np.empty((n_steps + 1, y0.shape[0]))
    out[0] = y0
    y = y0
    for i in range(n_steps):
        t = t0 + i * dt
        k1 = deriv(y, t)
        k2 = deriv(y + 0.5 * dt * k1, t + 0.5 * dt)
        k3 = deriv(y + 0.5 * dt * k2, t + 0.5 * dt)
        k4 = deriv(y + dt * k3, t + dt)
        y = y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not np.all(np.isfinite(y)):
            raise ValueError(f"non-finite state at step {i + 1}")
        out[i + 1] = y
    return out


def zero_order_solve(
    f: ForceLaw, r0, u0, m0: float, t_span: tuple, dt: float
) -> Trajectory:
    """RK4 solution of the Newtonian equation m0 * d^2 r/dt^2 = F(r, u, t).

    Intended for the slow-motion regime |u| << 1; nothing enforces it.  The
    span is covered by ceil((t1 - t0)/dt) uniform steps.
    """
    if m0 <= 0.0:
        raise ValueError("rest mass must be positive")
    t0, t1 = float(t_span[0]), float(t_span[1])
    if not (dt > 0.0 and t1 > t0):
        raise ValueError("need dt > 0 and a forward time span")
    n = max(1, math.ceil((t1 - t0) / dt - 1e-12))

    def deriv(y, t):
        return np.concatenate([y[3:], f(y[:3], y[3:], t) / m0])

    y0 = np.concatenate([np.asarray(r0, dtype=float), np.asarray(u0, dtype=float)])
    ys = _rk4(deriv, y0, t0, dt, n)
    t = t0 + dt * np.arange(n + 1)
    return Trajectory(t=t, r=ys[:, :3], u=ys[:, 3:])


def correction_solve(
    run0: Trajectory, f: ForceLaw, r1_0, u1_0, m0: float
) -> Trajectory:
    """RK4 solution of the linear correction equation along a zero-order run.

    Integrates m0 * d^2 r1/dt^2 = (r1 . grad_r)F + (u1 . grad_u)F with the
    Jacobians evaluated on the zero-order trajectory, which is re-advanced
    step-for-step alongside the correction so the coefficients are available
    at the RK4 stage points (the re-advanced copy is checked against
    ``run0``).  The equation is homogeneous: a zero initial perturbation
    stays exactly zero, and solutions superpose.
    """
    if m0 <= 0.0:
        raise ValueError("rest mass must be positive")
    t = run0.t
    if len(run0) < 2:
        raise ValueError("zero-order run too short")
    dts = np.diff(t)
    dt = float(dts[0])
    if not np.allclose(dts, dt, rtol=1e-9, atol=0.0):
        raise ValueError("zero-order run must be uniformly sampled")

    def deriv(y, tt):
        r0, u0, r1, u1 = y[:3], y[3:6], y[6:9], y[9:]
        jr, ju = force_jacobians(f, (r0, u0, tt))
        return np.concatenate(
            [u0, f(r0, u0, tt) / m0, u1, (jr @ r1 + ju @ u1) / m0]
        )

    y0 = np.concatenate(
        [run0.r[0], run0.u[0], np.asarray(r1_0, dtype=float), np.asarray(u1_0, dtype=float)]
    )
    ys = _rk4(deriv, y0, float(t[0]), dt, len(run0) - 1)
    scale = max(float(np.abs(run0.r).max()), 1.0)
    if not np.allclose(ys[:, :3], run0.r, rtol=0.0, atol=1e-9 * scale):
        raise ValueError("zero-order trajectory does not match its own re-integration")
    return Trajectory(t=t, r=ys[:, 6:9], u=ys[:, 9:])


def _time_force_series(run0: Trajectory, run1: Trajectory, f: ForceLaw) -> np.ndarray:
    out = np.empty_like(run1.r)
    for i in range(len(run0)):
        jr, ju = force_jacobians(f, (run0.r[i], run0.u[i], run0.t[i]))
        out[i] = jr @ run1.r[i] + ju @ run1.u[i]
    return out


def time_force(run: PerturbationRun, f: ForceLaw) -> np.ndarray:
    """The correction equation's right-hand side sampled along a run.

    Returns the (n, 3) series (r1 . grad_r)F + (u1 . grad_u)F evaluated with
    the Jacobians on the zero-order trajectory: the explicit extra force the
    slow-motion split attributes to the changed course of time.
    """
    return _time_force_series(run.zero_order, run.correction, f)


def expansion_residual(f: ForceLaw, run: PerturbationRun) -> float:
    """Max-norm defect of the composite trajectory in the first-order equation.

    Substitutes r' = r0 + r1 into the expanded equation of motion

        m0*du'/dt + m0*d2u'/dt2 * (-v0*x') = F(r', u', t) + dF/dt * (-v0*x')

    with the first-order terms retained: m0*du'/dt is taken from the two
    integrated equations (zero order plus linear correction), F is the full
    force at the composite state, the time derivatives of the printed
    -v0*x' terms come from central differences of those series, and x' is
    the zero-order x0(t).  Because the -v0*x' driving terms cancel against
    the zero-order equation, what remains is the linearization remainder:
    identically zero for a linear force, O(|r1|^2) for a curved one.
    """
    run0, run1 = run.zero_order, run.correction
    t, m0 = run0.t, run.m0
    n = len(run0)
    if n < 3:
        raise ValueError("run too short for the derivative stencil")
    lin = np.empty((n, 3))  # m0 * du'/dt from the integrated equations
    full = np.empty((n, 3))  # F at the composite state
    for i in range(n):
        jr, ju = force_jacobians(f, (run0.r[i], run0.u[i], t[i]))
        lin[i] = f(run0.r[i], run0.u[i], t[i]) + jr @ run1.r[i] + ju @ run1.u[i]
        full[i] = f(run0.r[i] + run1.r[i], run0.u[i] + run1.u[i], t[i])
    defect = lin - full
    d_defect = (defect[2:] - defect[:-2]) / (t[2:] - t[:-2])[:, None]
    x0 = run0.r[1:-1, 0]
    series = defect[1:-1] + (-run.v0 * x0)[:, None] * d_defect
    return float(np.abs(series).max())


def solve_perturbation(
    f: ForceLaw,
    r0,
    u0,
    m0: float,
    t_span: tuple,
    dt: float,
    v0: float,
    r1_0=None,
    u1_0=None,
) -> PerturbationRun:
    """Zero-order solve, correction solve and time-force series in one call.

    The initial perturbation defaults to zero (the correction then stays
    identically zero); its physically natural magnitude is proportional to
    ``v0``, but the choice is the caller's.
    """
    zero = np.zeros(3)
    run0 = zero_order_solve(f, r0, u0, m0, t_span, dt)
    run1 = correction_solve(
        run0, f, zero if r1_0 is None else r1_0, zero if u1_0 is None else u1_0, m0
    )
    return PerturbationRun(
        zero_order=run0, correction=run1, v0=float(v0), m0=float(m0),
        time_force=_time_force_series(run0, run1, f),
    )


def fit_power_law(x, y) -> float:
    """Least-squares exponent p of y ~ C * x**p on a log-log scale."""
    lx, ly = np.log(np.asarray(x, dtype=float)), np.log(np.asarray(y, dtype=float))
    return float(np.polyfit(lx, ly, 1)[0])


def residual_sweep(
    f: ForceLaw,
    r0,
    u0,
    m0: float,
    t_span: tuple,
    dt: float,
    v0_values,
    seed_direction=(1.0, 0.0, 0.0),
) -> tuple[np.ndarray, float]:
    """Expansion residual versus boost speed, with the fitted scaling exponent.

    For each v0 the correction is seeded with r1(0) = v0 * seed_direction
    (the correction's natural magnitude scales with the boost speed) and the
    residual of the composite trajectory is recorded.  Returns the residual
    array and the fitted log-log exponent; for a force with curvature the
    remainder is quadratic in the seed, so the exponent lands near 2, and
    any value >= ~1 confirms the expansion error vanishes with v0.
    """
    seed = np.asarray(seed_direction, dtype=float)
    residuals = []
    for v0 in v0_values:
        run = solve_perturbation(
            f, r0, u0, m0, t_span, dt, v0, r1_0=float(v0) * seed
        )
        residuals.append(expansion_residual(f, run))
    residuals = np.asarray(residuals)
    return residuals, fit_power_law(np.asarray(v0_values, dtype=float), residuals)

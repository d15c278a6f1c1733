"""Events, boosts and velocity maps between standard-configuration inertial frames.

Everything works in natural units (c = 1): velocities are dimensionless
fractions of the light speed, times and lengths share one unit.  The two
frames K and K' are always in standard configuration: parallel axes,
relative velocity ``v0`` along the shared x-axis, origins coincident at
t = t' = 0.  The "forward" direction of every map takes K' coordinates
to K coordinates,

    t = gamma * (t' + v0 * x'),   x = gamma * (x' + v0 * t'),
    y = y',  z = z',              gamma = (1 - v0**2) ** -0.5,

and "inverse" applies the sign-flipped boost.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Event",
    "Boost",
    "Worldline",
    "FrameMismatchError",
    "lorentz_gamma",
    "boost_event",
    "velocity_addition_x",
    "velocity_boost",
    "kinematic_g",
    "inverse_kinematic_g",
    "crossover_velocity",
    "proper_time_rate",
    "spatial_scale_ratio",
    "boost_field_tensor",
    "boost_worldline",
    "interval_squared",
    "save_worldline_csv",
    "load_worldline_csv",
]

#: Default frame tags for the two standard-configuration frames.
FRAME_K = "K"
FRAME_KPRIME = "Kprime"


class FrameMismatchError(ValueError):
    """An operation received coordinates tagged with the wrong frame."""


def _as_vec3(x) -> np.ndarray:
    v = np.asarray(x, dtype=float)
    if v.shape != (3,):
        raise ValueError(f"expected a 3-vector, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError("vector components must be finite")
    return v


def lorentz_gamma(v0: float) -> float:
    """Lorentz factor (1 - v0**2)**-0.5 for a subluminal speed."""
    if not abs(v0) < 1.0:
        raise ValueError(f"|v0| must be < 1, got {v0}")
    # (1-v0)(1+v0) avoids cancellation for |v0| near 1
    return 1.0 / math.sqrt((1.0 - v0) * (1.0 + v0))


@dataclass(frozen=True)
class Event:
    """A point (t, r) in the Galilean coordinates of one named inertial frame."""

    t: float
    r: np.ndarray
    frame_tag: str = FRAME_KPRIME

    def __post_init__(self):
        object.__setattr__(self, "t", float(self.t))
        r = _as_vec3(self.r)
        r.flags.writeable = False
        object.__setattr__(self, "r", r)
        if not math.isfinite(self.t):
            raise ValueError("event time must be finite")

    @property
    def x(self) -> float:
        return float(self.r[0])


def interval_squared(e1: Event, e2: Event) -> float:
    """Invariant interval s^2 = dt^2 - |dr|^2 between two events of one frame."""
    if e1.frame_tag != e2.frame_tag:
        raise FrameMismatchError(
            f"events live in different frames: {e1.frame_tag!r} vs {e2.frame_tag!r}"
        )
    dt = e2.t - e1.t
    dr = e2.r - e1.r
    return dt * dt - float(dr @ dr)


@dataclass(frozen=True)
class Boost:
    """Standard-configuration map K' <-> K with relative velocity ``v0`` along x.

    ``frame_prime`` tags coordinates on the primed side, ``frame_lab`` on the
    unprimed side; operations that take tagged inputs reject mismatches.
    ``gamma`` is recomputed from ``v0`` on every read so the two can never
    fall out of sync.
    """

    v0: float
    frame_prime: str = FRAME_KPRIME
    frame_lab: str = FRAME_K

    def __post_init__(self):
        object.__setattr__(self, "v0", float(self.v0))
        lorentz_gamma(self.v0)  # validates |v0| < 1

    @property
    def gamma(self) -> float:
        return lorentz_gamma(self.v0)

    def matrix(self, direction: str = "forward") -> np.ndarray:
        """4x4 coordinate matrix L with x^i = L[i,k] x'^k (forward: K' -> K)."""
        v0, _, _ = self._oriented(direction)
        g = self.gamma
        L = np.eye(4)
        L[0, 0] = L[1, 1] = g
        L[0, 1] = L[1, 0] = g * v0
        return L

    def _oriented(self, direction: str) -> tuple[float, str, str]:
        """Signed velocity plus (source, target) frame tags for a direction."""
        if direction == "forward":
            return self.v0, self.frame_prime, self.frame_lab
        if direction == "inverse":
            return -self.v0, self.frame_lab, self.frame_prime
        raise ValueError(f"direction must be 'forward' or 'inverse', got {direction!r}")

    def inverse(self) -> "Boost":
        return Boost(-self.v0, frame_prime=self.frame_lab, frame_lab=self.frame_prime)


def boost_event(e: Event, b: Boost, direction: str = "forward") -> Event:
    """Map an event's coordinates to the other frame of a boost.

    Forward maps ``b.frame_prime`` coordinates to ``b.frame_lab`` per the
    standard-configuration transformation; inverse goes the other way.
    The returned event carries the target frame's tag.
    """
    v0, src, dst = b._oriented(direction)
    if e.frame_tag != src:
        raise FrameMismatchError(
            f"event tagged {e.frame_tag!r} but {direction} boost maps from {src!r}"
        )
    g = b.gamma
    t = g * (e.t + v0 * e.r[0])
    r = e.r.copy()
    r[0] = g * (e.r[0] + v0 * e.t)
    return Event(t=t, r=r, frame_tag=dst)


def velocity_addition_x(ux_prime: float, v0: float) -> float:
    """x-velocity seen from K for a particle with x-velocity ``ux_prime`` in K'."""
    if not abs(ux_prime) <= 1.0:
        raise ValueError(f"|ux_prime| must be <= 1, got {ux_prime}")
    lorentz_gamma(v0)
    return (ux_prime + v0) / (1.0 + ux_prime * v0)


def velocity_boost(u_prime, b: Boost, direction: str = "forward") -> np.ndarray:
    """Transform a 3-velocity between the frames of a boost.

    The x-component follows the velocity addition rule; the transverse
    components pick up the 1/(gamma*(1 + v0*ux')) time-dilation factor that
    falls out of differentiating the coordinate map.  Subluminal input maps
    to subluminal output.
    """
    u = _as_vec3(u_prime)
    speed = float(np.linalg.norm(u))
    if not speed < 1.0:
        raise ValueError(f"|u| must be < 1 for a massive particle, got {speed}")
    v0, _, _ = b._oriented(direction)
    g = b.gamma
    denom = 1.0 + v0 * u[0]
    out = np.empty(3)
    out[0] = (u[0] + v0) / denom
    out[1] = u[1] / (g * denom)
    out[2] = u[2] / (g * denom)
    return out


def kinematic_g(ux_prime: float, b: Boost) -> float:
    """Local time-course ratio dt/dt' = gamma*(1 + v0*ux') along a worldline."""
    if not abs(ux_prime) <= 1.0:
        raise ValueError(f"|ux_prime| must be <= 1, got {ux_prime}")
    return b.gamma * (1.0 + b.v0 * ux_prime)


def inverse_kinematic_g(ux: float, b: Boost) -> float:
    """Reverse ratio dt'/dt = gamma*(1 - v0*ux) along a worldline."""
    if not abs(ux) <= 1.0:
        raise ValueError(f"|ux| must be <= 1, got {ux}")
    return b.gamma * (1.0 - b.v0 * ux)


def crossover_velocity(v0: float) -> float:
    """The K' x-velocity at which both frames' clocks run at the same rate.

    Solves gamma*(1 + v0*u) = 1: u = (sqrt(1 - v0**2) - 1)/v0.  Always has
    the opposite sign of ``v0`` and smaller magnitude.  At v0 = 0 every
    velocity trivially satisfies dt = dt', so the formula's 0/0 limit
    (which tends to 0) is not exposed; the call raises instead.
    """
    lorentz_gamma(v0)
    if v0 == 0.0:
        raise ValueError("crossover velocity is undefined at v0 = 0 (limit value 0)")
    # algebraically (sqrt(1-v0^2)-1)/v0, written without cancellation
    return -v0 / (math.sqrt((1.0 - v0) * (1.0 + v0)) + 1.0)


def proper_time_rate(u) -> float:
    """Proper-time rate dtau/dt = sqrt(1 - |u|^2) for a particle velocity."""
    v = _as_vec3(u)
    s2 = float(v @ v)
    if not s2 < 1.0:
        raise ValueError(f"|u| must be < 1, got {math.sqrt(s2)}")
    return math.sqrt(1.0 - s2)


def spatial_scale_ratio(ux_prime: float, b: Boost) -> float:
    """Spatial differential ratio dx/dx' = gamma*(1 + v0/ux') along a worldline.

    Singular for a particle with no x-motion in K' (dx' = 0).  In the
    gamma -> 1 limit this reduces to the Galilean form 1 + v0/ux'.
    """
    if ux_prime == 0.0:
        raise ValueError("dx/dx' is singular at ux_prime = 0")
    return b.gamma * (1.0 + b.v0 / ux_prime)


def boost_field_tensor(F, b: Boost, direction: str = "forward") -> np.ndarray:
    """Boost an antisymmetric rank-2 field tensor: F -> L @ F @ L.T.

    Forward takes the tensor's components from ``b.frame_prime`` to
    ``b.frame_lab``.  Antisymmetry and the two field invariants
    (B^2 - E^2 and E.B) are preserved exactly by the congruence.
    """
    F = np.asarray(F, dtype=float)
    if F.shape != (4, 4):
        raise ValueError(f"field tensor must be 4x4, got shape {F.shape}")
    if not np.allclose(F, -F.T, atol=1e-12 * max(1.0, float(np.abs(F).max()))):
        raise ValueError("field tensor must be antisymmetric")
    L = b.matrix(direction)
    out = L @ F @ L.T
    # restore exact antisymmetry lost to roundoff
    return 0.5 * (out - out.T)


@dataclass(frozen=True)
class Worldline:
    """A strictly time-ordered sampled trajectory with velocities, in one frame.

    ``t`` has shape (n,), ``r`` and ``u`` shape (n, 3).  Construction checks
    monotone time and subluminal speed at every sample.
    """

    frame_tag: str
    t: np.ndarray
    r: np.ndarray
    u: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.t, dtype=float)
        r = np.asarray(self.r, dtype=float)
        u = np.asarray(self.u, dtype=float)
        n = t.shape[0]
        if t.ndim != 1 or r.shape != (n, 3) or u.shape != (n, 3):
            raise ValueError(
                f"inconsistent sample shapes: t{t.shape}, r{r.shape}, u{u.shape}"
            )
        if n < 2:
            raise ValueError("a worldline needs at least two samples")
        if not (np.all(np.isfinite(t)) and np.all(np.isfinite(r)) and np.all(np.isfinite(u))):
            raise ValueError("worldline samples must be finite")
        if not np.all(np.diff(t) > 0):
            raise ValueError("sample times must be strictly increasing")
        speeds = np.linalg.norm(u, axis=1)
        if not np.all(speeds < 1.0):
            raise ValueError(f"superluminal sample: max |u| = {speeds.max()}")
        for a in (t, r, u):
            a.flags.writeable = False
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "u", u)

    def __len__(self) -> int:
        return self.t.shape[0]

    def event(self, i: int) -> Event:
        return Event(t=self.t[i], r=self.r[i].copy(), frame_tag=self.frame_tag)


def boost_worldline(
    w: Worldline,
    b: Boost,
    direction: str = "forward",
    n_resample: int | None = None,
) -> Worldline:
    """Boost every sample of a worldline into the other frame.

    Events map through the coordinate transformation and velocities through
    the velocity map.  The target-frame times come out already monotone
    (dt/dt' = gamma*(1 + v0*ux') > 0 for subluminal motion).  When
    ``n_resample`` is given, the result is re-sampled onto a uniform
    target-time grid by monotone cubic (PCHIP) interpolation of the
    positions, with velocities taken from the interpolant's derivative.
    """
    v0, src, dst = b._oriented(direction)
    if w.frame_tag != src:
        raise FrameMismatchError(
            f"worldline tagged {w.frame_tag!r} but {direction} boost maps from {src!r}"
        )
    g = b.gamma
    t_new = g * (w.t + v0 * w.r[:, 0])
    r_new = w.r.copy()
    r_new[:, 0] = g * (w.r[:, 0] + v0 * w.t)
    denom = 1.0 + v0 * w.u[:, 0]
    u_new = np.empty_like(w.u)
    u_new[:, 0] = (w.u[:, 0] + v0) / denom
    u_new[:, 1] = w.u[:, 1] / (g * denom)
    u_new[:, 2] = w.u[:, 2] / (g * denom)
    out = Worldline(frame_tag=dst, t=t_new, r=r_new, u=u_new)
    if n_resample is None:
        return out
    return resample_worldline(out, n_resample)


def resample_worldline(w: Worldline, n: int) -> Worldline:
    """Re-sample a worldline onto a uniform time grid of ``n`` points.

    Positions go through shape-preserving cubic (PCHIP) interpolation;
    velocities are the interpolant's derivative, so they agree with the
    positions to the scheme's order rather than echoing stale samples.
    """
    from scipy.interpolate import PchipInterpolator

    if n < 2:
        raise ValueError("need at least two resample points")
    t_new = np.linspace(w.t[0], w.t[-1], n)
    interp = PchipInterpolator(w.t, w.r, axis=0)
    r_new = interp(t_new)
    u_new = interp.derivative()(t_new)
    # PCHIP endpoint derivatives can overshoot |u| = 1 by roundoff
    speeds = np.linalg.norm(u_new, axis=1)
    bad = speeds >= 1.0
    if np.any(bad):
        u_new[bad] *= (1.0 - 1e-15) / speeds[bad, None]
    return Worldline(frame_tag=w.frame_tag, t=t_new, r=r_new, u=u_new)


# ---------------------------------------------------------------------------
# CSV serialization: header t,x,y,z,ux,uy,uz, shortest round-trip decimals.
# Frame tag and boost parameters travel in a JSON sidecar (see scenarios).
# ---------------------------------------------------------------------------

WORLDLINE_CSV_HEADER = ["t", "x", "y", "z", "ux", "uy", "uz"]


def save_worldline_csv(w: Worldline, path) -> None:
    """Write a worldline as CSV with full round-trip decimal precision."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(WORLDLINE_CSV_HEADER)
        for i in range(len(w)):
            row = [w.t[i], *w.r[i], *w.u[i]]
            writer.writerow([repr(float(v)) for v in row])


def load_worldline_csv(path, frame_tag: str = FRAME_KPRIME) -> Worldline:
    """Read a worldline written by :func:`save_worldline_csv`."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != WORLDLINE_CSV_HEADER:
            raise ValueError(f"unexpected worldline CSV header: {header}")
        rows = np.array([[float(v) for v in row] for row in reader])
    if rows.size == 0:
        raise ValueError("empty worldline CSV")
    return Worldline(frame_tag=frame_tag, t=rows[:, 0], r=rows[:, 1:4], u=rows[:, 4:7])

"""Time-course maps dt = g(t')*dt' along worldlines, by three independent routes.

The ratio g of infinitesimal frame-time intervals along a moving particle's
trajectory can be computed

* kinematically, from the coordinate map:   g = gamma*(1 + v0*ux'(t')),
* as a velocity ratio:                      g = sqrt((1 - u'^2)/(1 - u^2)),
* dynamically, from the 4-force: boost the K'-frame 4-force to K and divide
  component-wise by the K-frame 4-force evaluated on the boosted state.

All three must agree; the dynamic route additionally checks that the ratio
is the same for every non-degenerate 4-force component.  Degenerate
components (4-force entries crossing zero, e.g. at cyclotron nodes) are
excluded rather than allowed to amplify roundoff.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_simpson
from scipy.interpolate import CubicSpline

from .dynamics import FieldConfig, boost_field_config
from .frames import Boost, FrameMismatchError, Worldline

__all__ = [
    "TimeMap",
    "DegenerateForceError",
    "TimeMapInconsistencyError",
    "IndexIndependenceReport",
    "time_map_kinematic",
    "time_map_dynamic",
    "time_map_ratio",
    "index_independence_report",
    "period_map_numeric",
    "simultaneity_series",
    "save_time_map_csv",
]

#: Fraction of the local 4-force scale below which a component is
#: considered degenerate and excluded from the dynamic ratio.
DEGENERACY_THRESHOLD = 1e-9


class DegenerateForceError(ValueError):
    """Every 4-force component is below the degeneracy threshold."""


class TimeMapInconsistencyError(ValueError):
    """Well-defined dynamic ratios g_i disagree beyond tolerance."""


@dataclass(frozen=True)
class TimeMap:
    """Sampled time-course ratio along a worldline plus its running integral.

    ``t_accumulated`` is the K-time elapsed since the first sample
    (cumulative Simpson quadrature of g over t'); it is strictly increasing
    because g >= gamma*(1 - |v0|) > 0 for subluminal motion.
    """

    t_prime: np.ndarray
    g: np.ndarray
    t_accumulated: np.ndarray
    v0: float
    provenance: str

    def __post_init__(self):
        tp = np.asarray(self.t_prime, dtype=float)
        g = np.asarray(self.g, dtype=float)
        ta = np.asarray(self.t_accumulated, dtype=float)
        if not (tp.shape == g.shape == ta.shape) or tp.ndim != 1:
            raise ValueError("t_prime, g, t_accumulated must be equal-length 1-d arrays")
        if not np.all(g > 0.0):
            raise ValueError("time-course ratio must be positive at every sample")
        if not np.all(np.diff(ta) > 0.0):
            raise ValueError("accumulated time must be strictly increasing")
        for a in (tp, g, ta):
            a.flags.writeable = False
        object.__setattr__(self, "t_prime", tp)
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "t_accumulated", ta)


def _accumulate(t_prime: np.ndarray, g: np.ndarray) -> np.ndarray:
    return cumulative_simpson(g, x=t_prime, initial=0.0)


def time_map_kinematic(w_prime: Worldline, b: Boost) -> TimeMap:
    """Time-course map from the worldline's x-velocity: g = gamma*(1 + v0*ux')."""
    if w_prime.frame_tag != b.frame_prime:
        raise FrameMismatchError(
            f"worldline tagged {w_prime.frame_tag!r}, boost expects {b.frame_prime!r}"
        )
    g = b.gamma * (1.0 + b.v0 * w_prime.u[:, 0])
    return TimeMap(
        t_prime=w_prime.t,
        g=g,
        t_accumulated=_accumulate(w_prime.t, g),
        v0=b.v0,
        provenance="kinematic",
    )


def time_map_ratio(w_prime: Worldline, b: Boost) -> TimeMap:
    """Time-course map as the velocity ratio sqrt((1 - u'^2)/(1 - u^2)).

    ``u`` is the K-frame velocity obtained by boosting each sample; the
    result is algebraically identical to the kinematic form.
    """
    if w_prime.frame_tag != b.frame_prime:
        raise FrameMismatchError(
            f"worldline tagged {w_prime.frame_tag!r}, boost expects {b.frame_prime!r}"
        )
    up2 = np.sum(w_prime.u * w_prime.u, axis=1)
    g_factor = b.gamma
    denom = 1.0 + b.v0 * w_prime.u[:, 0]
    ux = (w_prime.u[:, 0] + b.v0) / denom
    uy = w_prime.u[:, 1] / (g_factor * denom)
    uz = w_prime.u[:, 2] / (g_factor * denom)
    u2 = ux * ux + uy * uy + uz * uz
    g = np.sqrt((1.0 - up2) / (1.0 - u2))
    return TimeMap(
        t_prime=w_prime.t,
        g=g,
        t_accumulated=_accumulate(w_prime.t, g),
        v0=b.v0,
        provenance="ratio",
    )


def _four_forces_both_frames(w_prime: Worldline, f_prime: FieldConfig, b: Boost):
    """Per-sample 4-forces: (f' in K', L f' boosted to K, f evaluated in K).

    Vectorized over the worldline.  The charge is taken as 1; it cancels in
    every ratio, so the dynamic map is charge-independent.
    """
    E_p, B_p = f_prime.E, f_prime.B
    u_p = w_prime.u
    # K'-frame 4-force per unit charge: (E'.u', E' + u' x B')
    fp = np.empty((len(w_prime), 4))
    fp[:, 0] = u_p @ E_p
    fp[:, 1:] = E_p + np.cross(u_p, B_p)
    # numerator: boost the 4-force components to K
    L = b.matrix("forward")
    num = fp @ L.T
    # denominator: K-frame 4-force on the boosted state in the boosted fields
    f_lab = boost_field_config(f_prime, b, "forward")
    denom_u = 1.0 + b.v0 * u_p[:, 0]
    u = np.empty_like(u_p)
    u[:, 0] = (u_p[:, 0] + b.v0) / denom_u
    u[:, 1] = u_p[:, 1] / (b.gamma * denom_u)
    u[:, 2] = u_p[:, 2] / (b.gamma * denom_u)
    fl = np.empty((len(w_prime), 4))
    fl[:, 0] = u @ f_lab.E
    fl[:, 1:] = f_lab.E + np.cross(u, f_lab.B)
    return fp, num, fl


def _check_solves_motion(w: Worldline, f: FieldConfig, m0: float, e: float, rel_tol: float):
    """Spot-check dp/dt ~ e*(E + u x B) by central differences."""
    u2 = np.sum(w.u * w.u, axis=1)
    p = m0 * w.u / np.sqrt(1.0 - u2)[:, None]
    dp = (p[2:] - p[:-2]) / (w.t[2:] - w.t[:-2])[:, None]
    force = e * (f.E + np.cross(w.u[1:-1], f.B))
    scale = max(float(np.abs(force).max()), 1e-30)
    err = float(np.abs(dp - force).max()) / scale
    if err > rel_tol:
        raise ValueError(
            f"worldline does not solve the equations of motion in this field "
            f"(relative residual {err:.3e} > {rel_tol:.1e})"
        )


def _dynamic_ratio_table(
    w_prime: Worldline,
    f_prime: FieldConfig,
    b: Boost,
    m0: float,
    e: float,
    threshold: float,
    motion_check_tol: float | None,
):
    """Shared front half of the dynamic route: per-sample ratio candidates.

    Returns (num, denom, defined, ratios, spread) with NaN marking excluded
    (near-degenerate) components.  Raises on frame mismatch, a worldline
    that does not solve the motion, or an everywhere-degenerate force.
    """
    if w_prime.frame_tag != b.frame_prime:
        raise FrameMismatchError(
            f"worldline tagged {w_prime.frame_tag!r}, boost expects {b.frame_prime!r}"
        )
    if f_prime.frame_tag != w_prime.frame_tag:
        raise FrameMismatchError(
            f"fields tagged {f_prime.frame_tag!r}, worldline {w_prime.frame_tag!r}"
        )
    if motion_check_tol is not None:
        _check_solves_motion(w_prime, f_prime, m0, e, motion_check_tol)
    _, num, denom = _four_forces_both_frames(w_prime, f_prime, b)
    scale = np.abs(denom).max(axis=1)
    if not np.all(scale > 0.0):
        raise DegenerateForceError(
            "zero 4-force: the dynamic route needs a nonvanishing force"
        )
    defined = np.abs(denom) > threshold * scale[:, None]
    if not np.all(defined.any(axis=1)):
        raise DegenerateForceError(
            "zero 4-force: every component is below the degeneracy threshold"
        )
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = np.where(defined, num / denom, np.nan)
    spread = np.nanmax(ratios, axis=1) - np.nanmin(ratios, axis=1)
    return num, denom, defined, ratios, spread


def time_map_dynamic(
    w_prime: Worldline,
    f_prime: FieldConfig,
    b: Boost,
    m0: float = 1.0,
    e: float = 1.0,
    threshold: float = DEGENERACY_THRESHOLD,
    spread_tol: float = 1e-6,
    motion_check_tol: float | None = 1e-3,
) -> TimeMap:
    """Time-course map extracted from 4-force component ratios.

    For every sample the K'-frame 4-force f'^k is boosted to K and divided,
    component by component, by the K-frame 4-force f^i on the boosted state:
    each well-defined ratio equals dt/dt'.  Components with |f^i| below
    ``threshold`` times the local force scale are excluded; a sample with no
    surviving component (e.g. a free particle) raises
    :class:`DegenerateForceError`, and surviving ratios that disagree by
    more than ``spread_tol`` raise :class:`TimeMapInconsistencyError`.

    The returned g takes, per sample, the ratio at the best-conditioned
    component (largest |f^i|), which is immune to the roundoff blow-up that
    near-degenerate components suffer.  ``motion_check_tol`` controls the
    precondition spot-check that the worldline actually solves the motion
    for a particle (m0, e) in ``f_prime`` (set None to skip); the charge
    cancels in the ratios themselves.
    """
    num, denom, _, _, spread = _dynamic_ratio_table(
        w_prime, f_prime, b, m0, e, threshold, motion_check_tol
    )
    worst = float(np.max(spread))
    if worst > spread_tol:
        raise TimeMapInconsistencyError(
            f"4-force component ratios disagree: max spread {worst:.3e} > {spread_tol:.1e}"
        )
    best = np.argmax(np.abs(denom), axis=1)
    rows = np.arange(len(w_prime))
    g = num[rows, best] / denom[rows, best]
    return TimeMap(
        t_prime=w_prime.t,
        g=g,
        t_accumulated=_accumulate(w_prime.t, g),
        v0=b.v0,
        provenance="dynamic",
    )


@dataclass(frozen=True)
class IndexIndependenceReport:
    """Per-sample agreement of the four dynamic ratios g_i.

    ``ratios`` is (n, 4) with NaN at degenerate components; ``spread`` is
    the per-sample max - min over defined components and ``n_defined``
    counts them.  ``max_spread`` summarizes the whole worldline.
    """

    t_prime: np.ndarray
    ratios: np.ndarray
    spread: np.ndarray
    n_defined: np.ndarray
    max_spread: float


def index_independence_report(
    w_prime: Worldline,
    f_prime: FieldConfig,
    b: Boost,
    m0: float = 1.0,
    e: float = 1.0,
    threshold: float = DEGENERACY_THRESHOLD,
    spread_tol: float = 1e-6,
    motion_check_tol: float | None = 1e-3,
) -> IndexIndependenceReport:
    """Measure how index-independent the dynamic ratios g_i really are.

    Raises :class:`TimeMapInconsistencyError` if any sample's defined
    components spread wider than ``spread_tol``; raising ``threshold``
    trades coverage near force nodes for a tighter spread.
    """
    _, _, defined, ratios, spread = _dynamic_ratio_table(
        w_prime, f_prime, b, m0, e, threshold, motion_check_tol
    )
    max_spread = float(np.max(spread))
    if max_spread > spread_tol:
        raise TimeMapInconsistencyError(
            f"4-force component ratios disagree: max spread {max_spread:.3e} > {spread_tol:.1e}"
        )
    return IndexIndependenceReport(
        t_prime=w_prime.t,
        ratios=ratios,
        spread=spread,
        n_defined=defined.sum(axis=1),
        max_spread=max_spread,
    )


def period_map_numeric(
    w_prime: Worldline,
    b: Boost,
    T_prime: float,
    t0_prime: float,
    window: float = 1.0,
    periodicity_tol: float = 1e-6,
) -> float:
    """Integrate the kinematic g over [t0', t0' + window*T'] of a periodic motion.

    The worldline must cover the window and repeat with period ``T_prime``
    (velocity checked at matching phases).  A full window (window = 1) is
    independent of ``t0_prime``; a half window oscillates with it.  The
    integrand is interpolated with a cubic spline, so ``t0_prime`` need not
    sit on a grid point.
    """
    if w_prime.frame_tag != b.frame_prime:
        raise FrameMismatchError(
            f"worldline tagged {w_prime.frame_tag!r}, boost expects {b.frame_prime!r}"
        )
    if T_prime <= 0.0:
        raise ValueError("period must be positive")
    t = w_prime.t
    t_end = t0_prime + window * T_prime
    if t0_prime < t[0] or t_end > t[-1]:
        raise ValueError(
            f"window [{t0_prime}, {t_end}] not covered by worldline [{t[0]}, {t[-1]}]"
        )
    # periodicity spot-check: u(t) must repeat one period later
    if t[-1] - t[0] >= T_prime:
        probes = np.linspace(t[0], t[-1] - T_prime, 7)
        u_spline = CubicSpline(t, w_prime.u, axis=0)
        miss = float(np.abs(u_spline(probes) - u_spline(probes + T_prime)).max())
        if miss > periodicity_tol:
            raise ValueError(
                f"worldline is not T'-periodic: velocity mismatch {miss:.3e} "
                f"over one period exceeds {periodicity_tol:.1e}"
            )
    else:
        raise ValueError("worldline shorter than one period; cannot verify periodicity")
    g = b.gamma * (1.0 + b.v0 * w_prime.u[:, 0])
    return float(CubicSpline(t, g).integrate(t0_prime, t_end))


def simultaneity_series(w1_prime: Worldline, w2_prime: Worldline, b: Boost) -> np.ndarray:
    """K-frame time splits t2 - t1 of events simultaneous in K', per sample.

    Both worldlines must share the t' grid (and the frame).  Each pair of
    equal-t' events maps to K times differing by gamma*v0*(x2' - x1').
    Returns an (n, 2) array of (t', t2 - t1).
    """
    if w1_prime.frame_tag != w2_prime.frame_tag:
        raise FrameMismatchError(
            f"worldlines live in different frames: "
            f"{w1_prime.frame_tag!r} vs {w2_prime.frame_tag!r}"
        )
    if w1_prime.frame_tag != b.frame_prime:
        raise FrameMismatchError(
            f"worldlines tagged {w1_prime.frame_tag!r}, boost expects {b.frame_prime!r}"
        )
    if w1_prime.t.shape != w2_prime.t.shape or not np.array_equal(w1_prime.t, w2_prime.t):
        raise ValueError("worldlines must be sampled on the same t' grid")
    dt = b.gamma * b.v0 * (w2_prime.r[:, 0] - w1_prime.r[:, 0])
    return np.column_stack([w1_prime.t, dt])


TIME_MAP_CSV_HEADER = ["t_prime", "g", "t"]


def save_time_map_csv(tm: TimeMap, path) -> None:
    """Write a time map as CSV (t_prime, g, accumulated t), full precision."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(TIME_MAP_CSV_HEADER)
        for i in range(tm.t_prime.shape[0]):
            writer.writerow(
                [repr(float(tm.t_prime[i])), repr(float(tm.g[i])), repr(float(tm.t_accumulated[i]))]
            )

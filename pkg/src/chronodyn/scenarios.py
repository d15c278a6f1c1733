"""Configuration-driven scenario runs: parse a JSON scenario, simulate, emit files.

A scenario is a single JSON object.  Field runs integrate the equations of
motion; analytic runs sample a closed-form motion.  Exactly one of the two
must be present:

    {
      "name": "cyclotron-demo",
      "v0": 0.6,
      "particle": {"m0": 1.0, "e": 1.0},

      "analytic": {"kind": "cyclotron", "u0_prime": 0.3, "B_prime": 1.0,
                   "alpha": 0.0, "r0_prime": [0, 0, 0]},
      "time_grid": {"periods": 2, "per_period": 1500},   # or {"t0", "t1", "n"}

      # -- or --
      "field": {"E": [0, 0, 0], "B": [0, 0, 1]},
      "initial": {"r": [0, 0, 0], "u": [0.3, 0, 0]},
      "integrator": {"method": "rk4", "dt": 0.005, "n_steps": 2000},

      "timemap_method": "kinematic",                     # | "ratio" | "dynamic"
      "outputs": ["worldline", "boosted_worldline", "timemap", "energy", "summary"]
    }

Analytic kinds: "cyclotron", "uniform_e" (field implied), "osc_drift" (no
field; the dynamic time map is unavailable for it).  Outputs are CSV files
plus JSON sidecars/summary; a fixed configuration produces byte-identical
files on every run.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import analytic
from .chronometry import (
    DegenerateForceError,
    period_map_numeric,
    save_time_map_csv,
    simultaneity_series,
    time_map_dynamic,
    time_map_kinematic,
    time_map_ratio,
)
from .dynamics import FieldConfig, IntegratorConfig, ParticleState, energy_audit, integrate
from .frames import FRAME_KPRIME, Boost, Worldline, boost_worldline, save_worldline_csv
from .perturbation import ForceLaw, expansion_residual, solve_perturbation

__all__ = [
    "Scenario",
    "ScenarioConfigError",
    "load_scenario",
    "parse_scenario",
    "run_scenario",
    "build_force",
    "load_perturb_config",
    "run_perturb",
    "bundled_scenario_path",
]

ALL_OUTPUTS = ("worldline", "boosted_worldline", "timemap", "energy", "summary")
ANALYTIC_KINDS = ("cyclotron", "uniform_e", "osc_drift")


class ScenarioConfigError(ValueError):
    """A scenario file failed to parse or validate; the message names the field."""


def bundled_scenario_path(name: str = "cyclotron") -> Path:
    """Path of a scenario shipped with the package."""
    p = Path(__file__).parent / "data" / f"{name}.json"
    if not p.exists():
        raise ScenarioConfigError(f"no bundled scenario named {name!r}")
    return p


def _need(cfg: dict, key: str, ctx: str = "scenario"):
    if key not in cfg:
        raise ScenarioConfigError(f"{ctx}: missing required field {key!r}")
    return cfg[key]


def _vec3(value, ctx: str) -> np.ndarray:
    try:
        v = np.asarray(value, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ScenarioConfigError(f"{ctx}: not a numeric 3-vector: {value!r}") from exc
    if v.shape != (3,):
        raise ScenarioConfigError(f"{ctx}: expected 3 components, got {value!r}")
    return v


def _number(value, ctx: str) -> float:
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        raise ScenarioConfigError(f"{ctx}: expected a number, got {value!r}")
    return float(value)


@dataclass(frozen=True)
class Scenario:
    """A validated scenario ready to run."""

    name: str
    v0: float
    m0: float
    e: float
    analytic_kind: str | None
    analytic_params: object | None
    field: FieldConfig | None
    initial_r: np.ndarray | None
    initial_u: np.ndarray | None
    integrator: IntegratorConfig | None
    t_grid: tuple[float, float, int] | None
    timemap_method: str
    outputs: tuple[str, ...]


def parse_scenario(cfg: dict) -> Scenario:
    """Validate a scenario dictionary; raises ScenarioConfigError naming the field."""
    if not isinstance(cfg, dict):
        raise ScenarioConfigError("scenario: top level must be a JSON object")
    name = str(_need(cfg, "name"))
    v0 = _number(_need(cfg, "v0"), "v0")
    if not abs(v0) < 1.0:
        raise ScenarioConfigError(f"v0: |v0| must be < 1, got {v0}")
    particle = _need(cfg, "particle")
    m0 = _number(_need(particle, "m0", "particle"), "particle.m0")
    e = _number(_need(particle, "e", "particle"), "particle.e")
    if m0 <= 0.0:
        raise ScenarioConfigError(f"particle.m0: must be positive, got {m0}")

    has_field = "field" in cfg
    has_analytic = "analytic" in cfg
    if has_field == has_analytic:
        raise ScenarioConfigError(
            "scenario: exactly one of 'field' and 'analytic' must be present"
        )

    method = cfg.get("timemap_method", "kinematic")
    if method not in ("kinematic", "ratio", "dynamic"):
        raise ScenarioConfigError(
            f"timemap_method: must be kinematic|ratio|dynamic, got {method!r}"
        )
    outputs = tuple(cfg.get("outputs", ALL_OUTPUTS))
    for o in outputs:
        if o not in ALL_OUTPUTS:
            raise ScenarioConfigError(f"outputs: unknown output {o!r}")

    if has_field:
        fld = cfg["field"]
        field = FieldConfig(
            E=_vec3(_need(fld, "E", "field"), "field.E"),
            B=_vec3(_need(fld, "B", "field"), "field.B"),
            frame_tag=FRAME_KPRIME,
        )
        init = _need(cfg, "initial")
        r0 = _vec3(_need(init, "r", "initial"), "initial.r")
        u0 = _vec3(_need(init, "u", "initial"), "initial.u")
        if not float(u0 @ u0) < 1.0:
            raise ScenarioConfigError("initial.u: speed must be < 1")
        integ = _need(cfg, "integrator")
        try:
            icfg = IntegratorConfig(
                method=str(integ.get("method", "rk4")),
                dt=_number(_need(integ, "dt", "integrator"), "integrator.dt"),
                n_steps=int(_need(integ, "n_steps", "integrator")),
            )
        except ValueError as exc:
            raise ScenarioConfigError(f"integrator: {exc}") from exc
        return Scenario(
            name=name, v0=v0, m0=m0, e=e,
            analytic_kind=None, analytic_params=None,
            field=field, initial_r=r0, initial_u=u0, integrator=icfg,
            t_grid=None, timemap_method=method, outputs=outputs,
        )

    spec = cfg["analytic"]
    kind = str(_need(spec, "kind", "analytic"))
    if kind not in ANALYTIC_KINDS:
        raise ScenarioConfigError(
            f"analytic.kind: must be one of {ANALYTIC_KINDS}, got {kind!r}"
        )
    try:
        if kind == "cyclotron":
            params = analytic.CyclotronParams(
                u0_prime=_number(_need(spec, "u0_prime", "analytic"), "analytic.u0_prime"),
                B_prime=_number(_need(spec, "B_prime", "analytic"), "analytic.B_prime"),
                alpha=_number(spec.get("alpha", 0.0), "analytic.alpha"),
                r0_prime=_vec3(spec.get("r0_prime", [0, 0, 0]), "analytic.r0_prime"),
                m0=m0, e=e,
            )
        elif kind == "uniform_e":
            params = analytic.UniformEParams(
                E_prime=_vec3(_need(spec, "E_prime", "analytic"), "analytic.E_prime"),
                m0=m0, e=e,
                r0_prime=_vec3(spec.get("r0_prime", [0, 0, 0]), "analytic.r0_prime"),
            )
        else:
            params = analytic.OscDriftParams(
                a_prime=_vec3(_need(spec, "a_prime", "analytic"), "analytic.a_prime"),
                omega_prime=_number(
                    _need(spec, "omega_prime", "analytic"), "analytic.omega_prime"
                ),
                u0_prime=_vec3(spec.get("u0_prime", [0, 0, 0]), "analytic.u0_prime"),
            )
    except ValueError as exc:
        raise ScenarioConfigError(f"analytic: {exc}") from exc

    grid = _need(cfg, "time_grid")
    if "periods" in grid:
        if kind == "uniform_e":
            raise ScenarioConfigError(
                "time_grid: 'periods' form needs a periodic motion; uniform_e has none"
            )
        periods = _number(grid["periods"], "time_grid.periods")
        per_period = int(grid.get("per_period", 1000))
        t_prime = params.period_prime
        t_grid = (0.0, periods * t_prime, int(round(periods * per_period)) + 1)
    else:
        t_grid = (
            _number(_need(grid, "t0", "time_grid"), "time_grid.t0"),
            _number(_need(grid, "t1", "time_grid"), "time_grid.t1"),
            int(_need(grid, "n", "time_grid")),
        )
    if not (t_grid[1] > t_grid[0] and t_grid[2] >= 2):
        raise ScenarioConfigError("time_grid: need t1 > t0 and n >= 2")

    return Scenario(
        name=name, v0=v0, m0=m0, e=e,
        analytic_kind=kind, analytic_params=params,
        field=None, initial_r=None, initial_u=None, integrator=None,
        t_grid=t_grid, timemap_method=method, outputs=outputs,
    )


def load_scenario(path) -> Scenario:
    """Read and validate a scenario JSON file."""
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ScenarioConfigError(
            f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    except OSError as exc:
        raise ScenarioConfigError(f"{path}: {exc}") from exc
    return parse_scenario(cfg)


def _implied_field(sc: Scenario) -> FieldConfig | None:
    if sc.field is not None:
        return sc.field
    if sc.analytic_kind == "cyclotron":
        return FieldConfig(
            E=np.zeros(3), B=np.array([0.0, 0.0, sc.analytic_params.B_prime]),
            frame_tag=FRAME_KPRIME,
        )
    if sc.analytic_kind == "uniform_e":
        return FieldConfig(
            E=sc.analytic_params.E_prime, B=np.zeros(3), frame_tag=FRAME_KPRIME
        )
    return None  # osc_drift is a kinematic law, not a field solution


def _make_worldline(sc: Scenario) -> Worldline:
    if sc.analytic_kind is not None:
        t0, t1, n = sc.t_grid
        sampler = {
            "cyclotron": analytic.cyclotron_worldline,
            "uniform_e": analytic.uniform_e_worldline,
            "osc_drift": analytic.osc_drift_worldline,
        }[sc.analytic_kind]
        return sampler(sc.analytic_params, t0, t1, n)
    state = ParticleState(
        t=0.0, r=sc.initial_r, u=sc.initial_u, m0=sc.m0, e=sc.e, frame_tag=FRAME_KPRIME
    )
    return integrate(state, sc.field, sc.integrator)


def _json_ready(obj):
    if isinstance(obj, dict):
        return {k: _json_ready(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_ready(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_json_ready(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    return obj


def _write_json(path: Path, payload: dict) -> None:
    with open(path, "w") as fh:
        json.dump(_json_ready(payload), fh, indent=2, sort_keys=True)
        fh.write("\n")


def _sidecar(sc: Scenario, frame_tag: str, field: FieldConfig | None) -> dict:
    return {
        "scenario": sc.name,
        "frame_tag": frame_tag,
        "boost": {"v0": sc.v0, "frame_prime": FRAME_KPRIME, "frame_lab": "K"},
        "particle": {"m0": sc.m0, "e": sc.e},
        "field": None
        if field is None
        else {"E": field.E, "B": field.B, "frame_tag": field.frame_tag},
    }


def run_scenario(sc: Scenario, out_dir) -> dict:
    """Execute a scenario and write its artifact files; returns the summary.

    Writes (subject to the scenario's output selection):
    worldline_kprime.csv/.meta.json, worldline_k.csv/.meta.json,
    timemap.csv, energy.csv and summary.json.  The pipeline is free of
    randomness, so fixed configs give byte-identical outputs.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    b = Boost(sc.v0)
    w_prime = _make_worldline(sc)
    field = _implied_field(sc)
    summary: dict = {
        "scenario": sc.name,
        "v0": sc.v0,
        "gamma": b.gamma,
        "n_samples": len(w_prime),
    }

    if "worldline" in sc.outputs:
        save_worldline_csv(w_prime, out / "worldline_kprime.csv")
        _write_json(out / "worldline_kprime.meta.json", _sidecar(sc, FRAME_KPRIME, field))
    if "boosted_worldline" in sc.outputs:
        w_lab = boost_worldline(w_prime, b)
        save_worldline_csv(w_lab, out / "worldline_k.csv")
        _write_json(out / "worldline_k.meta.json", _sidecar(sc, "K", None))

    tm_kin = time_map_kinematic(w_prime, b)
    tm_ratio = time_map_ratio(w_prime, b)
    agreement = {"kinematic_vs_ratio": float(np.abs(tm_kin.g - tm_ratio.g).max())}
    if sc.timemap_method == "kinematic":
        tm = tm_kin
    elif sc.timemap_method == "ratio":
        tm = tm_ratio
    else:
        if field is None:
            raise DegenerateForceError(
                "zero 4-force: the oscillatory-drift law is not a homogeneous-field "
                "solution, so the dynamic time map is unavailable"
            )
        tm = time_map_dynamic(w_prime, field, b, m0=sc.m0, e=sc.e)
        agreement["kinematic_vs_dynamic"] = float(np.abs(tm_kin.g - tm.g).max())
    if "timemap" in sc.outputs:
        save_time_map_csv(tm, out / "timemap.csv")
    summary["timemap"] = {
        "method": sc.timemap_method,
        "g_min": float(tm.g.min()),
        "g_max": float(tm.g.max()),
        "elapsed_t_over_elapsed_t_prime": float(
            tm.t_accumulated[-1] / (tm.t_prime[-1] - tm.t_prime[0])
        ),
        "agreement": agreement,
    }

    if field is not None:
        audit = energy_audit(w_prime, field, m0=sc.m0, e=sc.e)
        if "energy" in sc.outputs:
            _write_energy_csv(audit, out / "energy.csv")
        summary["energy"] = {
            "initial_total": float(audit.total[0]),
            "max_relative_drift": audit.max_relative_drift,
        }

    summary["period"] = _period_summary(sc, w_prime, b)
    summary["simultaneity"] = _simultaneity_summary(sc, w_prime, b)

    if "summary" in sc.outputs:
        _write_json(out / "summary.json", summary)
    return summary


def _write_energy_csv(audit, path: Path) -> None:
    import csv as _csv

    with open(path, "w", newline="") as fh:
        writer = _csv.writer(fh, lineterminator="\n")
        writer.writerow(["t", "energy", "potential", "total"])
        for i in range(audit.t.shape[0]):
            writer.writerow(
                [
                    repr(float(audit.t[i])),
                    repr(float(audit.energy[i])),
                    repr(float(audit.potential[i])),
                    repr(float(audit.total[i])),
                ]
            )


def _period_summary(sc: Scenario, w_prime: Worldline, b: Boost) -> dict | None:
    if sc.analytic_kind == "cyclotron":
        t_prime, t_lab = analytic.magnetic_period_map(sc.analytic_params, b)
    elif sc.analytic_kind == "osc_drift":
        t_prime, t_lab = analytic.osc_drift_period_map(sc.analytic_params, b)
    else:
        return None
    if w_prime.t[-1] - w_prime.t[0] < t_prime:
        return None
    numeric = period_map_numeric(w_prime, b, t_prime, float(w_prime.t[0]), window=1.0)
    return {
        "T_prime": t_prime,
        "T_closed_form": t_lab,
        "T_numeric": numeric,
        "ratio_closed_form": t_lab / t_prime,
        "ratio_numeric": numeric / t_prime,
    }


def _simultaneity_summary(sc: Scenario, w_prime: Worldline, b: Boost) -> dict | None:
    if sc.analytic_kind != "cyclotron":
        return None
    p1 = sc.analytic_params
    p2 = analytic.CyclotronParams(
        u0_prime=p1.u0_prime, B_prime=p1.B_prime, alpha=p1.alpha + np.pi,
        r0_prime=p1.r0_prime, m0=p1.m0, e=p1.e,
    )
    w2 = analytic.cyclotron_worldline(
        p2, float(w_prime.t[0]), float(w_prime.t[-1]), len(w_prime)
    )
    series = simultaneity_series(w_prime, w2, b)
    envelope = abs(2.0 * b.gamma * b.v0 * p1.u0_prime / p1.omega_prime)
    return {
        "companion_phase_offset": float(np.pi),
        "envelope_closed_form": envelope,
        "max_abs_difference": float(np.abs(series[:, 1]).max()),
    }


# ---------------------------------------------------------------------------
# Perturbation runs from config files
# ---------------------------------------------------------------------------

FORCE_KINDS = ("harmonic", "constant", "damped_harmonic", "anharmonic")


def build_force(spec: dict) -> ForceLaw:
    """Construct a named force law from a config mapping.

    Kinds: "harmonic" {k}, "constant" {F}, "damped_harmonic" {k, c},
    "anharmonic" {k, eps} with F = -k*r - eps*|r|^2*r.  All carry analytic
    Jacobians.
    """
    kind = _need(spec, "kind", "force")
    if kind == "harmonic":
        k = _number(_need(spec, "k", "force"), "force.k")
        return ForceLaw(
            evaluate=lambda r, u, t: -k * r,
            jac_r=lambda r, u, t: -k * np.eye(3),
            jac_u=lambda r, u, t: np.zeros((3, 3)),
        )
    if kind == "constant":
        F0 = _vec3(_need(spec, "F", "force"), "force.F")
        return ForceLaw(
            evaluate=lambda r, u, t: F0.copy(),
            jac_r=lambda r, u, t: np.zeros((3, 3)),
            jac_u=lambda r, u, t: np.zeros((3, 3)),
        )
    if kind == "damped_harmonic":
        k = _number(_need(spec, "k", "force"), "force.k")
        c = _number(_need(spec, "c", "force"), "force.c")
        return ForceLaw(
            evaluate=lambda r, u, t: -k * r - c * u,
            jac_r=lambda r, u, t: -k * np.eye(3),
            jac_u=lambda r, u, t: -c * np.eye(3),
        )
    if kind == "anharmonic":
        k = _number(_need(spec, "k", "force"), "force.k")
        eps = _number(_need(spec, "eps", "force"), "force.eps")
        return ForceLaw(
            evaluate=lambda r, u, t: -k * r - eps * float(r @ r) * r,
            jac_r=lambda r, u, t: -(k + eps * float(r @ r)) * np.eye(3)
            - 2.0 * eps * np.outer(r, r),
            jac_u=lambda r, u, t: np.zeros((3, 3)),
        )
    raise ScenarioConfigError(f"force.kind: must be one of {FORCE_KINDS}, got {kind!r}")


def load_perturb_config(path) -> dict:
    """Read and validate a perturbation-run JSON config."""
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ScenarioConfigError(
            f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    except OSError as exc:
        raise ScenarioConfigError(f"{path}: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ScenarioConfigError("perturb config: top level must be a JSON object")
    _need(cfg, "force")
    _need(cfg, "initial")
    _need(cfg, "t_span")
    return cfg


def run_perturb(cfg: dict, out_dir) -> dict:
    """Execute a perturbation config; writes run.csv and summary.json.

    The run CSV columns are t, the zero-order position, the correction, and
    the time-force series, in that order.
    """
    import csv as _csv

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    force = build_force(cfg["force"])
    name = str(cfg.get("name", "perturb"))
    m0 = _number(cfg.get("m0", 1.0), "m0")
    v0 = _number(cfg.get("v0", 0.0), "v0")
    init = cfg["initial"]
    r0 = _vec3(_need(init, "r", "initial"), "initial.r")
    u0 = _vec3(_need(init, "u", "initial"), "initial.u")
    corr = cfg.get("correction_initial", {})
    r1_0 = _vec3(corr.get("r1", [0, 0, 0]), "correction_initial.r1")
    u1_0 = _vec3(corr.get("u1", [0, 0, 0]), "correction_initial.u1")
    span = cfg["t_span"]
    if not (isinstance(span, (list, tuple)) and len(span) == 2):
        raise ScenarioConfigError("t_span: expected [t0, t1]")
    dt = _number(cfg.get("dt", 1e-3), "dt")

    run = solve_perturbation(
        force, r0, u0, m0, (float(span[0]), float(span[1])), dt, v0,
        r1_0=r1_0, u1_0=u1_0,
    )
    with open(out / "run.csv", "w", newline="") as fh:
        writer = _csv.writer(fh, lineterminator="\n")
        writer.writerow(["t", "r0x", "r0y", "r0z", "r1x", "r1y", "r1z", "Fx", "Fy", "Fz"])
        for i in range(len(run.zero_order)):
            row = [
                run.zero_order.t[i],
                *run.zero_order.r[i],
                *run.correction.r[i],
                *run.time_force[i],
            ]
            writer.writerow([repr(float(v)) for v in row])
    summary = {
        "name": name,
        "v0": v0,
        "m0": m0,
        "n_samples": len(run.zero_order),
        "max_correction": float(np.abs(run.correction.r).max()),
        "max_time_force": float(np.abs(run.time_force).max()),
        "expansion_residual": expansion_residual(force, run),
    }
    _write_json(out / "summary.json", summary)
    return summary

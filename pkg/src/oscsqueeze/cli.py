"""Scenario runner for the oscillator laboratory.

Subcommands:

  simulate     integrate one scenario, write trajectory + summary
  sweep        map terminal squeezing over a 1- or 2-axis parameter grid
  analytic     print closed-form values for the tanh ramp as JSON
  reconstruct  recover omega(t) from an (Omega, Omega') protocol

Configs are strict JSON: unknown keys are rejected by name so physics
parameters cannot be silently misspelled.  All delimited output uses 17
significant digits (IEEE-754 double round trip); JSON summaries use
sorted keys.  Exit codes: 0 success, 1 configuration error (the message
names the offending key), 2 numerical failure (the message names the
failing time).  Diagnostics are plain text; NO_COLOR needs no special
handling because nothing is ever colorized.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .analytic import (
    PoleError,
    SeriesConvergenceError,
    bogoliubov,
    bogoliubov_magnitudes,
    exact_mode,
    large_ratio_sfactor,
    sudden_jump_sfactor,
    terminal_sfactor,
)
from .dopri import IntegrationError
from .dynamics import (
    integrate_mode,
    positive_mode_ic,
    squeeze_record,
    terminal_average,
)
from .profiles import ConstantProfile, TabulatedProfile, TanhProfile, validate_table
from .thermo import ConstraintViolationError, entropy_from_eps, eps_from_entropy, \
    reconstruct_from_omega_prime

__all__ = ["ConfigError", "main"]

_BASE_COLUMNS = ["t", "re_g", "im_g", "re_gdot", "im_gdot",
                 "g_minus", "dg_minus", "S", "A_slash", "theta"]
_THERMO_COLUMNS = ["omega_eff", "epsilon", "S_ent", "E", "T", "F_omega", "r", "Q"]
_OUTPUT_CHOICES = {"trajectory", "squeeze", "thermo", "summary"}
_AXIS_PARAMETERS = {"omega_ratio", "omega_minus_d"}


class ConfigError(Exception):
    """Configuration problem; the message names the offending key."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # route argparse failures through exit code 1
        raise ConfigError(message)


# ---------------------------------------------------------------- config


def _load_json(path: Path) -> dict:
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ConfigError("config root must be a JSON object")
    return cfg


def _check_keys(section: dict, allowed: set, where: str) -> None:
    unknown = sorted(set(section) - allowed)
    if unknown:
        raise ConfigError(f"unknown key '{unknown[0]}' in {where}")


def _get_number(section: dict, key: str, where: str, default=None,
                positive: bool = False) -> float:
    if key not in section:
        if default is None:
            raise ConfigError(f"missing key '{key}' in {where}")
        return default
    value = section[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"key '{key}' in {where} must be a number")
    value = float(value)
    if positive and not (np.isfinite(value) and value > 0):
        raise ConfigError(f"key '{key}' in {where} must be positive and finite")
    return value


def _read_csv_columns(path: Path, n_cols: int, what: str) -> tuple[np.ndarray, ...]:
    """Read a headered comma-separated numeric file with >= n_cols columns."""
    try:
        data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    except OSError as exc:
        raise ConfigError(f"cannot read {what} file {path}: {exc}") from exc
    except ValueError as exc:
        raise ConfigError(f"{what} file {path} is not numeric CSV: {exc}") from exc
    if data.shape[1] < n_cols:
        raise ConfigError(f"{what} file {path} needs {n_cols} columns, "
                          f"found {data.shape[1]}")
    return tuple(data[:, i] for i in range(n_cols))


def build_profile(spec, base_dir: Path):
    if not isinstance(spec, dict):
        raise ConfigError("key 'profile' must be a JSON object")
    typ = spec.get("type")
    if typ is None:
        raise ConfigError("missing key 'type' in profile")
    try:
        if typ == "constant":
            _check_keys(spec, {"type", "omega"}, "profile")
            return ConstantProfile(omega=_get_number(spec, "omega", "profile"))
        if typ == "tanh":
            if "eps_minus" in spec or "eps_plus" in spec:
                _check_keys(spec, {"type", "omega0", "eps_minus", "eps_plus", "d"},
                            "profile")
                return TanhProfile(
                    omega0=_get_number(spec, "omega0", "profile"),
                    eps_minus=_get_number(spec, "eps_minus", "profile"),
                    eps_plus=_get_number(spec, "eps_plus", "profile"),
                    d=_get_number(spec, "d", "profile"),
                )
            _check_keys(spec, {"type", "omega0", "omega_minus", "omega_plus", "d"},
                        "profile")
            return TanhProfile.from_omegas(
                omega_minus=_get_number(spec, "omega_minus", "profile"),
                omega_plus=_get_number(spec, "omega_plus", "profile"),
                omega0=_get_number(spec, "omega0", "profile"),
                d=_get_number(spec, "d", "profile"),
            )
        if typ == "table":
            _check_keys(spec, {"type", "table_path", "interpolation"}, "profile")
            rel = spec.get("table_path")
            if not isinstance(rel, str):
                raise ConfigError("missing key 'table_path' in profile")
            times, omega_sq = _read_csv_columns(base_dir / rel, 2, "table_path")
            bad = validate_table(times, omega_sq)
            if bad:
                raise ConfigError(f"table_path data invalid: {bad[0].message}")
            interp = spec.get("interpolation", "cubic")
            return TabulatedProfile(times=times, omega_sq=omega_sq,
                                    interpolation=interp)
    except ValueError as exc:  # profile validators name the offending field
        raise ConfigError(str(exc)) from exc
    raise ConfigError(f"profile.type must be one of constant|tanh|table, got '{typ}'")


@dataclass
class Scenario:
    profile: object
    mass: float
    t0: float
    t_end: float
    rtol: float
    atol: float
    points_per_period: int
    trunc_n: float | None
    thermal_kind: str
    thermal_value: float
    outputs: set


_SCENARIO_KEYS = {"profile", "mass", "t_span", "truncation_multiplier", "rtol",
                  "atol", "points_per_period", "thermal", "outputs"}


def build_scenario(cfg: dict, base_dir: Path, extra_keys: set = frozenset()) -> Scenario:
    _check_keys(cfg, _SCENARIO_KEYS | set(extra_keys), "config")
    if "profile" not in cfg:
        raise ConfigError("missing key 'profile' in config")
    profile = build_profile(cfg["profile"], base_dir)
    mass = _get_number(cfg, "mass", "config", default=1.0, positive=True)
    rtol = _get_number(cfg, "rtol", "config", default=1e-10, positive=True)
    atol = _get_number(cfg, "atol", "config", default=1e-12, positive=True)
    ppp = cfg.get("points_per_period", 64)
    if not isinstance(ppp, int) or isinstance(ppp, bool) or ppp < 2:
        raise ConfigError("key 'points_per_period' in config must be an integer >= 2")

    trunc_n = None
    if "t_span" in cfg and "truncation_multiplier" in cfg:
        raise ConfigError("keys 't_span' and 'truncation_multiplier' are mutually "
                          "exclusive in config")
    if "t_span" in cfg:
        span = cfg["t_span"]
        if (not isinstance(span, list) or len(span) != 2
                or not all(isinstance(v, (int, float)) and not isinstance(v, bool)
                           for v in span)):
            raise ConfigError("key 't_span' in config must be a [start, end] pair")
        t0, t_end = float(span[0]), float(span[1])
        if not t_end > t0:
            raise ConfigError("key 't_span' in config must have end > start")
    elif isinstance(profile, TanhProfile):
        trunc_n = _get_number(cfg, "truncation_multiplier", "config",
                              default=8.0, positive=True)
        t0 = -trunc_n * profile.d
        t_end = trunc_n * profile.d + 4.0 * math.pi / profile.omega_plus
    elif isinstance(profile, TabulatedProfile):
        t0, t_end = profile.t_span
    else:
        raise ConfigError("key 't_span' is required for a constant profile")
    if "truncation_multiplier" in cfg and not isinstance(profile, TanhProfile):
        raise ConfigError("key 'truncation_multiplier' applies only to tanh profiles")

    thermal = cfg.get("thermal")
    if not isinstance(thermal, dict):
        raise ConfigError("missing key 'thermal' in config (object with exactly one "
                          "of epsilon|T0|S_ent)")
    _check_keys(thermal, {"epsilon", "T0", "S_ent"}, "thermal")
    if len(thermal) != 1:
        raise ConfigError("key 'thermal' in config must hold exactly one of "
                          "epsilon|T0|S_ent")
    kind = next(iter(thermal))
    value = _get_number(thermal, kind, "thermal", positive=True)

    outputs = cfg.get("outputs", sorted(_OUTPUT_CHOICES))
    if (not isinstance(outputs, list)
            or not all(isinstance(o, str) for o in outputs)):
        raise ConfigError("key 'outputs' in config must be a list of names")
    bad = sorted(set(outputs) - _OUTPUT_CHOICES)
    if bad:
        raise ConfigError(f"unknown output '{bad[0]}' in config (choices: "
                          f"{'|'.join(sorted(_OUTPUT_CHOICES))})")

    return Scenario(profile=profile, mass=mass, t0=t0, t_end=t_end, rtol=rtol,
                    atol=atol, points_per_period=ppp, trunc_n=trunc_n,
                    thermal_kind=kind, thermal_value=value, outputs=set(outputs))


def _resolve_epsilon(scn: Scenario, omega_i: float) -> float:
    if scn.thermal_kind == "epsilon":
        return scn.thermal_value
    if scn.thermal_kind == "T0":
        return omega_i / scn.thermal_value
    return eps_from_entropy(scn.thermal_value)


# ---------------------------------------------------------------- output


def _fmt(value) -> str:
    if isinstance(value, str):
        return value
    return format(float(value), ".17g")


def _write_csv(path: Path, header: list[str], columns: list) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in zip(*columns):
            fh.write(",".join(_fmt(v) for v in row) + "\n")
    print(f"wrote {path}")


def _write_json(path: Path, obj, sort_keys: bool = True) -> None:
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=sort_keys, allow_nan=True)
        fh.write("\n")
    print(f"wrote {path}")


def _thermo_arrays(rec, eps: float) -> dict:
    coth_half = 1.0 / math.tanh(0.5 * eps)
    omega_eff = rec.omega + rec.Omega
    s_clamped = np.maximum(rec.S, 0.0)
    n = rec.t.size
    return {
        "omega_eff": omega_eff,
        "epsilon": np.full(n, eps),
        "S_ent": np.full(n, entropy_from_eps(eps)),
        "E": 0.5 * omega_eff * coth_half,
        "T": omega_eff / eps,
        "F_omega": np.full(n, -0.5 * coth_half),
        "r": np.arcsinh(np.sqrt(0.5 * s_clamped * rec.omega_I / rec.omega)),
        "Q": 1.0 + s_clamped * rec.omega_I / rec.omega,
    }


def _terminal_mean(t: np.ndarray, values: np.ndarray, period: float) -> float:
    """Trailing 4-period average; whole-span average if the span is shorter."""
    try:
        return terminal_average(t, values, period, n_periods=4)
    except ValueError:
        return float(np.trapezoid(values, t) / (t[-1] - t[0]))


# ---------------------------------------------------------------- simulate


def _cmd_simulate(args) -> int:
    cfg_path = Path(args.config)
    scn = build_scenario(_load_json(cfg_path), cfg_path.parent)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    ic = positive_mode_ic(scn.profile, scn.t0, scn.mass)
    traj = integrate_mode(scn.profile, ic, scn.t_end, rtol=scn.rtol, atol=scn.atol,
                          points_per_period=scn.points_per_period)
    rec = squeeze_record(traj, scn.profile)
    eps = _resolve_epsilon(scn, ic.omega_I)
    thermo = _thermo_arrays(rec, eps)

    period = math.pi / float(rec.omega[-1])
    terminal_s = _terminal_mean(rec.t, rec.S, period)
    terminal_t = _terminal_mean(rec.t, thermo["T"], period)

    if "trajectory" in scn.outputs or "squeeze" in scn.outputs:
        header = list(_BASE_COLUMNS)
        columns = [traj.t, traj.g.real, traj.g.imag, traj.gdot.real, traj.gdot.imag,
                   rec.g_minus, rec.dg_minus, rec.S, rec.A_slash, rec.theta]
        if "thermo" in scn.outputs:
            header += _THERMO_COLUMNS
            columns += [thermo[name] for name in _THERMO_COLUMNS]
        if args.format == "csv":
            _write_csv(out / "trajectory.csv", header, columns)
        else:
            payload = {name: [float(v) for v in col]
                       for name, col in zip(header, columns)}
            _write_json(out / "trajectory.json", payload, sort_keys=False)

    if "summary" in scn.outputs:
        summary = {
            "terminal_S": terminal_s,
            "terminal_T": terminal_t,
            "epsilon": eps,
            "omega_I": ic.omega_I,
            "mass": scn.mass,
            "t_start": scn.t0,
            "t_end": scn.t_end,
            "samples": int(rec.t.size),
            "wronskian_drift": traj.wronskian_drift,
            "integrator_steps": traj.stats.steps,
            "integrator_rejected": traj.stats.rejected,
            "integrator_max_error": traj.stats.max_error_estimate,
            "rhs_evaluations": traj.stats.rhs_evaluations,
        }
        _write_json(out / "summary.json", summary)

    if not args.no_figures:
        from .plotting import trajectory_figure
        trajectory_figure(rec, str(out / "trajectory.png"))
        print(f"wrote {out / 'trajectory.png'}")
    return 0


# ---------------------------------------------------------------- sweep


def _sweep_cell(payload: dict) -> tuple[float, str]:
    """Evaluate terminal S for one grid cell; never raises (reason on failure)."""
    try:
        profile = TanhProfile.from_omegas(
            omega_minus=payload["omega_minus"], omega_plus=payload["omega_plus"],
            omega0=payload["omega0"], d=payload["d"],
        )
        n = payload["trunc_n"]
        t0 = -n * profile.d
        t_end = n * profile.d + 4.0 * math.pi / profile.omega_plus
        ic = positive_mode_ic(profile, t0, payload["mass"])
        traj = integrate_mode(profile, ic, t_end, rtol=payload["rtol"],
                              atol=payload["atol"],
                              points_per_period=payload["ppp"])
        rec = squeeze_record(traj, profile)
        period = math.pi / float(rec.omega[-1])
        return terminal_average(rec.t, rec.S, period, n_periods=4), ""
    except Exception as exc:  # cell isolation: the sweep must keep going
        reason = f"{type(exc).__name__}: {exc}".replace(",", ";").replace("\n", " ")
        return float("nan"), reason


def _parse_axis(spec, index: int) -> tuple[str, np.ndarray]:
    where = f"sweep.axes[{index}]"
    if not isinstance(spec, dict):
        raise ConfigError(f"{where} must be an object")
    _check_keys(spec, {"parameter", "min", "max", "count", "spacing"}, where)
    name = spec.get("parameter")
    if name not in _AXIS_PARAMETERS:
        raise ConfigError(f"key 'parameter' in {where} must be one of "
                          f"{'|'.join(sorted(_AXIS_PARAMETERS))}")
    lo = _get_number(spec, "min", where)
    hi = _get_number(spec, "max", where)
    if not lo < hi:
        raise ConfigError(f"key 'min' in {where} must be below 'max'")
    count = spec.get("count")
    if not isinstance(count, int) or isinstance(count, bool) or count < 2:
        raise ConfigError(f"key 'count' in {where} must be an integer >= 2")
    spacing = spec.get("spacing", "linear")
    if spacing not in ("linear", "log"):
        raise ConfigError(f"key 'spacing' in {where} must be linear|log")
    if spacing == "log":
        if lo <= 0:
            raise ConfigError(f"key 'min' in {where} must be positive for log spacing")
        values = np.geomspace(lo, hi, count)
    else:
        values = np.linspace(lo, hi, count)
    return name, values


def _cmd_sweep(args) -> int:
    cfg_path = Path(args.config)
    cfg = _load_json(cfg_path)
    scn = build_scenario(cfg, cfg_path.parent, extra_keys={"sweep"})
    if not isinstance(scn.profile, TanhProfile):
        raise ConfigError("sweep requires a tanh profile as the base scenario")
    if scn.trunc_n is None:
        raise ConfigError("sweep scenarios use 'truncation_multiplier', not 't_span'")
    sweep = cfg.get("sweep")
    if not isinstance(sweep, dict):
        raise ConfigError("missing key 'sweep' in config")
    _check_keys(sweep, {"axes"}, "sweep")
    axes = sweep.get("axes")
    if not isinstance(axes, list) or not 1 <= len(axes) <= 2:
        raise ConfigError("key 'axes' in sweep must list 1 or 2 axis objects")
    parsed = [_parse_axis(spec, i) for i, spec in enumerate(axes)]
    names = [name for name, _ in parsed]
    if len(set(names)) != len(names):
        raise ConfigError("sweep axes must use distinct parameters")

    base = scn.profile
    payloads = []
    cells = []
    axis1_values = parsed[0][1]
    axis2_values = parsed[1][1] if len(parsed) == 2 else None
    for v1 in axis1_values:
        for v2 in (axis2_values if axis2_values is not None else [None]):
            assignment = {names[0]: float(v1)}
            if v2 is not None:
                assignment[names[1]] = float(v2)
            omega_plus = base.omega_plus
            d = base.d
            if "omega_ratio" in assignment:
                omega_plus = assignment["omega_ratio"] * base.omega_minus
            if "omega_minus_d" in assignment:
                d = assignment["omega_minus_d"] / base.omega_minus
            payloads.append({
                "omega_minus": base.omega_minus, "omega_plus": omega_plus,
                "omega0": base.omega0, "d": d, "trunc_n": scn.trunc_n,
                "mass": scn.mass, "rtol": scn.rtol, "atol": scn.atol,
                "ppp": scn.points_per_period,
            })
            cells.append((float(v1), None if v2 is None else float(v2)))

    if args.jobs <= 1:
        results = [_sweep_cell(p) for p in payloads]
    else:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_sweep_cell, payloads, chunksize=1))

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    col_a1, col_a2, col_s, col_log, col_reason = [], [], [], [], []
    for (v1, v2), (s_val, reason) in zip(cells, results):
        if -1e-12 <= s_val < 0.0:  # numerical floor of the non-negativity invariant
            s_val = 0.0
        col_a1.append(v1)
        col_a2.append("" if v2 is None else _fmt(v2))
        col_s.append(s_val)
        col_log.append(math.log10(s_val) if s_val > 0 else float("nan"))
        col_reason.append(reason)
    _write_csv(out / "sweep.csv",
               ["axis1", "axis2", "terminal_S", "log10_terminal_S", "reason"],
               [col_a1, col_a2, col_s, col_log, col_reason])

    if not args.no_figures:
        from .plotting import sweep_figure
        log_arr = np.array(col_log, dtype=float)
        sweep_figure(names[0], axis1_values,
                     names[1] if len(names) == 2 else None,
                     axis2_values, log_arr, str(out / "sweep.png"))
        print(f"wrote {out / 'sweep.png'}")
    return 0


# ---------------------------------------------------------------- analytic


def _add_tanh_arguments(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--omega0", type=float, help="carrier frequency")
    sub.add_argument("--eps-minus", type=float, dest="eps_minus",
                     help="early-time modulation depth")
    sub.add_argument("--eps-plus", type=float, dest="eps_plus",
                     help="late-time modulation depth")
    sub.add_argument("--omega-minus", type=float, dest="omega_minus",
                     help="early-time frequency (alternative to eps settings)")
    sub.add_argument("--omega-plus", type=float, dest="omega_plus",
                     help="late-time frequency (alternative to eps settings)")
    sub.add_argument("--d", type=float, help="switching duration")


def _tanh_from_args(ns) -> TanhProfile:
    has_eps = ns.eps_minus is not None or ns.eps_plus is not None
    has_omega = ns.omega_minus is not None or ns.omega_plus is not None
    if has_eps and has_omega:
        raise ConfigError("give either --eps-minus/--eps-plus or "
                          "--omega-minus/--omega-plus, not both")
    try:
        if has_eps:
            for key in ("omega0", "eps_minus", "eps_plus", "d"):
                if getattr(ns, key) is None:
                    raise ConfigError(f"missing parameter '--{key.replace('_', '-')}'")
            return TanhProfile(omega0=ns.omega0, eps_minus=ns.eps_minus,
                               eps_plus=ns.eps_plus, d=ns.d)
        for key in ("omega0", "omega_minus", "omega_plus", "d"):
            if getattr(ns, key) is None:
                raise ConfigError(f"missing parameter '--{key.replace('_', '-')}'")
        return TanhProfile.from_omegas(omega_minus=ns.omega_minus,
                                       omega_plus=ns.omega_plus,
                                       omega0=ns.omega0, d=ns.d)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _print_json(obj: dict) -> int:
    print(json.dumps(obj, sort_keys=True))
    return 0


def _cmd_analytic_mode(ns) -> int:
    profile = _tanh_from_args(ns)
    g = exact_mode(profile, ns.t, ns.mass)
    g_minus = 2.0 * ns.mass * profile.omega_minus * abs(g) ** 2
    return _print_json({"t": ns.t, "re_g": g.real, "im_g": g.imag,
                        "g_minus": g_minus})


def _cmd_analytic_bogoliubov(ns) -> int:
    profile = _tanh_from_args(ns)
    coeffs = bogoliubov(profile)
    alpha_sq_closed, beta_sq_closed = bogoliubov_magnitudes(profile)
    return _print_json({
        "alpha_re": coeffs.alpha.real, "alpha_im": coeffs.alpha.imag,
        "beta_re": coeffs.beta.real, "beta_im": coeffs.beta.imag,
        "alpha_sq": coeffs.alpha_sq, "beta_sq": coeffs.beta_sq,
        "alpha_sq_closed_form": alpha_sq_closed,
        "beta_sq_closed_form": beta_sq_closed,
        "identity": coeffs.alpha_sq - coeffs.beta_sq,
    })


def _cmd_analytic_terminal(ns) -> int:
    profile = _tanh_from_args(ns)
    candidates = terminal_sfactor(profile)
    return _print_json({"eq_Sfactor": candidates.eq_Sfactor,
                        "eq_E_infty": candidates.eq_E_infty})


def _cmd_analytic_sudden(ns) -> int:
    if ns.ratio is not None:
        if ns.omega_minus is not None or ns.omega_plus is not None:
            raise ConfigError("give --ratio or --omega-minus/--omega-plus, not both")
        if ns.ratio <= 0:
            raise ConfigError("parameter '--ratio' must be positive")
        wm, wp = 1.0, ns.ratio
    else:
        if ns.omega_minus is None or ns.omega_plus is None:
            raise ConfigError("missing parameter '--ratio' (or --omega-minus and "
                              "--omega-plus)")
        wm, wp = ns.omega_minus, ns.omega_plus
    try:
        return _print_json({"S": sudden_jump_sfactor(wm, wp)})
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _cmd_analytic_large_ratio(ns) -> int:
    try:
        return _print_json({"S": large_ratio_sfactor(ns.wd)})
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


# ---------------------------------------------------------------- reconstruct


_RECON_KEYS = {"omega_I", "omega_start", "thermal"}


def _cmd_reconstruct(args) -> int:
    cfg_path = Path(args.config)
    cfg = _load_json(cfg_path)
    _check_keys(cfg, _RECON_KEYS, "config")
    omega_i = _get_number(cfg, "omega_I", "config", positive=True)
    omega_start = _get_number(cfg, "omega_start", "config", positive=True)
    thermal = cfg.get("thermal")
    if not isinstance(thermal, dict):
        raise ConfigError("missing key 'thermal' in config (object with exactly one "
                          "of epsilon|T0|S_ent)")
    _check_keys(thermal, {"epsilon", "T0", "S_ent"}, "thermal")
    if len(thermal) != 1:
        raise ConfigError("key 'thermal' in config must hold exactly one of "
                          "epsilon|T0|S_ent")
    kind = next(iter(thermal))
    value = _get_number(thermal, kind, "thermal", positive=True)
    if kind == "epsilon":
        eps = value
    elif kind == "T0":
        eps = omega_i / value
    else:
        eps = eps_from_entropy(value)

    t, big_omega, omega_prime = _read_csv_columns(Path(args.omega_schedule), 3,
                                                  "omega-schedule")
    try:
        result = reconstruct_from_omega_prime(t, big_omega, omega_prime,
                                              omega_i, omega_start)
    except ValueError as exc:
        raise ConfigError(f"omega-schedule invalid: {exc}") from exc

    big_omega = np.maximum(big_omega, 0.0)
    omega_eff = result.omega + big_omega
    temp = omega_eff / eps

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    _write_csv(out / "reconstruction.csv",
               ["t", "omega", "g_minus", "dg_minus", "Omega", "omega_eff", "T"],
               [result.t, result.omega, result.g_minus, result.dg_minus,
                big_omega, omega_eff, temp])
    if not args.no_figures:
        from .plotting import reconstruction_figure
        t0_temp = omega_i / eps
        reconstruction_figure(result.t, result.omega, temp / t0_temp,
                              str(out / "reconstruction.png"))
        print(f"wrote {out / 'reconstruction.png'}")
    return 0


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="oscsqueeze",
        description="Frequency-modulated oscillator laboratory: squeezing, "
                    "nonadiabaticity, and thermodynamics.",
    )
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="integrate one scenario")
    p_sim.add_argument("--config", required=True, help="scenario JSON file")
    p_sim.add_argument("--out", required=True, help="output directory")
    p_sim.add_argument("--format", choices=("csv", "json"), default="csv")
    p_sim.add_argument("--no-figures", action="store_true",
                       help="skip figure rendering")
    p_sim.set_defaults(func=_cmd_simulate)

    p_sweep = sub.add_parser("sweep", help="terminal-S parameter sweep")
    p_sweep.add_argument("--config", required=True, help="sweep JSON file")
    p_sweep.add_argument("--out", required=True, help="output directory")
    p_sweep.add_argument("--jobs", type=int, default=1,
                         help="concurrent worker processes")
    p_sweep.add_argument("--no-figures", action="store_true",
                         help="skip figure rendering")
    p_sweep.set_defaults(func=_cmd_sweep)

    p_an = sub.add_parser("analytic", help="closed-form values as JSON")
    an_sub = p_an.add_subparsers(dest="which", required=True)

    p_mode = an_sub.add_parser("mode", help="exact mode function at one time")
    _add_tanh_arguments(p_mode)
    p_mode.add_argument("--t", type=float, required=True, help="evaluation time")
    p_mode.add_argument("--mass", type=float, default=1.0)
    p_mode.set_defaults(func=_cmd_analytic_mode)

    p_bog = an_sub.add_parser("bogoliubov", help="mode-mixing coefficients")
    _add_tanh_arguments(p_bog)
    p_bog.set_defaults(func=_cmd_analytic_bogoliubov)

    p_term = an_sub.add_parser("terminal", help="terminal squeezing candidates")
    _add_tanh_arguments(p_term)
    p_term.set_defaults(func=_cmd_analytic_terminal)

    p_sud = an_sub.add_parser("sudden", help="instantaneous-switch limit")
    p_sud.add_argument("--ratio", type=float, help="frequency ratio")
    p_sud.add_argument("--omega-minus", type=float, dest="omega_minus")
    p_sud.add_argument("--omega-plus", type=float, dest="omega_plus")
    p_sud.set_defaults(func=_cmd_analytic_sudden)

    p_lr = an_sub.add_parser("large-ratio", help="thermal-form limit")
    p_lr.add_argument("--wd", type=float, required=True,
                      help="omega_minus times duration")
    p_lr.set_defaults(func=_cmd_analytic_large_ratio)

    p_rec = sub.add_parser("reconstruct",
                           help="recover omega(t) from an Omega schedule")
    p_rec.add_argument("--config", required=True, help="reconstruction JSON file")
    p_rec.add_argument("--omega-schedule", required=True, dest="omega_schedule",
                       help="CSV protocol with columns t, Omega, omega_prime")
    p_rec.add_argument("--out", required=True, help="output directory")
    p_rec.add_argument("--no-figures", action="store_true",
                       help="skip figure rendering")
    p_rec.set_defaults(func=_cmd_reconstruct)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
        return ns.func(ns)
    except (ConfigError, PoleError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (IntegrationError, ConstraintViolationError, SeriesConvergenceError,
            ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

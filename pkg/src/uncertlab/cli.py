"""Scenario-driven command line: configs in, reports and data files out.

A scenario is a single JSON object naming one subcommand plus its state,
grid, and parameters; a config file holds one scenario or a list of them.
Every run writes a JSON report and a bound-check CSV (plus per-command
series files) into the output directory, atomically, and the same
scenario with the same seed reproduces every file byte for byte.

Exit codes: 0 when every bound check passes, 2 when any physics bound
fails, 1 on usage errors (bad flags, bad schema, unreadable files).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import re
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .arthurs_kelly import (
    AKParams,
    ak_analytic_variances,
    ak_evolve,
    ak_gamma_study,
    ak_joint_distribution,
)
from .concentration import (
    PeriodicSetFunction,
    largest_a0,
    min_area_for_confidence,
    optimal_localization,
    periodic_commutator,
)
from .covariant import (
    check_covariant_state_ur,
    gt_from_T,
    husimi,
    inaccuracy_measures,
    werner_constant_search,
    WERNER_DISTANCE_CONSTANT,
)
from .errors import UncertLabError, UsageError
from .grids import GridSpec, WaveFunction, gridspec_to_dict
from .reporting import (
    BoundCheck,
    Report,
    TAGS,
    ceiling_check,
    floor_check,
    write_checks_csv,
    write_plotdata,
    write_report_json,
    write_series_csv,
)
from .sequential import build_instrument, disturbance_report, probe_grid, sequential_joint
from .states import box, gaussian, pure_density
from .stats import (
    check_overall_width_ur,
    check_preparation_ur,
    momentum_density,
    position_density,
)

SUBCOMMANDS = (
    "prep-ur",
    "overall-width",
    "landau-pollak",
    "periodic",
    "covariant",
    "husimi",
    "werner-constant",
    "sequential",
    "arthurs-kelly",
    "suite",
)

_NAME_RE = re.compile(r"[A-Za-z0-9][A-Za-z0-9_.-]*")

_TOP_KEYS = {"name", "command", "hbar", "seed", "grid", "state", "params"}

#: default (n_points, extent) per subcommand; the three-axis model is
#: capped at 64 points per axis, everything else runs on 512
_DEFAULT_GRID = {cmd: (512, 32.0) for cmd in SUBCOMMANDS}
_DEFAULT_GRID["arthurs-kelly"] = (64, 16.0)

_DEFAULT_AREAS = [float(v) for v in np.linspace(0.5, 8.0, 16)]
_DEFAULT_GAMMAS = [-2.0, -1.5, -1.0, -0.5, 0.0, 0.5, 1.0, 1.5, 2.0]

#: per-command parameter schema: key -> (kind, default); kinds are
#: "float", "int", "bool", "float-list"
_PARAM_SPEC: dict[str, dict[str, tuple[str, object]]] = {
    "prep-ur": {},
    "overall-width": {"eps1": ("float", 0.05), "eps2": ("float", 0.05)},
    "landau-pollak": {
        "eps1": ("float", 0.01),
        "eps2": ("float", 0.01),
        "areas": ("float-list", _DEFAULT_AREAS),
        "min_area": ("bool", False),
    },
    "periodic": {
        "a_bins": ("int", 8),
        "b_bins": ("int", 8),
        "g_fraction": ("float", 0.5),
        "h_fraction": ("float", 0.5),
    },
    "covariant": {
        "probe_a": ("float", 0.5),
        "eps1": ("float", 0.05),
        "eps2": ("float", 0.05),
    },
    "husimi": {"probe_a": ("float", 0.5), "q_stride": ("int", 4)},
    "werner-constant": {
        "basis_size": ("int", 8),
        "budget": ("int", 5000),
        "n_starts": ("int", 6),
    },
    "sequential": {
        "probe_a": ("float", 2.0),
        "lam": ("float", 1.0),
        "eps1": ("float", 0.05),
        "eps2": ("float", 0.05),
    },
    "arthurs-kelly": {
        "lam": ("float", 1.0),
        "kappa": ("float", 1.0),
        "gamma": ("float", 0.0),
        "probe1_a": ("float", 0.5),
        "probe2_a": ("float", 0.5),
        "simulate": ("bool", True),
        "gammas": ("float-list", _DEFAULT_GAMMAS),
    },
    "suite": {},
}


def _fail(where: str, msg: str) -> None:
    raise UsageError(f"{where}: {msg}")


def _check_keys(obj: dict, allowed: set, where: str) -> None:
    for key in obj:
        if key not in allowed:
            hint = ", ".join(sorted(allowed)) if allowed else "none"
            _fail(where, f"unknown key {key!r} (allowed: {hint})")


def _as_float(value, key: str, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        _fail(where, f"{key!r} must be a number, got {value!r}")
    v = float(value)
    if not math.isfinite(v):
        _fail(where, f"{key!r} must be finite, got {value!r}")
    return v


def _as_int(value, key: str, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        _fail(where, f"{key!r} must be an integer, got {value!r}")
    return int(value)


def _validate_state(spec, where: str) -> dict:
    if not isinstance(spec, dict):
        _fail(where, "state must be an object")
    kind = spec.get("kind", "gaussian")
    if kind == "gaussian":
        _check_keys(spec, {"kind", "a", "b", "shift", "boost"}, where)
        out = {
            "kind": "gaussian",
            "a": _as_float(spec.get("a", 0.5), "a", where),
            "b": _as_float(spec.get("b", 0.0), "b", where),
            "shift": _as_float(spec.get("shift", 0.0), "shift", where),
            "boost": _as_float(spec.get("boost", 0.0), "boost", where),
        }
        if out["a"] <= 0:
            _fail(where, f"'a' must be positive, got {out['a']}")
        return out
    if kind == "box":
        _check_keys(spec, {"kind", "center", "width"}, where)
        out = {
            "kind": "box",
            "center": _as_float(spec.get("center", 0.0), "center", where),
            "width": _as_float(spec.get("width", 4.0), "width", where),
        }
        if out["width"] <= 0:
            _fail(where, f"'width' must be positive, got {out['width']}")
        return out
    _fail(where, f"unknown state kind {kind!r} (allowed: gaussian, box)")


def _validate_params(command: str, params, where: str) -> dict:
    if not isinstance(params, dict):
        _fail(where, "params must be an object")
    spec = _PARAM_SPEC[command]
    _check_keys(params, set(spec), where)
    out = {}
    for key, (kind, default) in spec.items():
        if key not in params:
            out[key] = default
            continue
        value = params[key]
        if kind == "float":
            out[key] = _as_float(value, key, where)
        elif kind == "int":
            out[key] = _as_int(value, key, where)
        elif kind == "bool":
            if not isinstance(value, bool):
                _fail(where, f"{key!r} must be a boolean, got {value!r}")
            out[key] = value
        elif kind == "float-list":
            if not isinstance(value, (list, tuple)) or not value:
                _fail(where, f"{key!r} must be a non-empty list of numbers")
            out[key] = [_as_float(v, key, where) for v in value]
    return out


def validate_scenario(scenario) -> dict:
    """Normalize one scenario object, filling defaults; usage error if invalid."""
    if not isinstance(scenario, dict):
        raise UsageError("scenario must be a JSON object")
    name = scenario.get("name")
    where = f"scenario {name!r}" if isinstance(name, str) else "scenario"
    _check_keys(scenario, _TOP_KEYS, where)

    command = scenario.get("command")
    if command not in SUBCOMMANDS:
        _fail(where, f"'command' must be one of {', '.join(SUBCOMMANDS)}; got {command!r}")
    if name is None:
        name = command
    if not isinstance(name, str) or not _NAME_RE.fullmatch(name):
        _fail(where, f"'name' must match {_NAME_RE.pattern}, got {name!r}")

    hbar = _as_float(scenario.get("hbar", 1.0), "hbar", where)
    if hbar <= 0:
        _fail(where, f"'hbar' must be positive, got {hbar}")
    seed = _as_int(scenario.get("seed", 0), "seed", where)
    if not 0 <= seed < 2**32:
        _fail(where, f"'seed' must lie in [0, 2**32), got {seed}")

    grid_spec = scenario.get("grid", {})
    if not isinstance(grid_spec, dict):
        _fail(where, "'grid' must be an object")
    _check_keys(grid_spec, {"n", "extent"}, f"{where}: grid")
    dn, dext = _DEFAULT_GRID[command]
    n = _as_int(grid_spec.get("n", dn), "n", f"{where}: grid")
    extent = _as_float(grid_spec.get("extent", dext), "extent", f"{where}: grid")
    if not (16 <= n <= 8192 and n % 2 == 0):
        _fail(where, f"grid 'n' must be even and in [16, 8192], got {n}")
    if extent <= 0:
        _fail(where, f"grid 'extent' must be positive, got {extent}")

    state = scenario.get("state", {"kind": "gaussian"})
    state = _validate_state(state, f"{where}: state")
    params = _validate_params(command, scenario.get("params", {}), f"{where}: params")
    return {
        "name": name,
        "command": command,
        "hbar": hbar,
        "seed": seed,
        "grid": {"n": n, "extent": extent},
        "state": state,
        "params": params,
    }


def _grid_from(scn: dict) -> GridSpec:
    return GridSpec.centered(scn["grid"]["n"], scn["grid"]["extent"], hbar=scn["hbar"])


def _state_from(scn: dict, grid: GridSpec) -> WaveFunction:
    spec = scn["state"]
    if spec["kind"] == "gaussian":
        return gaussian(grid, spec["a"], b=spec["b"], boost=spec["boost"], shift=spec["shift"])
    return box(grid, spec["center"], spec["width"])


def _provenance(scn: dict, grid: GridSpec) -> dict:
    return {
        "command": scn["command"],
        "hbar": scn["hbar"],
        "seed": scn["seed"],
        "grid": gridspec_to_dict(grid),
        "state": scn["state"],
        "params": scn["params"],
    }


def _floats(d: dict) -> dict:
    return {k: float(v) for k, v in d.items()}


def _path(outdir: str, name: str, suffix: str) -> str:
    return os.path.join(outdir, f"{name}.{suffix}")


def _run_prep_ur(scn: dict, outdir: str) -> Report:
    grid = _grid_from(scn)
    psi = _state_from(scn, grid)
    r = check_preparation_ur(psi)
    check = BoundCheck(
        tag="prep.stddev-product", lhs=r.product, rhs=r.bound,
        passed=r.passed, margin=r.margin,
    )
    return Report(
        name=scn["name"],
        params=_provenance(scn, grid),
        quantities=_floats(
            {"delta_q": r.delta_q, "delta_p": r.delta_p, "product": r.product, "bound": r.bound}
        ),
        checks=(check,),
    )


def _run_overall_width(scn: dict, outdir: str) -> Report:
    grid = _grid_from(scn)
    psi = _state_from(scn, grid)
    p = scn["params"]
    r = check_overall_width_ur(psi, p["eps1"], p["eps2"])
    checks = (
        BoundCheck(
            tag="prep.width-product", lhs=r.product, rhs=r.bound,
            passed=r.passed, margin=r.product - r.bound,
        ),
        BoundCheck(
            tag="prep.width-product-sharp", lhs=r.product, rhs=r.sharp_bound,
            passed=r.passed_sharp, margin=r.product - r.sharp_bound,
        ),
    )
    return Report(
        name=scn["name"],
        params=_provenance(scn, grid),
        quantities=_floats(
            {
                "width_q": r.width_q,
                "width_p": r.width_p,
                "product": r.product,
                "bound": r.bound,
                "sharp_bound": r.sharp_bound,
            }
        ),
        checks=checks,
    )


def _run_landau_pollak(scn: dict, outdir: str) -> Report:
    grid = _grid_from(scn)
    p = scn["params"]
    two_pi_h = 2.0 * math.pi * grid.hbar
    rows = []
    seen = set()
    for s in p["areas"]:
        if s <= 0:
            _fail(f"scenario {scn['name']!r}", f"areas must be positive, got {s}")
        side = math.sqrt(s * two_pi_h)
        res = largest_a0(grid, (-side / 2, side / 2), (-side / 2, side / 2))
        key = (res.count_x, res.count_y)
        if key in seen:
            continue
        seen.add(key)
        realized = res.length_x * res.length_y / two_pi_h
        rows.append((realized, res.a0, 1.0 + math.sqrt(res.a0)))
    rows.sort(key=lambda r: r[0])

    # two-route consistency at one mid-sweep pair
    side = math.sqrt(2.0 * two_pi_h)
    opt = optimal_localization(grid, (-side / 2, side / 2), (-side / 2, side / 2))
    checks = [
        ceiling_check("lp.probsum", opt.value, 1.0 + math.sqrt(opt.a0), rel_tol=1e-6)
    ]
    quantities = {
        "probsum_max": opt.value,
        "probsum_bound": 1.0 + math.sqrt(opt.a0),
        "n_area_points": float(len(rows)),
    }
    if p["min_area"]:
        ma = min_area_for_confidence(grid, p["eps1"], p["eps2"])
        floor = two_pi_h * (1.0 - p["eps1"] - p["eps2"]) ** 2
        checks.append(floor_check("lp.area-floor", ma, floor))
        quantities["min_area"] = ma
        quantities["min_area_over_2pi_hbar"] = ma / two_pi_h

    headers = ["area_over_2pi_hbar", "a0", "probsum_bound"]
    write_series_csv(_path(outdir, scn["name"], "curve.csv"), headers, rows)
    write_plotdata(
        _path(outdir, scn["name"], "curve.dat"), headers, [rows],
        comments=[TAGS["lp.probsum"]],
    )
    return Report(
        name=scn["name"],
        params=_provenance(scn, grid),
        quantities=_floats(quantities),
        checks=tuple(checks),
    )


def _run_periodic(scn: dict, outdir: str) -> Report:
    grid = _grid_from(scn)
    p = scn["params"]
    for key in ("a_bins", "b_bins"):
        if p[key] < 1:
            _fail(f"scenario {scn['name']!r}", f"{key!r} must be >= 1, got {p[key]}")
    for key in ("g_fraction", "h_fraction"):
        if not (0.0 < p[key] < 1.0):
            _fail(f"scenario {scn['name']!r}", f"{key!r} must lie in (0, 1), got {p[key]}")
    a = p["a_bins"] * grid.dx
    b = p["b_bins"] * grid.dp
    g = PeriodicSetFunction(period=a, intervals=((0.0, p["g_fraction"] * a),))
    h = PeriodicSetFunction(period=b, intervals=((0.0, p["h_fraction"] * b),))
    res = periodic_commutator(grid, g, h)
    checks = ()
    if res.predicted_commuting:
        checks = (ceiling_check("periodic.commute", res.norm, 1e-6),)
    return Report(
        name=scn["name"],
        params=_provenance(scn, grid),
        quantities=_floats(
            {
                "commutator_norm": res.norm,
                "period_ratio": res.ratio,
                "predicted_commuting": float(res.predicted_commuting),
                "x_period": a,
                "p_period": b,
            }
        ),
        checks=checks,
    )


def _run_covariant(scn: dict, outdir: str) -> Report:
    grid = _grid_from(scn)
    p = scn["params"]
    psi = _state_from(scn, grid)
    obs = gt_from_T(pure_density(gaussian(grid, p["probe_a"])))
    rep = inaccuracy_measures(obs, p["eps1"], p["eps2"])
    sur = check_covariant_state_ur(psi, obs)
    quantities = {
        "q_noise_variance": rep.q.noise_variance,
        "q_resolution_width": rep.q.resolution_width,
        "q_standard_error": rep.q.standard_error,
        "q_distance": rep.q.distance,
        "q_error_bar_floor": rep.q.error_bar_floor,
        "p_noise_variance": rep.p.noise_variance,
        "p_resolution_width": rep.p.resolution_width,
        "p_standard_error": rep.p.standard_error,
        "p_distance": rep.p.distance,
        "p_error_bar_floor": rep.p.error_bar_floor,
        "spread_q": sur.spread_q,
        "spread_p": sur.spread_p,
        "spread_product": sur.product,
    }
    return Report(
        name=scn["name"],
        params=_provenance(scn, grid),
        quantities=_floats(quantities),
        checks=rep.checks + (sur.check,),
        notes={"conjectures": _floats(rep.conjecture_log)},
    )


def _run_husimi(scn: dict, outdir: str) -> Report:
    grid = _grid_from(scn)
    p = scn["params"]
    if p["q_stride"] < 1:
        _fail(f"scenario {scn['name']!r}", f"'q_stride' must be >= 1, got {p['q_stride']}")
    psi = _state_from(scn, grid)
    obs = gt_from_T(pure_density(gaussian(grid, p["probe_a"])))
    dens = husimi(psi, obs, q_stride=p["q_stride"])
    rows = []
    blocks = []
    for i, q in enumerate(dens.q_coords):
        block = [
            (float(q), float(pp), float(w))
            for pp, w in zip(dens.p_coords, dens.weights[i])
        ]
        blocks.append(block)
        rows.extend(block)
    headers = ["q", "p", "density"]
    write_series_csv(_path(outdir, scn["name"], "density.csv"), headers, rows)
    write_plotdata(
        _path(outdir, scn["name"], "density.dat"), headers, blocks,
        comments=["phase-space density on the scaled outcome lattice"],
    )
    quantities = {
        "mass": dens.total(),
        "n_q": float(len(dens.q_coords)),
        "n_p": float(len(dens.p_coords)),
    }
    tv_q, tv_p = dens.marginal_errors()
    if tv_q is not None:
        quantities["q_marginal_tv"] = tv_q
    if tv_p is not None:
        quantities["p_marginal_tv"] = tv_p
    return Report(
        name=scn["name"],
        params=_provenance(scn, grid),
        quantities=_floats(quantities),
        checks=(),
    )


def _run_werner(scn: dict, outdir: str) -> Report:
    grid = _grid_from(scn)
    p = scn["params"]
    res = werner_constant_search(
        grid,
        basis_size=p["basis_size"],
        budget=p["budget"],
        seed=scn["seed"],
        n_starts=p["n_starts"],
    )
    write_series_csv(
        _path(outdir, scn["name"], "convergence.csv"),
        ["start", "n_evals", "value", "best_so_far"],
        [(si, ne, float(v), float(b)) for si, ne, v, b in res.history],
    )
    excited = 1.0 - float(res.coeffs[0]) ** 2
    quantities = {
        "c_est": res.c_est,
        "n_evals": float(res.n_evals),
        "converged": float(res.converged),
        "excited_mass": excited,
        "reference": WERNER_DISTANCE_CONSTANT * grid.hbar,
        "rel_err_vs_reference": abs(res.c_est - WERNER_DISTANCE_CONSTANT * grid.hbar)
        / (WERNER_DISTANCE_CONSTANT * grid.hbar),
    }
    return Report(
        name=scn["name"],
        params=_provenance(scn, grid),
        quantities=_floats(quantities),
        checks=(res.check,),
    )


def _run_sequential(scn: dict, outdir: str) -> Report:
    grid = _grid_from(scn)
    p = scn["params"]
    if p["lam"] <= 0:
        _fail(f"scenario {scn['name']!r}", f"'lam' must be positive, got {p['lam']}")
    psi = _state_from(scn, grid)
    probe = gaussian(probe_grid(grid, p["lam"]), p["probe_a"])
    inst = build_instrument(probe, p["lam"], grid)
    rep = disturbance_report(inst, psi, p["eps1"], p["eps2"])
    joint = sequential_joint(inst, psi)

    m1 = inst.measure(psi)
    write_series_csv(
        _path(outdir, scn["name"], "m1.csv"), ["q", "density"],
        [(float(c), float(w)) for c, w in zip(m1.coords, m1.weights)],
    )
    post = rep.post_momentum
    write_series_csv(
        _path(outdir, scn["name"], "m2.csv"), ["p", "density"],
        [(float(c), float(w)) for c, w in zip(post.coords, post.weights)],
    )
    tradeoff = [(c.tag, c.lhs, c.rhs, int(c.passed)) for c in rep.checks]
    tradeoff += [
        (f"conjecture:{k}", float(v), "", "")
        for k, v in sorted(rep.conjecture_log.items())
    ]
    write_series_csv(
        _path(outdir, scn["name"], "tradeoff.csv"),
        ["quantity", "lhs", "rhs", "passed"], tradeoff,
    )
    tv_q, tv_p = joint.marginal_errors()
    quantities = {
        "variance_added": rep.variance_added,
        "stderr_product": rep.stderr_product,
        "distance_product": rep.distance_product,
        "error_bar_product": rep.error_bar_product,
        "completeness_defect": inst.completeness_defect,
        "joint_mass": joint.total(),
        "q_marginal_tv": tv_q,
        "p_marginal_tv": tv_p,
    }
    return Report(
        name=scn["name"],
        params=_provenance(scn, grid),
        quantities=_floats(quantities),
        checks=rep.checks,
        notes={"conjectures": _floats(rep.conjecture_log)},
    )


def _run_arthurs_kelly(scn: dict, outdir: str) -> Report:
    grid = _grid_from(scn)
    p = scn["params"]
    psi = _state_from(scn, grid)
    probe1 = gaussian(grid, p["probe1_a"])
    probe2 = gaussian(grid, p["probe2_a"])
    hbar = grid.hbar
    single = ak_analytic_variances(AKParams(p["lam"], p["kappa"], p["gamma"]), probe1, probe2)
    study = ak_gamma_study(
        p["gammas"], p["lam"], p["kappa"], probe1, probe2,
        psi=psi if p["simulate"] else None,
    )
    rows = []
    for row in study.rows:
        rep_g = ak_analytic_variances(
            AKParams(p["lam"], p["kappa"], row.gamma), probe1, probe2
        )
        rows.append(
            (
                row.gamma, row.var_mu, row.var_nu, rep_g.quality, rep_g.disturbance,
                row.product, hbar**2 / 4.0, int(row.passed),
                "" if row.sim_var_q is None else float(row.sim_var_q),
                "" if row.sim_var_p is None else float(row.sim_var_p),
            )
        )
    headers = [
        "gamma", "var_mu", "var_nu", "quality", "disturbance",
        "product", "product_floor", "passed", "sim_var_q", "sim_var_p",
    ]
    write_series_csv(_path(outdir, scn["name"], "gamma.csv"), headers, rows)
    write_plotdata(
        _path(outdir, scn["name"], "gamma.dat"),
        ["gamma", "var_mu", "var_nu", "product"],
        [[(r[0], r[1], r[2], r[5]) for r in rows]],
        comments=[TAGS["ak.spread-product"]],
    )
    checks = list(single.checks)
    for row in study.rows:
        checks.append(floor_check("ak.spread-product", row.product, hbar**2 / 4.0))
    if study.gamma_neg1_check is not None:
        checks.append(study.gamma_neg1_check)
    rel_errs = [
        max(row.sim_rel_err_q, row.sim_rel_err_p)
        for row in study.rows
        if row.sim_rel_err_q is not None
    ]
    quantities = {
        "var_mu": single.var_mu,
        "var_nu": single.var_nu,
        "quality": single.quality,
        "disturbance": single.disturbance,
        "x_ratio": single.x_ratio,
        "product": single.product,
    }
    if rel_errs:
        quantities["max_sim_rel_err"] = max(rel_errs)
    return Report(
        name=scn["name"],
        params=_provenance(scn, grid),
        quantities=_floats(quantities),
        checks=tuple(checks),
    )


def _suite_plan(seed: int, hbar: float) -> list[dict]:
    base = {"seed": seed, "hbar": hbar}
    return [
        {"name": "suite-prep-ur", "command": "prep-ur", **base},
        {"name": "suite-overall-width", "command": "overall-width", **base},
        {
            "name": "suite-landau-pollak",
            "command": "landau-pollak",
            "params": {"areas": [0.5, 1.0, 2.0, 4.0, 8.0]},
            **base,
        },
        {"name": "suite-periodic", "command": "periodic", **base},
        {"name": "suite-covariant", "command": "covariant", **base},
        {"name": "suite-husimi", "command": "husimi", "params": {"q_stride": 8}, **base},
        {
            "name": "suite-werner-constant",
            "command": "werner-constant",
            "params": {"basis_size": 6, "budget": 1500},
            **base,
        },
        {"name": "suite-sequential", "command": "sequential", **base},
        {
            "name": "suite-arthurs-kelly",
            "command": "arthurs-kelly",
            "params": {"gammas": [-1.0, 0.0, 1.0]},
            **base,
        },
    ]


def _run_suite(scn: dict, outdir: str) -> Report:
    reports = [run_scenario(s, outdir) for s in _suite_plan(scn["seed"], scn["hbar"])]
    checks = tuple(c for r in reports for c in r.checks)
    n_failed = sum(1 for c in checks if not c.passed)
    return Report(
        name=scn["name"],
        params=_provenance(scn, _grid_from(scn)),
        quantities={
            "n_scenarios": float(len(reports)),
            "n_checks": float(len(checks)),
            "n_failed": float(n_failed),
        },
        checks=checks,
        notes={"scenarios": [r.name for r in reports]},
    )


_RUNNERS = {
    "prep-ur": _run_prep_ur,
    "overall-width": _run_overall_width,
    "landau-pollak": _run_landau_pollak,
    "periodic": _run_periodic,
    "covariant": _run_covariant,
    "husimi": _run_husimi,
    "werner-constant": _run_werner,
    "sequential": _run_sequential,
    "arthurs-kelly": _run_arthurs_kelly,
    "suite": _run_suite,
}


def run_scenario(scenario: dict, out_dir: str = ".") -> Report:
    """Validate, dispatch, and write one scenario's artifacts; returns the report."""
    scn = validate_scenario(scenario)
    os.makedirs(out_dir, exist_ok=True)
    report = _RUNNERS[scn["command"]](scn, out_dir)
    write_report_json(_path(out_dir, scn["name"], "report.json"), report)
    write_checks_csv(_path(out_dir, scn["name"], "checks.csv"), list(report.checks))
    return report


class _Parser(argparse.ArgumentParser):
    # usage problems exit 1; 2 is reserved for physics-bound failures
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _comma_floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="uncertlab",
        description="Lattice checks of position-momentum uncertainty trade-offs.",
    )
    parser.add_argument("--config", help="JSON scenario file (object or list)")
    parser.add_argument("--jobs", type=int, default=1, help="parallel scenarios for batch configs")
    parser.add_argument("--out", default=argparse.SUPPRESS, help="output directory (default .)")
    parser.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="RNG seed (default 0)")
    parser.add_argument("--hbar", type=float, default=argparse.SUPPRESS, help="action scale (default 1)")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default=argparse.SUPPRESS)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--hbar", type=float, default=argparse.SUPPRESS)
    common.add_argument("--name", default=argparse.SUPPRESS)
    common.add_argument("--grid-n", type=int, dest="grid_n", default=argparse.SUPPRESS)
    common.add_argument(
        "--grid-extent", type=float, dest="grid_extent", default=argparse.SUPPRESS
    )

    state = argparse.ArgumentParser(add_help=False)
    state.add_argument("--a", type=float, default=argparse.SUPPRESS, help="Gaussian width parameter")
    state.add_argument("--b", type=float, default=argparse.SUPPRESS, help="Gaussian phase parameter")
    state.add_argument("--shift", type=float, default=argparse.SUPPRESS)
    state.add_argument("--boost", type=float, default=argparse.SUPPRESS)

    sub = parser.add_subparsers(dest="command")

    sub.add_parser("prep-ur", parents=[common, state])

    ow = sub.add_parser("overall-width", parents=[common, state])
    ow.add_argument("--eps1", type=float, default=argparse.SUPPRESS)
    ow.add_argument("--eps2", type=float, default=argparse.SUPPRESS)

    lp = sub.add_parser("landau-pollak", parents=[common])
    lp.add_argument("--eps1", type=float, default=argparse.SUPPRESS)
    lp.add_argument("--eps2", type=float, default=argparse.SUPPRESS)
    lp.add_argument("--areas", type=_comma_floats, default=argparse.SUPPRESS,
                    help="comma list, in units of 2*pi*hbar")
    lp.add_argument("--min-area", action="store_true", dest="min_area",
                    default=argparse.SUPPRESS, help="also search the smallest admissible area")

    pe = sub.add_parser("periodic", parents=[common])
    pe.add_argument("--a-bins", type=int, dest="a_bins", default=argparse.SUPPRESS)
    pe.add_argument("--b-bins", type=int, dest="b_bins", default=argparse.SUPPRESS)
    pe.add_argument("--g-fraction", type=float, dest="g_fraction", default=argparse.SUPPRESS)
    pe.add_argument("--h-fraction", type=float, dest="h_fraction", default=argparse.SUPPRESS)

    cov = sub.add_parser("covariant", parents=[common, state])
    cov.add_argument("--probe-a", type=float, dest="probe_a", default=argparse.SUPPRESS)
    cov.add_argument("--eps1", type=float, default=argparse.SUPPRESS)
    cov.add_argument("--eps2", type=float, default=argparse.SUPPRESS)

    hu = sub.add_parser("husimi", parents=[common, state])
    hu.add_argument("--probe-a", type=float, dest="probe_a", default=argparse.SUPPRESS)
    hu.add_argument("--q-stride", type=int, dest="q_stride", default=argparse.SUPPRESS)

    we = sub.add_parser("werner-constant", parents=[common])
    we.add_argument("--basis-size", type=int, dest="basis_size", default=argparse.SUPPRESS)
    we.add_argument("--budget", type=int, default=argparse.SUPPRESS)
    we.add_argument("--n-starts", type=int, dest="n_starts", default=argparse.SUPPRESS)

    se = sub.add_parser("sequential", parents=[common, state])
    se.add_argument("--probe-a", type=float, dest="probe_a", default=argparse.SUPPRESS)
    se.add_argument("--lambda", type=float, dest="lam", default=argparse.SUPPRESS)
    se.add_argument("--epsilons", type=_comma_floats, default=argparse.SUPPRESS,
                    help="eps1,eps2")

    ak = sub.add_parser("arthurs-kelly", parents=[common, state])
    ak.add_argument("--lambda", type=float, dest="lam", default=argparse.SUPPRESS)
    ak.add_argument("--kappa", type=float, default=argparse.SUPPRESS)
    ak.add_argument("--gamma", type=float, default=argparse.SUPPRESS)
    ak.add_argument("--probe1-a", type=float, dest="probe1_a", default=argparse.SUPPRESS)
    ak.add_argument("--probe2-a", type=float, dest="probe2_a", default=argparse.SUPPRESS)
    ak.add_argument("--gammas", type=_comma_floats, default=argparse.SUPPRESS)
    group = ak.add_mutually_exclusive_group()
    group.add_argument("--simulate", action="store_true", dest="simulate",
                       default=argparse.SUPPRESS)
    group.add_argument("--analytic-only", action="store_false", dest="simulate",
                       default=argparse.SUPPRESS)

    sub.add_parser("suite", parents=[common])
    return parser


def _scenario_from_args(args: argparse.Namespace) -> dict:
    scn: dict = {"command": args.command}
    if hasattr(args, "name"):
        scn["name"] = args.name
    if hasattr(args, "seed"):
        scn["seed"] = args.seed
    if hasattr(args, "hbar"):
        scn["hbar"] = args.hbar
    grid = {}
    if hasattr(args, "grid_n"):
        grid["n"] = args.grid_n
    if hasattr(args, "grid_extent"):
        grid["extent"] = args.grid_extent
    if grid:
        scn["grid"] = grid
    state = {}
    for key in ("a", "b", "shift", "boost"):
        if hasattr(args, key):
            state[key] = getattr(args, key)
    if state:
        scn["state"] = {"kind": "gaussian", **state}
    params = {}
    for key in _PARAM_SPEC[args.command]:
        if hasattr(args, key):
            params[key] = getattr(args, key)
    if hasattr(args, "epsilons"):
        eps = args.epsilons
        if len(eps) != 2:
            raise UsageError(f"--epsilons needs exactly two values, got {len(eps)}")
        params["eps1"], params["eps2"] = eps[0], eps[1]
    if params:
        scn["params"] = params
    return scn


def _load_config(path: str) -> list[dict]:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read config {path!r}: {exc}")
    except json.JSONDecodeError as exc:
        raise UsageError(f"config {path!r} is not valid JSON: {exc}")
    scenarios = data if isinstance(data, list) else [data]
    if not scenarios:
        raise UsageError(f"config {path!r} holds no scenarios")
    return scenarios


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    outdir = getattr(args, "out", ".")
    try:
        if args.config is not None:
            if args.command is not None:
                raise UsageError("give either --config or a subcommand, not both")
            raw = _load_config(args.config)
            # flag-level seed/hbar act as defaults for scenarios omitting them
            for s in raw:
                if isinstance(s, dict):
                    if hasattr(args, "seed"):
                        s.setdefault("seed", args.seed)
                    if hasattr(args, "hbar"):
                        s.setdefault("hbar", args.hbar)
            scenarios = [validate_scenario(s) for s in raw]
            names = [s["name"] for s in scenarios]
            if len(set(names)) != len(names):
                raise UsageError("scenario names in a batch must be distinct")
            jobs = max(1, int(args.jobs))
            if jobs == 1 or len(scenarios) == 1:
                reports = [run_scenario(s, outdir) for s in scenarios]
            else:
                with ThreadPoolExecutor(max_workers=jobs) as pool:
                    reports = list(pool.map(lambda s: run_scenario(s, outdir), scenarios))
        elif args.command is not None:
            reports = [run_scenario(_scenario_from_args(args), outdir)]
        else:
            parser.print_help(sys.stderr)
            return 1
    except UsageError as exc:
        print(f"uncertlab: error: {exc}", file=sys.stderr)
        return 1
    except UncertLabError as exc:
        print(f"uncertlab: error: {exc}", file=sys.stderr)
        return 1

    failed = False
    for rep in reports:
        n_pass = sum(1 for c in rep.checks if c.passed)
        print(f"{rep.name}: {n_pass}/{len(rep.checks)} checks passed")
        for c in rep.checks:
            if not c.passed:
                failed = True
                print(f"  FAIL {c.tag}: lhs={c.lhs!r} rhs={c.rhs!r}")
    return 2 if failed else 0


if __name__ == "__main__":
    sys.exit(main())

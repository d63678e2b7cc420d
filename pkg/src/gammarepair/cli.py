"""Command-line front end: ``simulate``, ``compare``, ``equivalent``, ``optimize``.

Each run reads one JSON config (or a named preset), applies flag overrides,
validates everything before doing any work and writes its outputs to
``--out``. Every JSON output embeds ``schema_version`` and the resolved
config (seed included, thread count excluded), which is enough to
reproduce the run byte for byte.

Exit codes: 0 success, 2 config error, 3 numeric or consistency error.
"""

from __future__ import annotations

import argparse
import copy
import json
import math
import os
import sys
from typing import Any

import numpy as np

from .equivalent_case import equivalent_case_orders, equivalent_rho1, variance_crossing
from .errors import ConfigError, ConsistencyError, DomainError, InsufficientSampleError, UnsupportedShapeError
from .gamma_core import shape_from_dict
from .policies import (
    SCHEMA_VERSION,
    CostSpec,
    MTConfig,
    NTConfig,
    difference_surface,
    optimize_mt,
    optimize_nt,
    reward_from_dict,
    write_surface_csv,
)
from .repair_models import RepairProcessSpec, conditional_mean_above, simulate
from .rng import RngStream
from .stochastic_orders import (
    ComparisonScenario,
    cv_curve,
    cx_curve,
    default_grid,
    icv_curve,
    icx_curve,
    lc_full_compare,
    lr_lc_increment_compare,
    mean_dominance,
    moment_curves,
    sign_crossings,
    sto_curve,
    theorem_icx_icv,
    variance_dominance,
)

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3

SUM_SHAPE = {"kind": "sum", "terms": [{"kind": "power", "alpha": 1.0, "beta": 0.5}, {"kind": "power", "alpha": 1.0, "beta": 0.75}]}
REWARD_NT = {"alpha1": 0.1, "alpha2": 0.25, "k1": 1.0, "k2": 1.0, "b1": 11.0, "c": 4.0}
REWARD_MT = {"alpha1": 0.4, "alpha2": 0.5, "k1": 1.05, "k2": 1.07, "b1": 800.0, "c": 8.0}


def _power(beta, alpha=1.0):
    return {"kind": "power", "alpha": alpha, "beta": beta}


def _scenario(shape, rho1, rho2, rate_b=1.0, period_T=1.0):
    return {"shape": shape, "rate_b": rate_b, "period_T": period_T, "rho1": rho1, "rho2": rho2}


PRESETS: dict[str, tuple[str, dict]] = {
    "fig-means-convex": ("compare", {"scenario": _scenario({"kind": "exp_growth"}, 0.95, 0.5), "moments": {"t_max": 5.0, "num": 501}}),
    "fig-means-concave": ("compare", {"scenario": _scenario({"kind": "exp_saturating"}, 0.5, 0.95), "moments": {"t_max": 10.0, "num": 1001}}),
    "fig-var-convex": ("compare", {"scenario": _scenario({"kind": "exp_growth"}, 0.95, 0.5), "moments": {"t_max": 5.0, "num": 501}}),
    "fig-var-concave": ("compare", {"scenario": _scenario({"kind": "exp_saturating"}, 0.5, 0.95), "moments": {"t_max": 10.0, "num": 1001}}),
    "fig-icx-concave": ("compare", {"scenario": _scenario(_power(0.7), 0.75, 0.75), "t": 10.5, "orders": ["icx", "theorem"]}),
    "fig-icx-convex": ("compare", {"scenario": _scenario(_power(1.1), 0.75, 0.75), "t": 10.5, "orders": ["icx", "theorem"]}),
    "fig-icv-concave": ("compare", {"scenario": _scenario(_power(0.9), 0.8, 0.78), "t": 10.5, "orders": ["icv", "theorem"]}),
    "fig-icv-convex": ("compare", {"scenario": _scenario(_power(1.1), 0.8, 0.78), "t": 10.5, "orders": ["icv", "theorem"]}),
    "fig-lc-concave": ("compare", {"scenario": _scenario(_power(0.75), 0.5, 0.4), "t": 10.2, "n": 10, "orders": ["lc", "increments"]}),
    "fig-lc-convex": ("compare", {"scenario": _scenario(_power(1.25), 0.5, 0.4), "t": 10.2, "n": 10, "orders": ["lc", "increments"]}),
    "remark4": (
        "compare",
        {"conditional_mean": {"shape": _power(2.0), "rate_b": 1.0, "period_T": 1.0, "t": 1.9, "h": 0.5, "rho_values": [0.95, 0.9], "n_reps": 1_000_000}},
    ),
    "remark4-T09": (
        "compare",
        {"conditional_mean": {"shape": _power(2.0), "rate_b": 1.0, "period_T": 0.9, "t": 1.9, "h": 0.5, "rho_values": [0.95, 0.9], "n_reps": 1_000_000}},
    ),
    "equivalent-beta2": ("equivalent", {"beta": 2.0, "rho2": 0.5, "T": 1.0, "t_values": [3.0, 3.5]}),
    "equivalent-beta1": ("equivalent", {"beta": 1.0, "rho2": 0.5, "T": 1.0, "t_values": [2.5]}),
    "equivalent-beta1.2": ("equivalent", {"beta": 1.2, "rho2": 0.3, "T": 1.0}),
    "equivalent-beta0.8": ("equivalent", {"beta": 0.8, "rho2": 0.5, "T": 1.0, "t_values": [2.0, 2.5]}),
    "nt-paper": (
        "optimize",
        {
            "policy": "nT", "shape": SUM_SHAPE, "rate_b": 1.0, "rho1": 0.5, "rho2": 0.5, "reward": REWARD_NT,
            "costs": {"repair_cost": 2.0, "replacement_cost": 25.0},
            "n_grid": list(range(1, 11)), "T_grid": {"start": 1.0, "stop": 6.0, "num": 8},
            "mc": {"n_reps": 20_000, "simpson_intervals": 20, "method": "nodewise"},
        },
    ),
    "nt-paper-rho031": (
        "optimize",
        {
            "policy": "nT", "shape": SUM_SHAPE, "rate_b": 1.0, "rho1": 0.31, "rho2": 0.5, "reward": REWARD_NT,
            "costs": {"repair_cost": 2.0, "replacement_cost": 25.0},
            "n_grid": list(range(1, 11)), "T_grid": {"start": 1.0, "stop": 6.0, "num": 8},
            "mc": {"n_reps": 20_000, "simpson_intervals": 20, "method": "nodewise"},
        },
    ),
    "mt-paper": (
        "optimize",
        {
            "policy": "MT", "shape": {"kind": "linear", "a": 1.3}, "rate_b": 0.8, "rho1": 0.9, "rho2": 0.9, "reward": REWARD_MT,
            "costs": {"repair_cost": 200.0, "preventive_cost": 1000.0, "corrective_cost": 1300.0},
            "M_grid": {"start": 1.0, "stop": "L", "num": 13}, "T_grid": {"start": 1.14, "stop": 4.0, "num": 10},
            "mc": {"n_cycles": 50_000, "substeps": 50},
        },
    ),
    "simulate-ard": (
        "simulate",
        {"spec": {"shape": SUM_SHAPE, "rate_b": 1.0, "repair": "ARD1", "rho": 0.5, "period_T": 1.0}, "horizon": 10.0, "dt": 0.05},
    ),
    "simulate-ara": (
        "simulate",
        {"spec": {"shape": SUM_SHAPE, "rate_b": 1.0, "repair": "ARA1", "rho": 0.5, "period_T": 1.0}, "horizon": 10.0, "dt": 0.05},
    ),
}


# --------------------------------------------------------------------------
# Config validation
# --------------------------------------------------------------------------

SPEC_KEYS = {"shape", "rate_b", "repair", "rho", "period_T"}
SCENARIO_KEYS = {"shape", "rate_b", "period_T", "rho1", "rho2"}
ALLOWED = {
    "simulate": {"seed", "spec", "horizon", "dt"},
    "compare": {"seed", "scenario", "t", "n", "orders", "moments", "conditional_mean"},
    "equivalent": {"seed", "beta", "rho2", "T", "t_values", "alpha", "rate_b"},
    "optimize": {"seed", "policy", "shape", "rate_b", "rho1", "rho2", "reward", "costs", "n_grid", "M_grid", "T_grid", "mc"},
}
NESTED = {
    "spec": SPEC_KEYS,
    "scenario": SCENARIO_KEYS,
    "moments": {"t_max", "num"},
    "conditional_mean": {"shape", "rate_b", "period_T", "t", "h", "rho_values", "n_reps"},
    "costs": {"repair_cost", "replacement_cost", "preventive_cost", "corrective_cost"},
    "reward": {"kind", "alpha1", "alpha2", "k1", "k2", "b1", "c", "kappa"},
}
ORDERS = {"icx", "icv", "sto", "cx", "cv", "lc", "increments", "theorem"}


def _reject_unknown(cfg: dict, allowed: set, where: str):
    extra = sorted(set(cfg) - allowed)
    if extra:
        raise ConfigError(f"unknown key(s) in {where}: {', '.join(extra)}")


def validate_keys(command: str, cfg: dict):
    if command not in ALLOWED:
        raise ConfigError(f"unknown command {command!r}")
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object")
    _reject_unknown(cfg, ALLOWED[command], "config")
    for k, keys in NESTED.items():
        if k in cfg:
            if not isinstance(cfg[k], dict):
                raise ConfigError(f"{k} must be an object")
            _reject_unknown(cfg[k], keys, k)
    if "mc" in cfg:
        pol = cfg.get("policy")
        keys = {"n_reps", "simpson_intervals", "method"} if pol == "nT" else {"n_cycles", "substeps", "block", "max_periods", "clip_negative"}
        _reject_unknown(cfg["mc"], keys, "mc")


def _need(cfg: dict, key: str, where: str = "config"):
    if key not in cfg:
        raise ConfigError(f"missing required key {key!r} in {where}")
    return cfg[key]


def _num(v, name: str) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"{name} must be a number")
    return float(v)


def _grid(g, name: str, L: float | None = None) -> list[float]:
    if isinstance(g, list):
        vals = [_num(v, name) for v in g]
    elif isinstance(g, dict):
        _reject_unknown(g, {"start", "stop", "num"}, name)
        stop = g.get("stop")
        if stop == "L":
            if L is None:
                raise ConfigError(f"{name}: 'L' only valid for threshold grids")
            stop = L
        num = g.get("num")
        if not isinstance(num, int) or num < 1:
            raise ConfigError(f"{name}.num must be a positive integer")
        vals = np.linspace(_num(g.get("start"), name), _num(stop, name), num).tolist()
    else:
        raise ConfigError(f"{name} must be a list or {{start, stop, num}}")
    if not vals:
        raise ConfigError(f"{name} must be non-empty")
    return vals


def _shape(d):
    try:
        return shape_from_dict(d)
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"bad shape description: {exc}") from exc


def _scenario_from(d: dict) -> ComparisonScenario:
    for k in SCENARIO_KEYS:
        _need(d, k, "scenario")
    return ComparisonScenario.build(_shape(d["shape"]), _num(d["rate_b"], "rate_b"), _num(d["period_T"], "period_T"),
                                    _num(d["rho1"], "rho1"), _num(d["rho2"], "rho2"))


# --------------------------------------------------------------------------
# Output helpers
# --------------------------------------------------------------------------


def _jsonable(o: Any):
    if isinstance(o, dict):
        return {str(k): _jsonable(v) for k, v in o.items()}
    if isinstance(o, (list, tuple)):
        return [_jsonable(v) for v in o]
    if isinstance(o, np.ndarray):
        return _jsonable(o.tolist())
    if isinstance(o, (np.floating,)):
        return float(o)
    if isinstance(o, (np.integer,)):
        return int(o)
    if isinstance(o, float) and not math.isfinite(o):
        return str(o)
    return o


def write_json(path: str, payload: dict):
    with open(path, "w") as fh:
        json.dump(_jsonable(payload), fh, indent=2, sort_keys=True)
        fh.write("\n")


def _envelope(command: str, cfg: dict, body: dict) -> dict:
    return {"schema_version": SCHEMA_VERSION, "command": command, "config": cfg, **body}


def _write_curve_csv(path: str, columns: dict):
    import csv

    keys = list(columns)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(keys)
        for row in zip(*(np.asarray(columns[k]) for k in keys)):
            w.writerow([repr(float(v)) for v in row])


# --------------------------------------------------------------------------
# Commands
# --------------------------------------------------------------------------


def _fmt(xs) -> str:
    return ", ".join(f"{x:.4g}" for x in xs) if len(xs) else "none"


def cmd_simulate(cfg: dict, out: str, threads: int = 1) -> dict:
    sd = _need(cfg, "spec")
    for k in SPEC_KEYS:
        _need(sd, k, "spec")
    spec = RepairProcessSpec(_shape(sd["shape"]), _num(sd["rate_b"], "rate_b"), sd["repair"], _num(sd["rho"], "rho"),
                             _num(sd["period_T"], "period_T"))
    horizon = _num(_need(cfg, "horizon"), "horizon")
    dt = _num(_need(cfg, "dt"), "dt")
    if not horizon > 0:
        raise ConfigError("horizon must be positive")
    if not 0 < dt <= spec.period_T:
        raise ConfigError("need 0 < dt <= period_T")
    traj = simulate(spec, horizon, dt, RngStream(cfg["seed"]).derive("simulate"))
    path = os.path.join(out, "trajectory.csv")
    traj.to_csv(path)
    summary = {
        "n_points": int(traj.times.size),
        "n_repairs": int(traj.repair_epochs.size),
        "repair_times": traj.times[traj.repair_epochs].tolist(),
        "final_level": float(traj.levels[-1]),
        "max_level": float(traj.levels.max()),
    }
    write_json(os.path.join(out, "simulate.json"), _envelope("simulate", cfg, {"summary": summary, "files": ["trajectory.csv"]}))
    print(f"simulated {spec.repair.value}: {summary['n_points']} points, {summary['n_repairs']} repairs, "
          f"final level {summary['final_level']:.6g}")
    return summary


def _conditional(cfg: dict, seed: int, threads: int) -> list[dict]:
    cm = cfg["conditional_mean"]
    shape = _shape(_need(cm, "shape", "conditional_mean"))
    t, h = _num(_need(cm, "t", "conditional_mean"), "t"), _num(_need(cm, "h", "conditional_mean"), "h")
    n_reps = int(_need(cm, "n_reps", "conditional_mean"))
    rows = []
    for rho in cm.get("rho_values", []):
        spec = RepairProcessSpec(shape, _num(cm.get("rate_b", 1.0), "rate_b"), "ARD1", _num(rho, "rho"),
                                 _num(cm.get("period_T", 1.0), "period_T"))
        est = conditional_mean_above(spec, t, h, n_reps, RngStream(seed).derive("conditional", repr(float(rho))), threads)
        rows.append({"rho": float(rho), "estimate": est.value, "std_error": est.std_error, "n_exceed": est.n_used})
        print(f"E[Y_t | Y_t > {h}] at t={t}, rho={rho}, T={spec.period_T}: {est.value:.4f} (se {est.std_error:.1e})")
    return rows


def cmd_compare(cfg: dict, out: str, threads: int = 1) -> dict:
    body: dict = {"verdicts": [], "files": []}
    if "conditional_mean" in cfg:
        body["conditional_mean"] = _conditional(cfg, cfg["seed"], threads)
    if "scenario" not in cfg:
        if "conditional_mean" not in cfg:
            raise ConfigError("compare needs a scenario or a conditional_mean block")
        write_json(os.path.join(out, "compare.json"), _envelope("compare", cfg, body))
        return body
    sc = _scenario_from(cfg["scenario"])
    orders = cfg.get("orders", ["icx", "icv"] if "t" in cfg else [])
    bad = set(orders) - ORDERS
    if bad:
        raise ConfigError(f"unknown order(s): {sorted(bad)}")
    if orders and "t" not in cfg:
        raise ConfigError("orders need a comparison time t")
    if "moments" in cfg:
        m = cfg["moments"]
        grid = np.linspace(0.0, _num(m.get("t_max", 10.0), "t_max"), int(m.get("num", 1001)))
        curves = moment_curves(sc, grid)
        _write_curve_csv(os.path.join(out, "moments.csv"), curves)
        body["files"].append("moments.csv")
        body["mean_dominance"] = mean_dominance(sc).to_dict()
        body["variance_dominance"] = variance_dominance(sc).to_dict()
        for key, (a, b) in {"mean": ("mean_Y", "mean_Z"), "variance": ("var_Y", "var_Z")}.items():
            d = curves[a] - curves[b]
            tol = 1e-9 * (1.0 + np.abs(curves[a]).max() + np.abs(curves[b]).max())
            body[f"{key}_crossings"] = sign_crossings(grid, d, tol)
        print(f"means: {body['mean_dominance']['result']} (Y - Z changes sign at {_fmt(body['mean_crossings'])}), "
              f"variances: {body['variance_dominance']['result']} (at {_fmt(body['variance_crossings'])})")
    if orders:
        t = _num(cfg["t"], "t")
        n = int(cfg.get("n", math.floor(t / sc.T + 1e-9)))
        dY, dZ = sc.laws(t)
        grid = None
        verdicts = []
        for o in orders:
            if o in ("icx", "icv", "sto", "cx", "cv") and grid is None:
                grid = default_grid(dY, dZ)
            if o == "icx":
                verdicts.append(icx_curve(dY, dZ, grid, "Y", "Z"))
            elif o == "icv":
                verdicts.append(icv_curve(dZ, dY, grid, "Z", "Y"))
            elif o == "sto":
                verdicts.append(sto_curve(dY, dZ, grid, "Y", "Z"))
            elif o == "cx":
                verdicts.append(cx_curve(dY, dZ, grid, "Y", "Z"))
            elif o == "cv":
                verdicts.append(cv_curve(dZ, dY, grid, "Z", "Y"))
            elif o == "lc":
                verdicts.append(lc_full_compare(sc, n, t))
            elif o == "increments":
                verdicts.extend(lr_lc_increment_compare(sc, n, t))
            elif o == "theorem":
                verdicts.extend(theorem_icx_icv(sc, t))
        for k, v in enumerate(verdicts):
            name = f"{k:02d}_{v.order.value}_{v.lhs}_vs_{v.rhs}.csv"
            if len(v.grid):
                v.to_csv(os.path.join(out, name))
                body["files"].append(name)
            body["verdicts"].append(v.to_dict(with_curve=False))
            print(f"{v.lhs} vs {v.rhs} [{v.order.value}, {v.source}]: {v.relation.value}"
                  + (f", crossings at {_fmt(v.crossings)}" if v.crossings else ""))
    write_json(os.path.join(out, "compare.json"), _envelope("compare", cfg, body))
    return body


def cmd_equivalent(cfg: dict, out: str, threads: int = 1) -> dict:
    beta = _num(_need(cfg, "beta"), "beta")
    rho2 = _num(_need(cfg, "rho2"), "rho2")
    T = _num(cfg.get("T", 1.0), "T")
    rho1 = equivalent_rho1(rho2, beta)
    body: dict = {"rho1": rho1, "rho2": rho2, "beta": beta}
    print(f"equivalent ARD1 efficiency: rho1 = {rho1:.12g}")
    if beta > 1.0:
        rep = variance_crossing(beta, rho2, T)
        body["crossing"] = rep.to_dict()
        if rep.x_star is None:
            print(f"g(2-) = {rep.g_at_two:.6g} <= 0: Var(Y_t) <= Var(Z_t) for all t")
        else:
            print(f"x* = {rep.x_star:.12g}, t* = {rep.t_star:.12g}")
    else:
        body["crossing"] = None
        body["note"] = "no crossing analysis for beta <= 1: Var(Z_t) >= Var(Y_t) holds for all t"
    body["orders"] = []
    for t in cfg.get("t_values", []):
        vs = equivalent_case_orders(beta, rho2, T, _num(t, "t"), _num(cfg.get("alpha", 1.0), "alpha"), _num(cfg.get("rate_b", 1.0), "rate_b"))
        body["orders"].append({"t": float(t), "verdicts": [v.to_dict(with_curve=False) for v in vs]})
    write_json(os.path.join(out, "equivalent.json"), _envelope("equivalent", cfg, body))
    return body


def cmd_optimize(cfg: dict, out: str, threads: int = 1) -> dict:
    policy = _need(cfg, "policy")
    if policy not in ("nT", "MT"):
        raise ConfigError("policy must be 'nT' or 'MT'")
    shape = _shape(_need(cfg, "shape"))
    b = _num(_need(cfg, "rate_b"), "rate_b")
    reward = reward_from_dict(_need(cfg, "reward"))
    costs = CostSpec(**{k: _num(v, k) for k, v in _need(cfg, "costs").items()})
    mc_cfg = dict(cfg.get("mc", {}))
    T_grid = _grid(_need(cfg, "T_grid"), "T_grid")
    if any(not T > 0 for T in T_grid):
        raise ConfigError("T_grid values must be positive")
    specs = ComparisonScenario.build(shape, b, 1.0, _num(_need(cfg, "rho1"), "rho1"), _num(_need(cfg, "rho2"), "rho2"))
    if policy == "nT":
        n_grid = _grid(_need(cfg, "n_grid"), "n_grid")
        if any(v < 1 or v != int(v) for v in n_grid):
            raise ConfigError("n_grid values must be positive integers")
        mc = NTConfig(seed=cfg["seed"], **mc_cfg)
        res = optimize_nt(specs, reward, costs, [int(v) for v in n_grid], T_grid, mc, threads)
    else:
        M_grid = _grid(_need(cfg, "M_grid"), "M_grid", reward.L)
        if any(M < 0 or M > reward.L * (1 + 1e-12) for M in M_grid):
            raise ConfigError(f"M_grid values must lie in [0, L] with L = {reward.L!r}")
        mc = MTConfig(seed=cfg["seed"], **mc_cfg)
        res = optimize_mt(specs, reward, costs, M_grid, T_grid, mc, threads)
    body: dict = {"results": {}, "files": []}
    for model, r in res.items():
        name = f"surface_{model}.csv"
        r.to_csv(os.path.join(out, name))
        body["files"].append(name)
        body["results"][model] = r.to_dict(with_surface=True)
        a1, a2, rate, se = r.best
        print(f"{model}: argmax ({r.axis1_name}, {r.axis2_name}) = ({a1:.6g}, {a2:.6g}), rate {rate:.4f} (se {se:.2g})")
    d, dse = difference_surface(res["ARD1"], res["ARA1"])
    write_surface_csv(os.path.join(out, "difference.csv"), res["ARD1"].axis1, res["ARD1"].axis2, d, dse)
    body["files"].append("difference.csv")
    body["difference"] = {
        "min": float(d.min()),
        "max": float(d.max()),
        "changes_sign": bool(d.min() < 0 < d.max()),
        "min_z": float((d / np.where(dse > 0, dse, np.inf)).min()),
    }
    body["reward"] = {"b2": getattr(reward, "b2", None), "L": reward.L}
    write_json(os.path.join(out, "optimize.json"), _envelope("optimize", cfg, body))
    return body


COMMANDS = {"simulate": cmd_simulate, "compare": cmd_compare, "equivalent": cmd_equivalent, "optimize": cmd_optimize}


# --------------------------------------------------------------------------
# Entry point
# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gammarepair", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("--config", help="JSON config file")
        s.add_argument("--preset", help=f"named preset ({', '.join(k for k, v in PRESETS.items() if v[0] == name)})")
        s.add_argument("--seed", type=int, help="global seed (overrides the config)")
        s.add_argument("--threads", type=int, default=1, help="worker threads (does not change results)")
        s.add_argument("--out", default=".", help="output directory")
    return p


def resolve_config(command: str, config_path: str | None, preset: str | None, seed: int | None) -> dict:
    cfg: dict = {}
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigError(f"unknown preset {preset!r}")
        pcmd, pcfg = PRESETS[preset]
        if pcmd != command:
            raise ConfigError(f"preset {preset!r} belongs to the {pcmd!r} command")
        cfg = copy.deepcopy(pcfg)
    if config_path is not None:
        try:
            with open(config_path) as fh:
                user = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config: {exc}") from exc
        if not isinstance(user, dict):
            raise ConfigError("config must be a JSON object")
        cfg.update(user)
    if preset is None and config_path is None:
        raise ConfigError("give --config or --preset")
    if seed is not None:
        cfg["seed"] = seed
    cfg.setdefault("seed", 0)
    if isinstance(cfg["seed"], bool) or not isinstance(cfg["seed"], int) or cfg["seed"] < 0:
        raise ConfigError("seed must be a non-negative integer")
    validate_keys(command, cfg)
    return cfg


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args.command, args.config, args.preset, args.seed)
        if args.threads < 1:
            raise ConfigError("--threads must be at least 1")
        os.makedirs(args.out, exist_ok=True)
        COMMANDS[args.command](cfg, args.out, args.threads)
    except (ConfigError, DomainError, UnsupportedShapeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ConsistencyError, InsufficientSampleError, FloatingPointError, RuntimeError) as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

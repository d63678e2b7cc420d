import json

import pytest

from gammarepair.cli import PRESETS, main

SPEC = {"shape": {"kind": "linear", "a": 1.0}, "rate_b": 1.0, "repair": "ARD1", "rho": 0.5, "period_T": 1.0}


def run(tmp_path, command, cfg, *extra, name="out"):
    p = tmp_path / f"{name}.json"
    p.write_text(json.dumps(cfg))
    out = tmp_path / name
    return main([command, "--config", str(p), "--out", str(out), *extra]), out


def test_simulate_epochs_and_summary(tmp_path):
    code, out = run(tmp_path, "simulate", {"spec": SPEC, "horizon": 10.0, "dt": 0.25, "seed": 3})
    assert code == 0
    rows = (out / "trajectory.csv").read_text().splitlines()[1:]
    rep_times = [float(r.split(",")[0]) for r in rows if r.endswith(",1")]
    assert rep_times == [float(k) for k in range(1, 11)]
    meta = json.loads((out / "simulate.json").read_text())
    assert meta["schema_version"] == 1 and meta["config"]["seed"] == 3 and "threads" not in meta["config"]


def test_simulate_bytes_reproducible(tmp_path):
    cfg = {"spec": dict(SPEC, repair="ARA1"), "horizon": 5.0, "dt": 0.1}
    _, a = run(tmp_path, "simulate", cfg, "--seed", "7", name="a")
    _, b = run(tmp_path, "simulate", cfg, "--seed", "7", "--threads", "4", name="b")
    assert (a / "trajectory.csv").read_bytes() == (b / "trajectory.csv").read_bytes()
    assert (a / "simulate.json").read_bytes() == (b / "simulate.json").read_bytes()


def test_config_errors_exit_2(tmp_path):
    assert run(tmp_path, "simulate", {"spec": SPEC, "horizon": 5.0, "dt": 2.0})[0] == 2
    assert run(tmp_path, "simulate", {"spec": SPEC, "horizon": 5.0, "dt": 0.1, "bogus": 1})[0] == 2
    assert run(tmp_path, "simulate", {"spec": dict(SPEC, extra=1), "horizon": 5.0, "dt": 0.1})[0] == 2
    assert run(tmp_path, "simulate", {"spec": dict(SPEC, rho=1.5), "horizon": 5.0, "dt": 0.1})[0] == 2
    assert main(["simulate", "--out", str(tmp_path)]) == 2
    assert main(["simulate", "--preset", "nope", "--out", str(tmp_path)]) == 2
    assert main(["simulate", "--preset", "remark4", "--out", str(tmp_path)]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["simulate", "--config", str(bad), "--out", str(tmp_path)]) == 2


def test_compare_icx(tmp_path, capsys):
    code = main(["compare", "--preset", "fig-icx-concave", "--out", str(tmp_path / "c")])
    assert code == 0
    res = json.loads((tmp_path / "c" / "compare.json").read_text())
    icx = [v for v in res["verdicts"] if v["order"] == "icx"]
    assert icx and all(v["relation"] == "LessThan" for v in icx)
    assert any(f.endswith(".csv") for f in res["files"])
    assert "LessThan" in capsys.readouterr().out


def test_compare_means_crossing(tmp_path):
    assert main(["compare", "--preset", "fig-means-convex", "--out", str(tmp_path)]) == 0
    res = json.loads((tmp_path / "compare.json").read_text())
    assert res["mean_dominance"]["result"] == "Neither" and res["mean_crossings"]
    assert (tmp_path / "moments.csv").read_text().startswith("t,mean_Y,mean_Z,var_Y,var_Z")


def test_compare_unknown_order(tmp_path):
    cfg = {"scenario": {"shape": {"kind": "power", "alpha": 1, "beta": 0.7}, "rate_b": 1, "period_T": 1, "rho1": 0.5, "rho2": 0.5},
           "t": 2.5, "orders": ["xyz"]}
    assert run(tmp_path, "compare", cfg)[0] == 2


def test_compare_conditional_mean(tmp_path):
    cfg = {"conditional_mean": {"shape": {"kind": "power", "alpha": 1, "beta": 2}, "rate_b": 1, "period_T": 1, "t": 1.9,
                                "h": 0.5, "rho_values": [0.9], "n_reps": 20000}}
    code, out = run(tmp_path, "compare", cfg)
    assert code == 0
    assert json.loads((out / "compare.json").read_text())["conditional_mean"][0]["rho"] == 0.9


def test_compare_insufficient_sample_exit_3(tmp_path):
    cfg = {"conditional_mean": {"shape": {"kind": "linear", "a": 0.01}, "rate_b": 1, "period_T": 1, "t": 0.1,
                                "h": 5.0, "rho_values": [0.9], "n_reps": 1000}}
    assert run(tmp_path, "compare", cfg)[0] == 3


def test_equivalent(tmp_path):
    assert main(["equivalent", "--preset", "equivalent-beta2", "--out", str(tmp_path)]) == 0
    res = json.loads((tmp_path / "equivalent.json").read_text())
    assert res["rho1"] == pytest.approx(0.75)
    assert res["crossing"]["x_star"] == pytest.approx(1.1875, abs=1e-11) and res["crossing"]["t_star"] == pytest.approx(6.0)
    assert main(["equivalent", "--preset", "equivalent-beta1", "--out", str(tmp_path / "b1")]) == 0
    res = json.loads((tmp_path / "b1" / "equivalent.json").read_text())
    assert res["rho1"] == pytest.approx(0.5) and res["crossing"] is None


NT_SMALL = {
    "policy": "nT", "shape": {"kind": "power", "alpha": 1.0, "beta": 0.5}, "rate_b": 1.0, "rho1": 0.5, "rho2": 0.5,
    "reward": {"alpha1": 0.1, "alpha2": 0.25, "k1": 1.0, "k2": 1.0, "b1": 11.0, "c": 4.0},
    "costs": {"repair_cost": 2.0, "replacement_cost": 25.0},
    "n_grid": [1, 2], "T_grid": {"start": 1.0, "stop": 2.0, "num": 2}, "mc": {"n_reps": 300},
}
MT_SMALL = {
    "policy": "MT", "shape": {"kind": "linear", "a": 1.3}, "rate_b": 0.8, "rho1": 0.9, "rho2": 0.9,
    "reward": {"alpha1": 0.4, "alpha2": 0.5, "k1": 1.05, "k2": 1.07, "b1": 800.0, "c": 8.0},
    "costs": {"repair_cost": 200.0, "preventive_cost": 1000.0, "corrective_cost": 1300.0},
    "M_grid": {"start": 1.0, "stop": "L", "num": 2}, "T_grid": [2.0, 3.0], "mc": {"n_cycles": 400, "block": 150},
}


@pytest.mark.parametrize("cfg", [NT_SMALL, MT_SMALL], ids=["nT", "MT"])
def test_optimize_outputs_and_threads(tmp_path, cfg):
    c1, a = run(tmp_path, "optimize", cfg, "--threads", "1", name="a")
    c2, b = run(tmp_path, "optimize", cfg, "--threads", "3", name="b")
    assert c1 == c2 == 0
    for f in ("optimize.json", "surface_ARD1.csv", "surface_ARA1.csv", "difference.csv"):
        assert (a / f).read_bytes() == (b / f).read_bytes()
    res = json.loads((a / "optimize.json").read_text())
    assert set(res["results"]) == {"ARD1", "ARA1"} and "changes_sign" in res["difference"]


def test_optimize_config_errors(tmp_path):
    assert run(tmp_path, "optimize", dict(NT_SMALL, n_grid=[]))[0] == 2
    assert run(tmp_path, "optimize", dict(MT_SMALL, M_grid=[1.0, 20.0]))[0] == 2
    assert run(tmp_path, "optimize", dict(NT_SMALL, mc={"n_reps": 300, "simpson_intervals": 7}))[0] == 2
    assert run(tmp_path, "optimize", dict(NT_SMALL, policy="XY"))[0] == 2
    assert run(tmp_path, "optimize", dict(MT_SMALL, mc={"n_reps": 5}))[0] == 2


def test_presets_are_valid():
    from gammarepair.cli import validate_keys

    for name, (cmd, cfg) in PRESETS.items():
        validate_keys(cmd, dict(cfg, seed=0))

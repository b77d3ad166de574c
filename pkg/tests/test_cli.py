"""Command-line interface: subcommands, config validation, exit codes."""

from __future__ import annotations

import json
import math
import subprocess
import sys

import numpy as np
import pytest

from oscsqueeze import __version__, eps_from_entropy
from oscsqueeze.cli import main


def write_json(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return str(path)


def base_config(**overrides):
    cfg = {
        "profile": {"type": "tanh", "omega_minus": 1.0, "omega_plus": 3.0,
                    "omega0": 10.0, "d": 0.5},
        "truncation_multiplier": 6.0,
        "rtol": 1e-9,
        "atol": 1e-11,
        "points_per_period": 32,
        "thermal": {"epsilon": 1.0},
        "outputs": ["trajectory", "thermo", "summary"],
    }
    cfg.update(overrides)
    return cfg


def read_rows(path):
    lines = path.read_text().splitlines()
    return lines[0].split(","), [line.split(",") for line in lines[1:]]


SUMMARY_KEYS = {
    "terminal_S", "terminal_T", "epsilon", "omega_I", "mass", "t_start",
    "t_end", "samples", "wronskian_drift", "integrator_steps",
    "integrator_rejected", "integrator_max_error", "rhs_evaluations",
}


class TestVersion:
    def test_version_flag(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["--version"])
        assert exc.value.code == 0
        assert capsys.readouterr().out.strip() == f"oscsqueeze {__version__}"

    def test_module_entry_point(self):
        proc = subprocess.run(
            [sys.executable, "-m", "oscsqueeze.cli", "--version"],
            capture_output=True, text=True)
        assert proc.returncode == 0
        assert proc.stdout.strip() == f"oscsqueeze {__version__}"


class TestSimulate:
    def test_end_to_end(self, tmp_path):
        cfg = write_json(tmp_path, "cfg.json", base_config())
        out = tmp_path / "run"
        assert main(["simulate", "--config", cfg, "--out", str(out),
                     "--no-figures"]) == 0

        header, rows = read_rows(out / "trajectory.csv")
        assert header == ["t", "re_g", "im_g", "re_gdot", "im_gdot",
                          "g_minus", "dg_minus", "S", "A_slash", "theta",
                          "omega_eff", "epsilon", "S_ent", "E", "T",
                          "F_omega", "r", "Q"]
        assert len(rows) > 100

        summary = json.loads((out / "summary.json").read_text())
        assert set(summary) == SUMMARY_KEYS
        assert summary["terminal_S"] >= 0.0
        assert summary["wronskian_drift"] < 1e-7
        assert summary["samples"] == len(rows)
        assert summary["epsilon"] == 1.0

    def test_reruns_are_byte_identical(self, tmp_path):
        cfg = write_json(tmp_path, "cfg.json", base_config())
        for name in ("a", "b"):
            main(["simulate", "--config", cfg, "--out", str(tmp_path / name),
                  "--no-figures"])
        for fname in ("trajectory.csv", "summary.json"):
            assert (tmp_path / "a" / fname).read_bytes() == \
                (tmp_path / "b" / fname).read_bytes()

    def test_figures_rendered(self, tmp_path):
        cfg = write_json(tmp_path, "cfg.json",
                         base_config(outputs=["summary"]))
        out = tmp_path / "run"
        assert main(["simulate", "--config", cfg, "--out", str(out)]) == 0
        png = out / "trajectory.png"
        assert png.exists() and png.stat().st_size > 1000

    def test_json_format(self, tmp_path):
        cfg = write_json(tmp_path, "cfg.json", base_config())
        out = tmp_path / "run"
        assert main(["simulate", "--config", cfg, "--out", str(out),
                     "--format", "json", "--no-figures"]) == 0
        payload = json.loads((out / "trajectory.json").read_text())
        assert list(payload)[:3] == ["t", "re_g", "im_g"]
        lengths = {len(col) for col in payload.values()}
        assert len(lengths) == 1

    def test_outputs_subset_skips_trajectory(self, tmp_path):
        cfg = write_json(tmp_path, "cfg.json",
                         base_config(outputs=["summary"]))
        out = tmp_path / "run"
        assert main(["simulate", "--config", cfg, "--out", str(out),
                     "--no-figures"]) == 0
        assert not (out / "trajectory.csv").exists()
        assert (out / "summary.json").exists()

    def test_constant_profile_stays_unsqueezed(self, tmp_path):
        cfg = write_json(tmp_path, "cfg.json", {
            "profile": {"type": "constant", "omega": 2.0},
            "t_span": [0.0, 20.0],
            "thermal": {"epsilon": 1.0},
            "outputs": ["summary"],
        })
        out = tmp_path / "run"
        assert main(["simulate", "--config", cfg, "--out", str(out),
                     "--no-figures"]) == 0
        summary = json.loads((out / "summary.json").read_text())
        assert abs(summary["terminal_S"]) <= 1e-12
        assert summary["terminal_T"] == pytest.approx(2.0, rel=1e-12)

    def test_thermal_alternatives_resolve_epsilon(self, tmp_path):
        # T0 divides the realized omega_I = omega(t0), not the nominal
        # asymptote, so compare against the reported value
        for thermal, expect in [
            ({"T0": 2.0}, lambda s: s["omega_I"] / 2.0),
            ({"S_ent": 2.0 * math.log(2.0)}, lambda s: math.log(2.0)),
        ]:
            cfg = write_json(tmp_path, "cfg.json",
                             base_config(thermal=thermal, outputs=["summary"]))
            out = tmp_path / "run"
            assert main(["simulate", "--config", cfg, "--out", str(out),
                         "--no-figures"]) == 0
            summary = json.loads((out / "summary.json").read_text())
            assert summary["epsilon"] == pytest.approx(expect(summary),
                                                       rel=1e-12)

    def test_tabulated_profile_accepted(self, tmp_path):
        t = np.linspace(-4.0, 8.0, 961)
        w2 = 1.0 + 8.0 * (1.0 + np.tanh(t / 0.5)) / 2.0
        lines = ["t,omega_sq"]
        lines += [f"{float(a)!r},{float(b)!r}" for a, b in zip(t, w2)]
        (tmp_path / "table.csv").write_text("\n".join(lines) + "\n")
        cfg = write_json(tmp_path, "cfg.json", {
            "profile": {"type": "table", "table_path": "table.csv"},
            "thermal": {"epsilon": 1.0},
            "outputs": ["summary"],
        })
        out = tmp_path / "run"
        assert main(["simulate", "--config", cfg, "--out", str(out),
                     "--no-figures"]) == 0
        summary = json.loads((out / "summary.json").read_text())
        assert summary["omega_I"] == pytest.approx(1.0, rel=1e-3)


class TestConfigErrors:
    @pytest.mark.parametrize("mangle,needle", [
        (lambda c: c.update(omega=3.0) or c, "unknown key 'omega'"),
        (lambda c: c.update(rtol=0.0) or c, "'rtol'"),
        (lambda c: c.update(points_per_period=1) or c, "points_per_period"),
        (lambda c: c.update(t_span=[0.0, 1.0]) or c, "mutually exclusive"),
        (lambda c: c.update(outputs=["tragectory"]) or c,
         "unknown output 'tragectory'"),
        (lambda c: c.pop("thermal") and None or c, "thermal"),
        (lambda c: c.update(thermal={"epsilon": 1.0, "T0": 1.0}) or c,
         "exactly one"),
    ])
    def test_bad_config_names_key(self, tmp_path, capsys, mangle, needle):
        cfg = write_json(tmp_path, "cfg.json", mangle(base_config()))
        rc = main(["simulate", "--config", cfg, "--out",
                   str(tmp_path / "run"), "--no-figures"])
        assert rc == 1
        assert needle in capsys.readouterr().err

    def test_negative_duration_rejected(self, tmp_path, capsys):
        cfg = base_config()
        cfg["profile"]["d"] = -1.0
        path = write_json(tmp_path, "cfg.json", cfg)
        rc = main(["simulate", "--config", path, "--out",
                   str(tmp_path / "run"), "--no-figures"])
        assert rc == 1
        assert "d" in capsys.readouterr().err

    def test_constant_profile_needs_span(self, tmp_path, capsys):
        cfg = write_json(tmp_path, "cfg.json", {
            "profile": {"type": "constant", "omega": 2.0},
            "thermal": {"epsilon": 1.0},
        })
        rc = main(["simulate", "--config", cfg, "--out",
                   str(tmp_path / "run"), "--no-figures"])
        assert rc == 1
        assert "t_span" in capsys.readouterr().err

    def test_missing_config_file(self, tmp_path, capsys):
        rc = main(["simulate", "--config", str(tmp_path / "absent.json"),
                   "--out", str(tmp_path / "run"), "--no-figures"])
        assert rc == 1
        assert "cannot read" in capsys.readouterr().err

    def test_malformed_json(self, tmp_path, capsys):
        path = tmp_path / "cfg.json"
        path.write_text("{not json")
        rc = main(["simulate", "--config", str(path), "--out",
                   str(tmp_path / "run"), "--no-figures"])
        assert rc == 1
        assert "not valid JSON" in capsys.readouterr().err


def sweep_config(axes, **overrides):
    cfg = base_config(outputs=["summary"], truncation_multiplier=5.0,
                      points_per_period=16, rtol=1e-8, atol=1e-10)
    cfg["profile"]["d"] = 1.0
    cfg["sweep"] = {"axes": axes}
    cfg.update(overrides)
    return cfg


class TestSweep:
    def test_single_axis(self, tmp_path):
        cfg = write_json(tmp_path, "cfg.json", sweep_config([
            {"parameter": "omega_ratio", "min": 2.0, "max": 4.0, "count": 3},
        ]))
        out = tmp_path / "sw"
        assert main(["sweep", "--config", cfg, "--out", str(out),
                     "--no-figures"]) == 0
        header, rows = read_rows(out / "sweep.csv")
        assert header == ["axis1", "axis2", "terminal_S",
                          "log10_terminal_S", "reason"]
        assert len(rows) == 3
        assert [float(r[0]) for r in rows] == [2.0, 3.0, 4.0]
        assert all(r[1] == "" and r[4] == "" for r in rows)
        assert all(float(r[2]) > 0 for r in rows)

    def test_two_axes_grid(self, tmp_path):
        cfg = write_json(tmp_path, "cfg.json", sweep_config([
            {"parameter": "omega_ratio", "min": 2.0, "max": 3.0, "count": 2},
            {"parameter": "omega_minus_d", "min": 0.5, "max": 1.0, "count": 2,
             "spacing": "log"},
        ]))
        out = tmp_path / "sw"
        assert main(["sweep", "--config", cfg, "--out", str(out),
                     "--no-figures"]) == 0
        _, rows = read_rows(out / "sweep.csv")
        assert len(rows) == 4
        assert {(r[0], r[1]) for r in rows} == {
            ("2", "0.5"), ("2", "1"), ("3", "0.5"), ("3", "1")}

    def test_failed_cells_report_reason(self, tmp_path):
        # ratio 5 pushes omega_plus past the carrier: that cell must fail
        # with a recorded reason while the others still produce numbers
        cfg = sweep_config([
            {"parameter": "omega_ratio", "min": 2.0, "max": 5.0, "count": 2},
        ])
        cfg["profile"]["omega0"] = 4.0
        path = write_json(tmp_path, "cfg.json", cfg)
        out = tmp_path / "sw"
        assert main(["sweep", "--config", path, "--out", str(out),
                     "--no-figures"]) == 0
        _, rows = read_rows(out / "sweep.csv")
        good, bad = rows
        assert float(good[2]) > 0 and good[4] == ""
        assert math.isnan(float(bad[2])) and "ValueError" in bad[4]

    def test_parallel_matches_serial(self, tmp_path):
        cfg = write_json(tmp_path, "cfg.json", sweep_config([
            {"parameter": "omega_minus_d", "min": 0.4, "max": 0.8, "count": 3},
        ]))
        for name, jobs in (("s1", "1"), ("s2", "2")):
            assert main(["sweep", "--config", cfg, "--out",
                         str(tmp_path / name), "--jobs", jobs,
                         "--no-figures"]) == 0
        assert (tmp_path / "s1" / "sweep.csv").read_bytes() == \
            (tmp_path / "s2" / "sweep.csv").read_bytes()

    def test_figure_rendered(self, tmp_path):
        cfg = write_json(tmp_path, "cfg.json", sweep_config([
            {"parameter": "omega_ratio", "min": 2.0, "max": 3.0, "count": 2},
        ]))
        out = tmp_path / "sw"
        assert main(["sweep", "--config", cfg, "--out", str(out)]) == 0
        assert (out / "sweep.png").stat().st_size > 1000

    @pytest.mark.parametrize("axes,needle", [
        ([], "1 or 2"),
        ([{"parameter": "omega_ratio", "min": 2.0, "max": 4.0, "count": 3}] * 3,
         "1 or 2"),
        ([{"parameter": "omega_ratio", "min": 2.0, "max": 4.0, "count": 3}] * 2,
         "distinct"),
        ([{"parameter": "mass", "min": 1.0, "max": 2.0, "count": 2}],
         "parameter"),
        ([{"parameter": "omega_ratio", "min": 4.0, "max": 2.0, "count": 3}],
         "below"),
        ([{"parameter": "omega_ratio", "min": -1.0, "max": 2.0, "count": 3,
           "spacing": "log"}], "positive for log"),
    ])
    def test_bad_axes_rejected(self, tmp_path, capsys, axes, needle):
        cfg = write_json(tmp_path, "cfg.json", sweep_config(axes))
        rc = main(["sweep", "--config", cfg, "--out", str(tmp_path / "sw"),
                   "--no-figures"])
        assert rc == 1
        assert needle in capsys.readouterr().err

    def test_sweep_needs_truncation_not_span(self, tmp_path, capsys):
        cfg = sweep_config([
            {"parameter": "omega_ratio", "min": 2.0, "max": 3.0, "count": 2},
        ])
        del cfg["truncation_multiplier"]
        cfg["t_span"] = [-5.0, 10.0]
        path = write_json(tmp_path, "cfg.json", cfg)
        rc = main(["sweep", "--config", path, "--out", str(tmp_path / "sw"),
                   "--no-figures"])
        assert rc == 1
        assert "truncation_multiplier" in capsys.readouterr().err


def run_json(capsys, argv):
    assert main(argv) == 0
    return json.loads(capsys.readouterr().out)


TANH_ARGS = ["--omega-minus", "1", "--omega-plus", "3",
             "--omega0", "10", "--d", "1"]


class TestAnalytic:
    def test_terminal_values(self, capsys):
        out = run_json(capsys, ["analytic", "terminal", *TANH_ARGS])
        assert out["eq_E_infty"] == pytest.approx(0.0018641802600713778,
                                                  rel=1e-12)
        assert out["eq_Sfactor"] == pytest.approx(0.011185081560428268,
                                                  rel=1e-12)

    def test_bogoliubov_identity(self, capsys):
        out = run_json(capsys, ["analytic", "bogoliubov", *TANH_ARGS])
        assert out["identity"] == pytest.approx(1.0 / 3.0, rel=1e-10)
        assert out["alpha_sq"] == pytest.approx(out["alpha_sq_closed_form"],
                                                rel=1e-10)

    def test_mode_early_time(self, capsys):
        out = run_json(capsys, ["analytic", "mode", *TANH_ARGS, "--t", "-12"])
        assert out["g_minus"] == pytest.approx(1.0, abs=1e-9)

    def test_eps_parameterization_equivalent(self, capsys):
        eps = math.sqrt(10.0**2 - 1.0)     # omega_minus = 1 at omega0 = 10
        eps2 = math.sqrt(10.0**2 - 3.0**2)
        a = run_json(capsys, ["analytic", "terminal", *TANH_ARGS])
        b = run_json(capsys, ["analytic", "terminal", "--omega0", "10",
                              "--eps-minus", repr(eps), "--eps-plus",
                              repr(eps2), "--d", "1"])
        assert a["eq_Sfactor"] == pytest.approx(b["eq_Sfactor"], rel=1e-12)

    def test_sudden_ratio_and_pair_agree(self, capsys):
        a = run_json(capsys, ["analytic", "sudden", "--ratio", "3"])
        b = run_json(capsys, ["analytic", "sudden", "--omega-minus", "1",
                              "--omega-plus", "3"])
        assert a["S"] == pytest.approx(1.0 / 3.0, rel=1e-14)
        assert a["S"] == b["S"]

    def test_large_ratio_value(self, capsys):
        out = run_json(capsys, ["analytic", "large-ratio", "--wd", "1"])
        assert out["S"] == pytest.approx(1.0 / math.expm1(2.0 * math.pi),
                                         rel=1e-14)

    @pytest.mark.parametrize("argv,needle", [
        (["analytic", "sudden", "--ratio", "3", "--omega-minus", "1",
          "--omega-plus", "3"], "not both"),
        (["analytic", "sudden"], "missing parameter"),
        (["analytic", "terminal", "--omega0", "10"], "missing parameter"),
        (["analytic", "terminal", *TANH_ARGS, "--eps-minus", "3"], "not both"),
        (["analytic", "large-ratio", "--wd", "-1"], "positive"),
    ])
    def test_conflicting_or_missing_args(self, capsys, argv, needle):
        assert main(argv) == 1
        assert needle in capsys.readouterr().err


def write_schedule(tmp_path, name, t, big_omega, omega_prime):
    lines = ["t,Omega,omega_prime"]
    lines += [f"{float(a)!r},{float(b)!r},{float(c)!r}"
              for a, b, c in zip(t, big_omega, omega_prime)]
    path = tmp_path / name
    path.write_text("\n".join(lines) + "\n")
    return str(path)


class TestReconstruct:
    def test_flat_protocol(self, tmp_path):
        t = np.linspace(0.0, 10.0, 101)
        sched = write_schedule(tmp_path, "sched.csv", t, np.zeros_like(t),
                               np.zeros_like(t))
        cfg = write_json(tmp_path, "rc.json", {
            "omega_I": 1.0, "omega_start": 2.0, "thermal": {"epsilon": 1.0}})
        out = tmp_path / "rec"
        assert main(["reconstruct", "--config", cfg, "--omega-schedule",
                     sched, "--out", str(out)]) == 0
        header, rows = read_rows(out / "reconstruction.csv")
        assert header == ["t", "omega", "g_minus", "dg_minus", "Omega",
                          "omega_eff", "T"]
        omega = np.array([float(r[1]) for r in rows])
        temp = np.array([float(r[6]) for r in rows])
        assert np.abs(omega - 2.0).max() == 0.0
        assert np.abs(temp - 2.0).max() == 0.0
        assert (out / "reconstruction.png").stat().st_size > 1000

    def test_inconsistent_protocol_is_numerical_failure(self, tmp_path,
                                                        capsys):
        t = np.linspace(0.0, 1.0, 16)
        sched = write_schedule(tmp_path, "sched.csv", t, np.zeros_like(t),
                               np.full_like(t, 0.5))
        cfg = write_json(tmp_path, "rc.json", {
            "omega_I": 1.0, "omega_start": 1.0, "thermal": {"epsilon": 1.0}})
        rc = main(["reconstruct", "--config", cfg, "--omega-schedule", sched,
                   "--out", str(tmp_path / "rec"), "--no-figures"])
        assert rc == 2
        err = capsys.readouterr().err
        assert err.startswith("numerical failure")
        assert "t=" in err

    def test_two_column_schedule_rejected(self, tmp_path, capsys):
        path = tmp_path / "sched.csv"
        path.write_text("t,Omega\n0.0,0.0\n1.0,0.0\n2.0,0.0\n3.0,0.0\n")
        cfg = write_json(tmp_path, "rc.json", {
            "omega_I": 1.0, "omega_start": 1.0, "thermal": {"epsilon": 1.0}})
        rc = main(["reconstruct", "--config", cfg, "--omega-schedule",
                   str(path), "--out", str(tmp_path / "rec"), "--no-figures"])
        assert rc == 1
        assert "3 columns" in capsys.readouterr().err

    def test_missing_schedule_file(self, tmp_path, capsys):
        cfg = write_json(tmp_path, "rc.json", {
            "omega_I": 1.0, "omega_start": 1.0, "thermal": {"epsilon": 1.0}})
        rc = main(["reconstruct", "--config", cfg, "--omega-schedule",
                   str(tmp_path / "absent.csv"), "--out",
                   str(tmp_path / "rec"), "--no-figures"])
        assert rc == 1
        assert "cannot read" in capsys.readouterr().err

    def test_thermal_entropy_sets_temperature_scale(self, tmp_path):
        t = np.linspace(0.0, 5.0, 64)
        sched = write_schedule(tmp_path, "sched.csv", t, np.zeros_like(t),
                               np.zeros_like(t))
        s_ent = 2.0 * math.log(2.0)
        cfg = write_json(tmp_path, "rc.json", {
            "omega_I": 1.0, "omega_start": 1.0, "thermal": {"S_ent": s_ent}})
        out = tmp_path / "rec"
        assert main(["reconstruct", "--config", cfg, "--omega-schedule",
                     sched, "--out", str(out), "--no-figures"]) == 0
        _, rows = read_rows(out / "reconstruction.csv")
        temp = float(rows[0][6])
        assert temp == pytest.approx(1.0 / eps_from_entropy(s_ent), rel=1e-12)

"""CLI tests: flag/file/preset precedence, output schema, exit codes."""

import csv
import json

import pytest

import mimo_converge.cli as cli
from mimo_converge.cli import (
    EXIT_CONFIG,
    EXIT_IO,
    EXIT_NUMERICAL,
    EXIT_OK,
    emit,
    main,
    parse_config,
)
from mimo_converge.montecarlo import (
    FIXED_ALPHA,
    FIXED_K,
    ConfigError,
    SweepResult,
    run_scenario,
)
from mimo_converge.numerics import SingularMatrixError
from mimo_converge.power import PowerProfile


class TestParseConfig:
    def test_preset_fig1(self):
        config = parse_config(["--preset", "fig1"])
        assert [s.K for s in config.scenarios] == [10, 50]
        for s in config.scenarios:
            assert s.mode == FIXED_K
            assert s.correlation is None and s.profile is None
            assert s.compute_metrics and not s.compute_zf and not s.compute_mf
            assert max(s.sweep) >= 10_000

    def test_preset_fig5_with_seed_override(self):
        config = parse_config(["--preset", "fig5", "--seed", "7"])
        (s,) = config.scenarios
        assert s.mode == FIXED_ALPHA and s.alpha == 10.0
        assert s.profile == PowerProfile(0.1, 1.0)
        assert s.compute_zf and s.compute_mf and not s.compute_metrics
        assert s.seed == 7

    def test_explicit_fixed_alpha(self):
        config = parse_config(["--mode", "fixed-alpha", "--alpha", "10", "--K", "10:100:10"])
        (s,) = config.scenarios
        assert s.sweep == tuple(range(10, 101, 10))
        assert s.alpha == 10.0 and s.K is None

    def test_explicit_fixed_k(self):
        config = parse_config(["--mode", "fixed-K", "--K", "10", "--M", "20,40,80"])
        (s,) = config.scenarios
        assert s.K == 10 and s.sweep == (20, 40, 80)

    def test_contradictory_flags_name_both_keys(self):
        with pytest.raises(ConfigError, match=r"--alpha .*fixed-K"):
            parse_config(["--mode", "fixed-K", "--K", "10", "--M", "20", "--alpha", "5"])
        with pytest.raises(ConfigError, match=r"--M .*fixed-alpha"):
            parse_config(["--mode", "fixed-alpha", "--alpha", "2", "--K", "4", "--M", "8"])

    def test_preset_rejects_scenario_flags(self):
        with pytest.raises(ConfigError, match="corr-rho"):
            parse_config(["--preset", "fig1", "--corr-rho", "0.5"])

    def test_unknown_flag_rejected(self):
        with pytest.raises(ConfigError):
            parse_config(["--bogus", "1"])

    def test_spacing_needs_corr_rho(self):
        with pytest.raises(ConfigError, match="corr-rho"):
            parse_config(["--mode", "fixed-K", "--K", "2", "--M", "4", "--spacing", "2.0"])

    def test_beta_range_needs_both_ends(self):
        with pytest.raises(ConfigError, match="beta"):
            parse_config(["--mode", "fixed-K", "--K", "2", "--M", "4", "--beta-min", "0.1"])

    def test_stats_subset(self):
        config = parse_config(
            ["--mode", "fixed-K", "--K", "8", "--M", "4,6", "--stats", "mf"]
        )
        (s,) = config.scenarios
        assert s.compute_mf and not s.compute_zf and not s.compute_metrics

    def test_out_of_range_rho_is_config_error(self):
        with pytest.raises(ConfigError, match="rho"):
            parse_config(["--mode", "fixed-K", "--K", "2", "--M", "4", "--corr-rho", "1.5"])

    def test_gram_source_flag(self):
        config = parse_config(
            ["--mode", "fixed-K", "--K", "4", "--M", "8,16", "--gram-source", "G"]
        )
        assert config.scenarios[0].gram_source == "G"

    def test_preset_fidelity(self):
        expectations = {
            # name -> (modes, metrics-only?, rhos, unequal?)
            "fig1": ([FIXED_K, FIXED_K], True, [], False),
            "fig2": ([FIXED_ALPHA], True, [], False),
            "fig3": ([FIXED_K, FIXED_ALPHA], True, [], False),
            "fig4": ([FIXED_ALPHA], False, [], False),
            "fig5": ([FIXED_ALPHA], False, [], True),
            "fig6": ([FIXED_ALPHA, FIXED_ALPHA], False, [0.5, 0.9], False),
            "fig7": ([FIXED_ALPHA, FIXED_ALPHA], False, [0.5, 0.9], True),
        }
        for name, (modes, metrics_only, rhos, unequal) in expectations.items():
            scenarios = parse_config(["--preset", name]).scenarios
            assert [s.mode for s in scenarios] == modes, name
            for s in scenarios:
                assert s.compute_metrics == metrics_only, name
                assert s.compute_zf == s.compute_mf == (not metrics_only), name
                assert (s.profile is not None) == unequal, name
                assert s.rho_f == 1.0 and s.trials == 1000, name
            assert [s.correlation.rho for s in scenarios if s.correlation] == rhos, name

    def test_env_seed_is_lowest_priority(self, monkeypatch):
        monkeypatch.setenv(cli.SEED_ENV_VAR, "777")
        config = parse_config(["--preset", "fig4"])
        assert config.scenarios[0].seed == 777
        config = parse_config(["--preset", "fig4", "--seed", "9"])
        assert config.scenarios[0].seed == 9

    def test_bad_env_seed(self, monkeypatch):
        monkeypatch.setenv(cli.SEED_ENV_VAR, "not-a-seed")
        with pytest.raises(ConfigError, match=cli.SEED_ENV_VAR):
            parse_config(["--preset", "fig4"])


class TestConfigFile:
    def test_file_values_used(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text(
            "# comment line\n"
            "mode = fixed-alpha\n"
            "alpha = 10\n"
            "K = 10,20\n"
            "trials = 7\n"
        )
        config = parse_config(["--config", str(cfg)])
        (s,) = config.scenarios
        assert s.alpha == 10.0 and s.sweep == (10, 20) and s.trials == 7

    def test_flags_override_file(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("mode = fixed-alpha\nalpha = 10\nK = 10\nseed = 5\n")
        config = parse_config(["--config", str(cfg), "--seed", "6"])
        assert config.scenarios[0].seed == 6

    def test_file_overrides_preset_trials(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("preset = fig4\ntrials = 11\n")
        config = parse_config(["--config", str(cfg)])
        assert config.preset == "fig4"
        assert config.scenarios[0].trials == 11

    def test_unknown_key_rejected(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("modes = fixed-K\n")
        with pytest.raises(ConfigError, match="unknown key"):
            parse_config(["--config", str(cfg)])

    def test_bad_value_rejected(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("trials = many\n")
        with pytest.raises(ConfigError, match="bad value"):
            parse_config(["--config", str(cfg)])

    def test_file_mode_and_format_validated(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("mode = bogus\nalpha = 10\nK = 5\n")
        with pytest.raises(ConfigError, match="unknown mode"):
            parse_config(["--config", str(cfg)])
        cfg.write_text("mode = fixed-alpha\nalpha = 10\nK = 5\nformat = xml\n")
        with pytest.raises(ConfigError, match="unknown format"):
            parse_config(["--config", str(cfg)])


def _tiny_config(tmp_path, fmt="csv", **kw):
    argv = [
        "--mode", "fixed-alpha", "--alpha", "10", "--K", "5,10",
        "--trials", "4", "--seed", "3",
        "--format", fmt,
        "--output", str(tmp_path / f"out.{fmt}"),
    ]
    for key, value in kw.items():
        argv += [f"--{key}", str(value)]
    return parse_config(argv)


class TestEmit:
    def test_empty_sweep_writes_header_only(self, tmp_path):
        config = _tiny_config(tmp_path)
        results = [SweepResult(scenario=config.scenarios[0], points=[])]
        path = emit(results, config)
        assert path.read_text() == ",".join(cli.CSV_COLUMNS) + "\n"

    def test_fig4_rows_have_limits(self, tmp_path):
        out = tmp_path / "fig4.csv"
        assert main(["--preset", "fig4", "--trials", "2", "--output", str(out)]) == EXIT_OK
        with open(out, newline="") as fh:
            rows = list(csv.DictReader(fh))
        stats = {r["statistic"] for r in rows}
        assert {"zf_snr", "mf_sinr_mean"} <= stats
        for r in rows:
            if r["statistic"] in ("zf_snr", "mf_sinr_mean"):
                assert r["limit"] != ""
            assert r["trials"] == "2"

    def test_csv_has_at_least_ten_significant_digits(self, tmp_path):
        config = _tiny_config(tmp_path)
        results = [run_scenario(s) for s in config.scenarios]
        emit(results, config)
        with open(config.output, newline="") as fh:
            row = next(csv.DictReader(fh))
        mean = results[0].points[0].stats[row["statistic"]].mean
        assert row["mean"] == format(mean, ".12g")
        assert float(row["mean"]) == pytest.approx(mean, rel=1e-10)

    def test_json_roundtrip_is_exact(self, tmp_path):
        config = _tiny_config(tmp_path, fmt="json")
        results = [run_scenario(s) for s in config.scenarios]
        emit(results, config)
        with open(config.output) as fh:
            payload = json.load(fh)
        point = results[0].points[0]
        by_stat = {
            (r["M"], r["statistic"]): r
            for r in payload["rows"]
        }
        for name, summary in point.stats.items():
            row = by_stat[(point.M, name)]
            assert row["mean"] == summary.mean  # exact, json floats round-trip
            assert row["std"] == summary.std
            assert row["limit"] == summary.limit

    def test_config_echoed_in_every_row(self, tmp_path):
        out = tmp_path / "fig5.csv"
        assert main(["--preset", "fig5", "--trials", "2", "--seed", "8", "--output", str(out)]) == EXIT_OK
        with open(out, newline="") as fh:
            rows = list(csv.DictReader(fh))
        for r in rows:
            assert r["seed"] == "8"
            assert r["rho_f"] == "1"
            assert r["beta_min"] == "0.1" and r["beta_max"] == "1"
            assert r["corr_rho"] == "0"
            assert r["degenerate_trials"] == "0"


class TestMainExitCodes:
    def test_success(self, tmp_path, capsys):
        out = tmp_path / "r.csv"
        code = main(
            ["--mode", "fixed-alpha", "--alpha", "10", "--K", "5",
             "--trials", "3", "--output", str(out)]
        )
        assert code == EXIT_OK
        assert out.exists()
        assert "wrote" in capsys.readouterr().out

    def test_config_error_exit(self, capsys):
        assert main(["--mode", "fixed-K", "--K", "10"]) == EXIT_CONFIG
        assert "configuration error" in capsys.readouterr().err

    def test_io_error_exit(self, tmp_path, capsys):
        blocker = tmp_path / "file"
        blocker.write_text("x")
        out = blocker / "sub.csv"  # path through a regular file
        code = main(
            ["--mode", "fixed-alpha", "--alpha", "10", "--K", "5",
             "--trials", "2", "--output", str(out)]
        )
        assert code == EXIT_IO
        assert str(out) in capsys.readouterr().err

    def test_numerical_failure_exit(self, tmp_path, monkeypatch, capsys):
        def explode(scenario, workers=1):
            raise SingularMatrixError("synthetic failure")

        monkeypatch.setattr(cli, "run_scenario", explode)
        code = main(["--preset", "fig4", "--trials", "2", "--output", str(tmp_path / "x.csv")])
        assert code == EXIT_NUMERICAL
        assert "numerical failure" in capsys.readouterr().err


class TestByteReproducibility:
    def test_same_seed_same_bytes_any_workers(self, tmp_path):
        paths = [tmp_path / f"run{i}.csv" for i in range(3)]
        for path, workers in zip(paths, ("1", "1", "4")):
            code = main(
                ["--preset", "fig4", "--trials", "3", "--seed", "42",
                 "--workers", workers, "--output", str(path)]
            )
            assert code == EXIT_OK
        blobs = [p.read_bytes() for p in paths]
        assert blobs[0] == blobs[1] == blobs[2]

"""Tests for experiment configs, runners, report files, and the CLI."""
import csv
import json

import pytest

from bfix.cli import main
from bfix.errors import ConfigError, ParameterError
from bfix.experiments import (
    EXPERIMENTS,
    ExperimentConfig,
    list_experiments,
    list_map_templates,
    list_potential_templates,
    load_config,
    map_from_name,
    potential_from_name,
    run_experiment,
    validate_config,
)

ALL_NAMES = {"axioms", "cauchy-fuzz", "claims", "error-bound", "gamma-sweep",
             "lemma41", "solve", "solve-multi"}


# --- template registries ------------------------------------------------


def test_map_templates():
    assert map_from_name("scale(0.5)")(3.0) == 1.5
    assert map_from_name("shift(2)")(1.0) == 3.0
    assert map_from_name(" scale( -1.5 ) ")(2.0) == -3.0
    assert list_map_templates() == ["scale(c)", "shift(c)"]


def test_potential_templates():
    assert potential_from_name("abs_scale(2)")(-3.0) == 6.0
    assert list_potential_templates() == ["abs_scale(c)"]


def test_template_errors():
    with pytest.raises(ParameterError, match="known:"):
        map_from_name("rotate(1)")
    with pytest.raises(ParameterError, match="argument"):
        map_from_name("scale(1, 2)")
    with pytest.raises(ParameterError, match="non-numeric"):
        map_from_name("scale(x)")
    with pytest.raises(ParameterError):
        map_from_name("not a call at all!!")


# --- config validation --------------------------------------------------


def test_registry_is_complete():
    assert set(EXPERIMENTS) == ALL_NAMES
    assert [d.name for d in list_experiments()] == sorted(ALL_NAMES)


def test_minimal_config_gets_defaults():
    config = validate_config({"experiment": "lemma41"})
    assert config.experiment == "lemma41"
    assert config.parameters["a"] == 1.0
    assert config.parameters["checkpoints"] == [100, 1000, 10000, 100000]
    assert config.seed == 0
    assert config.output_path is None


def test_config_must_be_object():
    with pytest.raises(ConfigError):
        validate_config(["experiment", "axioms"])


def test_unknown_experiment_lists_known_names():
    with pytest.raises(ConfigError) as exc:
        validate_config({"experiment": "nope"})
    message = str(exc.value)
    for name in ALL_NAMES:
        assert name in message


def test_config_problems_reported_together():
    raw = {
        "experiment": "lemma41",
        "parameters": {"a": 1.0, "bogus": 3},
        "seed": -1,
        "extra": True,
    }
    with pytest.raises(ConfigError) as exc:
        validate_config(raw)
    message = str(exc.value)
    assert "unknown key 'extra'" in message
    assert "unknown parameter 'bogus'" in message
    assert "'seed' must be an integer" in message


def test_seed_bounds():
    assert validate_config({"experiment": "axioms",
                            "seed": 2 ** 64 - 1}).seed == 2 ** 64 - 1
    for bad in (-1, 2 ** 64, True, 1.5, "7"):
        with pytest.raises(ConfigError):
            validate_config({"experiment": "axioms", "seed": bad})


def test_missing_experiment_key():
    with pytest.raises(ConfigError, match="missing 'experiment'"):
        validate_config({"parameters": {}})


def test_parameters_must_be_object():
    with pytest.raises(ConfigError, match="'parameters'"):
        validate_config({"experiment": "axioms", "parameters": [1]})


def test_output_path_must_be_string():
    with pytest.raises(ConfigError, match="'output_path'"):
        validate_config({"experiment": "axioms", "output_path": 5})


def test_solve_requires_solver():
    with pytest.raises(ConfigError, match="'solver'"):
        validate_config({"experiment": "solve"})


def test_solve_boyd_wong_requires_gamma():
    with pytest.raises(ConfigError, match="requires parameter 'gamma'"):
        validate_config({"experiment": "solve",
                         "parameters": {"solver": "boyd-wong"}})
    config = validate_config({"experiment": "solve",
                              "parameters": {"solver": "boyd-wong",
                                             "gamma": 2.0}})
    assert config.parameters["gamma"] == 2.0


def test_solve_caristi_valid_with_defaults():
    config = validate_config({"experiment": "solve",
                              "parameters": {"solver": "caristi"}})
    assert config.parameters["alpha"] == 1.5
    assert config.parameters["map"] == "scale(0.5)"


def test_solve_rejects_bad_templates():
    with pytest.raises(ConfigError, match="map"):
        validate_config({"experiment": "solve",
                         "parameters": {"solver": "caristi",
                                        "map": "rotate(1)"}})


def test_axioms_space_descriptors_validated():
    with pytest.raises(ConfigError, match="spaces"):
        validate_config({"experiment": "axioms",
                         "parameters": {"spaces": []}})
    with pytest.raises(ConfigError, match="spaces\\[0\\]"):
        validate_config({"experiment": "axioms",
                         "parameters": {"spaces": [{"q": 2.0}]}})


def test_cauchy_fuzz_mode_validated():
    with pytest.raises(ConfigError, match="mode"):
        validate_config({"experiment": "cauchy-fuzz",
                         "parameters": {"mode": "everything"}})


def test_load_config_roundtrip(tmp_path):
    path = tmp_path / "config.json"
    path.write_text(json.dumps({"experiment": "axioms", "seed": 9}))
    config = load_config(path)
    assert config.experiment == "axioms"
    assert config.seed == 9


def test_load_config_bad_file(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{oops")
    with pytest.raises(ConfigError):
        load_config(path)
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.json")


def test_run_rejects_unvalidated_name():
    config = ExperimentConfig(experiment="nope", parameters={})
    with pytest.raises(ConfigError):
        run_experiment(config)


# --- experiment runners (small smoke configurations) --------------------


def run_small(name, params, seed=0):
    config = validate_config({"experiment": name, "parameters": params,
                              "seed": seed})
    return run_experiment(config)


def test_axioms_runner():
    report = run_small("axioms", {"samples": 8})
    assert report.passed
    assert len(report.rows) == 3
    assert report.columns[0] == "space"
    assert report.verdicts["all_axioms_pass"] is True
    labels = [row[0] for row in report.rows]
    assert any("snowflake" in l for l in labels)
    assert any("lp_quasinorm" in l for l in labels)


def test_lemma41_runner():
    report = run_small("lemma41", {"n_max": 2000, "checkpoints": [100, 2000],
                                   "rel_err_max": 0.2})
    assert report.passed
    # 4/3 - 1 rounds below 1/3, so the closed-form exponent is not exactly 3
    assert report.verdicts["target"] == pytest.approx(27.0, rel=1e-12)
    assert report.verdicts["final_rel_err"] < 0.2
    assert report.verdicts["monotone_improvement"] is True
    assert len(report.rows) == 2
    assert report.rows[0][0] == 100


def test_gamma_sweep_runner():
    report = run_small("gamma-sweep", {"gammas": [1.6, 2.5],
                                       "horizon": 20000})
    assert report.passed
    assert report.verdicts["verdict_flips_across_2"] is True
    verdict_by_gamma = {row[0]: row[4] for row in report.rows}
    assert verdict_by_gamma[1.6] == "evidence-for"
    assert verdict_by_gamma[2.5] == "evidence-against"


def test_claims_runner():
    report = run_small("claims", {"gammas": [1.6], "horizon": 20000,
                                  "n_max": 300})
    assert report.passed
    assert report.verdicts["summable_at_low_gamma"] is True
    assert report.verdicts["min_term_exceeds_threshold"] is True
    assert report.verdicts["first_exceed_n"] == 237.0
    sections = {row[0] for row in report.rows}
    assert sections == {"summability", "min-term", "min-term-first-exceed"}


def test_cauchy_fuzz_runner():
    report = run_small("cauchy-fuzz", {"trials": 25, "max_len": 16})
    assert report.passed
    assert report.verdicts["zero_violations"] is True
    assert report.verdicts["telescope_violations"] == 0.0
    assert len(report.rows) == 25
    assert all(row[3] == 0 and row[5] == 0 for row in report.rows)


def test_solve_runner_caristi():
    report = run_small("solve", {"solver": "caristi"})
    assert report.passed
    assert report.verdicts["converged"] is True
    assert report.verdicts["iterations"] == 31.0
    assert report.verdicts["budget"] == 1.5
    assert report.verdicts["uniqueness_agreed"] is True
    assert len(report.rows) == 32  # bounds include the final iterate


def test_solve_runner_boyd_wong():
    report = run_small("solve", {"solver": "boyd-wong", "gamma": 2.0})
    assert report.passed
    assert report.verdicts["converged"] is True
    assert report.verdicts["iterations"] == 22.0
    assert report.verdicts["residual_below_eps"] is True
    assert len(report.rows) == 22
    assert report.rows[0][0] == 1  # bound indices start at the first iterate


def test_solve_multi_runner():
    report = run_small("solve-multi", {"certify_pairs": 50})
    assert report.passed
    assert report.verdicts["hypotheses_pass"] is True
    assert report.verdicts["hypothesis_pairs"] == 50.0
    assert report.verdicts["iterations"] == 537.0
    assert report.verdicts["residual_is_zero"] is True
    assert report.verdicts["cauchy_certified"] is True
    assert report.verdicts["fixed_point_verified"] is True
    # per-step rows expose the gap against its phi-iterated majorant
    n, gap, majorant, adm = report.rows[0]
    assert (n, gap, majorant, adm) == (0, 0.25, 0.25, 1.0)
    assert report.rows[1][1] <= report.rows[1][2] * (1.0 + 1e-9)


def test_error_bound_runner():
    report = run_small("error-bound", {"n_hi": 20, "settle_iters": 100})
    assert report.passed
    assert report.verdicts["bound_dominates"] is True
    assert report.verdicts["min_ratio"] > 1.0
    assert report.verdicts["n_checked"] == 20.0
    for n, bound, true_err, ratio in report.rows:
        assert bound >= true_err


# --- determinism and file output ----------------------------------------


def fuzz_config(seed, out=None):
    return validate_config({
        "experiment": "cauchy-fuzz",
        "parameters": {"trials": 10, "max_len": 12},
        "seed": seed,
        **({"output_path": out} if out else {}),
    })


def test_same_seed_same_rows():
    a = run_experiment(fuzz_config(42))
    b = run_experiment(fuzz_config(42))
    assert a.rows == b.rows
    assert a.verdicts == b.verdicts


def test_different_seed_different_rows():
    a = run_experiment(fuzz_config(42))
    b = run_experiment(fuzz_config(43))
    assert a.rows != b.rows


def test_trial_seeds_are_drawn_upfront():
    # adding trials must not disturb the earlier trials' outcomes
    short = validate_config({"experiment": "cauchy-fuzz", "seed": 7,
                             "parameters": {"trials": 4, "max_len": 12}})
    long = validate_config({"experiment": "cauchy-fuzz", "seed": 7,
                            "parameters": {"trials": 8, "max_len": 12}})
    a = run_experiment(short)
    b = run_experiment(long)
    assert b.rows[:4] == a.rows


def test_written_files_are_byte_identical(tmp_path):
    out_a = tmp_path / "a"
    out_b = tmp_path / "b"
    run_experiment(fuzz_config(42), out_dir=out_a)
    run_experiment(fuzz_config(42), out_dir=out_b)
    assert (out_a / "rows.csv").read_bytes() == (out_b / "rows.csv").read_bytes()


def test_report_write_formats(tmp_path):
    report = run_experiment(fuzz_config(42), out_dir=tmp_path)
    with open(tmp_path / "rows.csv", newline="") as fh:
        rows = list(csv.reader(fh))
    assert tuple(rows[0]) == report.columns
    assert len(rows) == 1 + len(report.rows)

    payload = json.loads((tmp_path / "verdicts.json").read_text())
    assert set(payload) == {"experiment", "seed", "passed", "runtime_seconds",
                            "verdicts"}
    assert payload["experiment"] == "cauchy-fuzz"
    assert payload["seed"] == 42
    assert payload["passed"] is True
    assert payload["verdicts"]["zero_violations"] is True


def test_float_cells_roundtrip_exactly(tmp_path):
    config = validate_config({"experiment": "lemma41",
                              "parameters": {"n_max": 500,
                                             "checkpoints": [100, 500]}})
    report = run_experiment(config, out_dir=tmp_path)
    with open(tmp_path / "rows.csv", newline="") as fh:
        rows = list(csv.reader(fh))[1:]
    for written, original in zip(rows, report.rows):
        assert float(written[1]) == original[1]
        assert float(written[2]) == original[2]


def test_output_path_from_config(tmp_path):
    out = tmp_path / "from_config"
    run_experiment(fuzz_config(1, out=str(out)))
    assert (out / "rows.csv").exists()
    assert (out / "verdicts.json").exists()


def test_no_output_written_without_target(tmp_path):
    report = run_experiment(fuzz_config(1))
    assert report.passed
    assert list(tmp_path.iterdir()) == []


# --- command-line interface ---------------------------------------------


def write_config(tmp_path, payload, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return path


def test_cli_run_pass(tmp_path, capsys):
    config = write_config(tmp_path, {
        "experiment": "cauchy-fuzz",
        "parameters": {"trials": 5, "max_len": 10},
        "seed": 3,
    })
    out = tmp_path / "out"
    code = main(["run", "--config", str(config), "--out", str(out)])
    captured = capsys.readouterr()
    assert code == 0
    assert "passed: True" in captured.out
    assert "zero_violations: True" in captured.out
    assert (out / "rows.csv").exists()


def test_cli_run_failure_still_writes(tmp_path, capsys):
    config = write_config(tmp_path, {
        "experiment": "lemma41",
        "parameters": {"n_max": 2000, "checkpoints": [100, 2000],
                       "rel_err_max": 1e-9},
    })
    out = tmp_path / "out"
    code = main(["run", "--config", str(config), "--out", str(out)])
    captured = capsys.readouterr()
    assert code == 1
    assert "passed: False" in captured.out
    assert (out / "rows.csv").exists()
    payload = json.loads((out / "verdicts.json").read_text())
    assert payload["passed"] is False


def test_cli_rejects_bad_config(tmp_path, capsys):
    config = write_config(tmp_path, {"experiment": "nope"})
    code = main(["run", "--config", str(config)])
    captured = capsys.readouterr()
    assert code == 2
    assert "config error:" in captured.err


def test_cli_seed_override(tmp_path):
    config = write_config(tmp_path, {
        "experiment": "cauchy-fuzz",
        "parameters": {"trials": 5, "max_len": 10},
        "seed": 3,
    })
    out = tmp_path / "out"
    code = main(["run", "--config", str(config), "--out", str(out),
                 "--seed", "11"])
    assert code == 0
    payload = json.loads((out / "verdicts.json").read_text())
    assert payload["seed"] == 11


def test_cli_seed_validation(tmp_path, capsys):
    config = write_config(tmp_path, {"experiment": "axioms"})
    with pytest.raises(SystemExit) as exc:
        main(["run", "--config", str(config), "--seed", "-4"])
    assert exc.value.code == 2
    assert "seed" in capsys.readouterr().err


def test_cli_list_experiments(capsys):
    assert main(["list-experiments"]) == 0
    out = capsys.readouterr().out
    for name in ALL_NAMES:
        assert name in out
    assert "columns:" in out


def test_cli_list_functions(capsys):
    assert main(["list-functions"]) == 0
    out = capsys.readouterr().out
    assert "scale(c)" in out
    assert "abs_scale(c)" in out
    assert "half_third" in out
    assert "example_phi" in out


def test_cli_run_help_documents_columns(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["run", "--help"])
    assert exc.value.code == 0
    out = capsys.readouterr().out
    assert "rows.csv columns per experiment:" in out
    assert "cauchy-fuzz: trial, length" in out

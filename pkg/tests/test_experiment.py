import csv
import json

import numpy as np
import pytest

from nsmvc.cli import main
from nsmvc.dataset import write_dataset
from nsmvc.experiment import (
    ConfigError,
    ExperimentConfig,
    ExperimentError,
    emit_trace,
    run_experiment,
    sweep,
    trial_values,
)
from nsmvc.synth import SynthSpec, generate

# two clusters: random starts cannot fall into a merge-one-split-another minimum
SEPARATED = {"n": 90, "k": 2, "dims": [10, 12], "separation": 10.0, "std": 0.5, "seed": 4}
OVERLAP = {"n": 80, "k": 3, "dims": [2, 2], "separation": 2.0, "seed": 1}


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_run_twice_identical(tmp_path):
    cfg = ExperimentConfig(synth=OVERLAP, trials=2, seed=7)
    a, b = run_experiment(cfg), run_experiment(cfg)
    assert [t.scores for t in a.trials] == [t.scores for t in b.trials]
    assert [t.seed for t in a.trials] == [7, 8]


def test_separated_data_is_solved_every_trial():
    report = run_experiment(ExperimentConfig(synth=SEPARATED, trials=30))
    s = report.summary()["nsmvc"]["acc"]
    assert (s.mean, s.std, s.trials) == (1.0, 0.0, 30)


def test_missing_labels_names_manifest(tmp_path):
    ds, _ = generate(SynthSpec(**OVERLAP))
    path = write_dataset(ds, tmp_path)
    doc = json.loads(path.read_text())
    del doc["labels"]
    path.write_text(json.dumps(doc))
    with pytest.raises(ExperimentError, match="manifest.json"):
        run_experiment(ExperimentConfig(dataset=str(path)))
    report = run_experiment(ExperimentConfig(dataset=str(path), k=3, metrics=False, trials=1))
    assert report.trials[0].scores == {}


def test_csv_and_json_agree(tmp_path):
    cfg = ExperimentConfig(synth=OVERLAP, trials=3, out=str(tmp_path))
    run_experiment(cfg)
    doc = json.loads((tmp_path / "report.json").read_text())
    rows = read_csv(tmp_path / "trials.csv")
    assert len(rows) == len(doc["trials"]) == 3
    for row, trial in zip(rows, doc["trials"]):
        for m in ("acc", "purity", "nmi"):
            assert float(row[m]) == trial["scores"][m]
        assert [float(row[f"eta_{v}"]) for v in (1, 2)] == trial["etas"]
    assert doc["metadata"]["nmi_normalization"] == "geometric"


def test_config_echo_reproduces_trials(tmp_path):
    first = run_experiment(ExperimentConfig(synth=OVERLAP, trials=2, seed=3, out=str(tmp_path)))
    echo = json.loads((tmp_path / "report.json").read_text())["config"]
    again = run_experiment(ExperimentConfig.from_dict({**echo, "out": None}))
    assert [t.scores for t in first.trials] == [t.scores for t in again.trials]


def test_baseline_methods():
    km_view = run_experiment(ExperimentConfig(synth=OVERLAP, method="km_view", trials=2))
    assert km_view.variants() == ["km(1)", "km(2)"]
    km_all = run_experiment(ExperimentConfig(synth=OVERLAP, method="km_all", trials=2))
    assert len(trial_values(km_all, "km_all", "acc")) == 2


def test_config_validation(tmp_path):
    with pytest.raises(ConfigError):
        ExperimentConfig(synth=OVERLAP, trials=0)
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict({"synth": OVERLAP, "bogus": 1})
    with pytest.raises(ConfigError):
        ExperimentConfig(synth=OVERLAP, solver={"alpha": 1.5})
    with pytest.raises(ConfigError):
        ExperimentConfig(synth=OVERLAP, dataset="x.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{\n  \"trials\": ,\n}")
    with pytest.raises(ConfigError, match="line 2"):
        ExperimentConfig.load(bad)


def test_sweep_grid_shapes(tmp_path):
    cfg = ExperimentConfig(synth=OVERLAP, trials=1, out=str(tmp_path))
    cells = sweep(cfg, [0.3, 0.4, 0.5, 0.6, 0.7, 0.8], [3, 4, 5, 6, 7, 8])
    assert len(cells) == 36
    assert {(c.alpha, c.T) for c in cells} == {(a, T) for a in (0.3, 0.4, 0.5, 0.6, 0.7, 0.8) for T in range(3, 9)}
    rows = read_csv(tmp_path / "sweep.csv")
    assert len(rows) == 36 and {"acc_mean", "acc_std", "nmi_mean"} <= set(rows[0])


def test_single_cell_sweep_equals_run():
    cfg = ExperimentConfig(synth=OVERLAP, trials=3, solver={"alpha": 0.4, "T": 3})
    (cell,) = sweep(cfg, [0.4], [3])
    assert [t.scores for t in cell.report.trials] == [t.scores for t in run_experiment(cfg).trials]


@pytest.mark.parametrize("alphas, rounds", [([1.2], [3]), ([0.5], [0]), ([], [3])])
def test_sweep_rejects_bad_grid(alphas, rounds):
    with pytest.raises(ConfigError):
        sweep(ExperimentConfig(synth=OVERLAP, trials=1), alphas, rounds)


def test_trace_files(tmp_path):
    cfg = ExperimentConfig(synth=OVERLAP, trials=2, trace=True, out=str(tmp_path), solver={"T": 4})
    run_experiment(cfg)
    for trial in (0, 1):
        rows = read_csv(tmp_path / f"trace_{trial}.csv")
        assert list(rows[0]) == [
            "outer_round", "inner_iter", "objective",
            "lambda_1", "lambda_2", "eta_1", "eta_2", "selected_1", "selected_2",
        ]
        rounds = sorted({int(r["outer_round"]) for r in rows})
        assert rounds == [1, 2, 3, 4]
        for t in rounds:
            obj = np.array([float(r["objective"]) for r in rows if int(r["outer_round"]) == t])
            assert np.all(np.diff(obj) <= 1e-9 * obj[:-1])
        last = [r for r in rows if int(r["outer_round"]) == 4]
        assert all(int(r["selected_1"]) == int(r["selected_2"]) == 80 for r in last)


def test_trace_absent_is_an_error(tmp_path):
    report = run_experiment(ExperimentConfig(synth=OVERLAP, trials=1))
    with pytest.raises(ExperimentError):
        emit_trace(report, tmp_path)


def test_cli_synth_run_and_sweep(tmp_path, capsys):
    spec = tmp_path / "spec.json"
    spec.write_text(json.dumps(OVERLAP))
    assert main(["synth", "--spec", str(spec), "--out", str(tmp_path / "data")]) == 0
    manifest = tmp_path / "data" / "manifest.json"
    assert manifest.exists()

    config = tmp_path / "config.json"
    config.write_text(json.dumps({"dataset": "data/manifest.json", "trials": 5}))
    out = tmp_path / "run"
    assert main(["run", "--config", str(config), "--trials", "2", "--seed", "9", "--out", str(out), "--trace"]) == 0
    doc = json.loads((out / "report.json").read_text())
    assert [t["seed"] for t in doc["trials"]] == [9, 10]
    assert (out / "trace_1.csv").exists()
    assert "nsmvc" in capsys.readouterr().out

    assert main(["run", "--config", str(config), "--trials", "1", "--method", "km_all"]) == 0
    assert "km_all" in capsys.readouterr().out

    sweep_out = tmp_path / "sweep"
    args = ["sweep", "--config", str(config), "--trials", "1", "--alpha", "0.3,0.5", "--T", "3", "4", "--out", str(sweep_out)]
    assert main(args) == 0
    assert len(json.loads((sweep_out / "sweep.json").read_text())["cells"]) == 4


def test_cli_errors(tmp_path, capsys):
    assert main(["run", "--config", str(tmp_path / "missing.json")]) == 2
    assert "error" in capsys.readouterr().err
    config = tmp_path / "config.json"
    config.write_text(json.dumps({"synth": OVERLAP, "trials": 1}))
    assert main(["sweep", "--config", str(config), "--alpha", "1.2", "--T", "3"]) == 2
    assert "alpha" in capsys.readouterr().err

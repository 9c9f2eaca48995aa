import csv
import json

import pytest

from odl import __version__
from odl.cli import main
from odl.config import load_run, load_sweep, read_document, shipped_configs, validate_run, \
    validate_sweep
from odl.errors import ConfigError
from odl.runner import TRAJECTORY_HEADER, execute, read_attitudes, run_simulation, run_sweep, \
    sweep_csv


def small_run(**over):
    doc = {
        "model": {"preset": "deffuant_bc", "params": {"epsilon": 0.3}},
        "N": 20,
        "init": {"kind": "uniform", "low": -1.0, "high": 1.0},
        "steps": 200,
        "seed": 4,
    }
    doc.update(over)
    return doc


def write_json(path, doc):
    path.write_text(json.dumps(doc))
    return str(path)


# -- validation -------------------------------------------------------------------

@pytest.mark.parametrize("doc, field", [
    (small_run(colour="red"), "colour"),
    (small_run(model={"preset": "deffuant_bc", "params": {"epsilon": 0.3}, "x": 1}), "model.x"),
    (small_run(model={"preset": "deffuant_bc", "params": {"eps": 0.3}}), "model"),
    (small_run(model={"preset": "nope"}), "model.preset"),
    (small_run(N=1), "N"),
    (small_run(steps=-1), "steps"),
    (small_run(init={"kind": "uniform", "mean": 0}), "init.uniform.mean"),
    (small_run(classifier={"bins": 2}), "classifier.bins"),
    (small_run(topology={"kind": "ring"}), "topology.kind"),
])
def test_invalid_run_configs_name_the_field(doc, field):
    with pytest.raises(ConfigError) as exc:
        validate_run(doc)
    assert str(exc.value).startswith(field)


def test_invalid_sweep_configs():
    base = small_run()
    with pytest.raises(ConfigError, match="not a real-valued field"):
        validate_sweep({"base": base, "sweep": [{"name": "model.preset", "lo": 0, "hi": 1,
                                                 "steps": 2}]})
    with pytest.raises(ConfigError, match="replicas"):
        validate_sweep({"base": base, "replicas": 0,
                        "sweep": [{"name": "N", "lo": 10, "hi": 20, "steps": 2}]})
    with pytest.raises(ConfigError):
        validate_sweep({"base": base, "sweep": []})


def test_sweep_cells_and_int_fields():
    sweep = validate_sweep({"base": small_run(), "replicas": 2, "sweep": [
        {"name": "N", "lo": 10, "hi": 20, "steps": 3},
        {"name": "model.params.alpha", "lo": 0.1, "hi": 0.3, "steps": 3}]})
    cells = sweep.cells()
    assert len(cells) == 9
    assert cells[1] == {"N": 10.0, "model.params.alpha": 0.2}  # last axis fastest
    cfg = sweep.cell_config(cells[4])
    assert cfg.N == 15 and isinstance(cfg.N, int)
    assert cfg.model.params["alpha"] == 0.2


def test_shipped_configs_all_validate():
    names = shipped_configs()
    assert {"baumann", "bc_sweep", "becker17", "becker19", "deffuant", "degroot",
            "sj_sweep"} <= set(names)
    for name in names:
        doc = read_document(name)
        (validate_sweep if "sweep" in doc else validate_run)(doc)


def test_read_document_errors(tmp_path):
    with pytest.raises(ConfigError):
        read_document(str(tmp_path / "missing.json"))
    bad = tmp_path / "bad.json"
    bad.write_text("{nope")
    with pytest.raises(ConfigError, match="invalid JSON"):
        read_document(str(bad))
    bad.write_text("[1, 2]")
    with pytest.raises(ConfigError):
        read_document(str(bad))


# -- runs -----------------------------------------------------------------------

def test_steps_zero_csv_has_n_rows(tmp_path):
    cfg = validate_run(small_run(steps=0))
    run_simulation(cfg, out_dir=tmp_path)
    lines = (tmp_path / "trajectory.csv").read_text().splitlines()
    assert lines[0] == TRAJECTORY_HEADER
    assert len(lines) == 1 + cfg.N and all(line.startswith("0,") for line in lines[1:])


def test_reruns_are_byte_identical(tmp_path):
    cfg = validate_run(small_run(steps=2000))
    for d in ("a", "b"):
        run_simulation(cfg, out_dir=tmp_path / d)
    for name in ("trajectory.csv", "classification.json"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_classification_json_shape(tmp_path):
    record = run_simulation(validate_run(small_run()), out_dir=tmp_path)
    on_disk = json.loads((tmp_path / "classification.json").read_text())
    assert on_disk == record
    assert set(record) == {"label", "modes", "median", "variance", "params"}
    assert record["params"]["preset"] == "deffuant_bc"


def test_wide_confidence_bound_reaches_consensus():
    cfg = validate_run(small_run(N=100, steps=10_000, bound=1.0,
                                 model={"preset": "deffuant_bc", "params": {"epsilon": 2.0}}))
    _, label, _ = execute(cfg)
    assert label.value == "Consensus"


def test_seed_override_changes_output():
    cfg = validate_run(small_run())
    a, _, _ = execute(cfg, seed=1)
    b, _, _ = execute(cfg, seed=2)
    assert (a.initial != b.initial).any()


# -- sweeps -----------------------------------------------------------------------

def test_bc_sweep_has_consensus_and_fragmentation():
    sweep = load_sweep("bc_sweep")
    assert len(sweep.cells()) == 20 and sweep.base.N == 200
    labels = {r["label"] for r in run_sweep(sweep, jobs=1)}
    assert {"Consensus", "Fragmentation"} <= labels


def test_single_cell_sweep_reduces_to_run():
    base = small_run()
    sweep = validate_sweep({"base": base, "sweep": [
        {"name": "model.params.epsilon", "lo": 0.3, "hi": 0.3, "steps": 1}]})
    (row,) = run_sweep(sweep)
    _, label, summary = execute(validate_run(base), seed=row["seed"])
    assert row["seed"] == base["seed"]
    assert row["label"] == label.value
    assert row["median"] == repr(summary.median)


def test_rows_ordered_and_reproducible_from_seed():
    sweep = validate_sweep({"base": small_run(), "replicas": 3, "sweep": [
        {"name": "model.params.epsilon", "lo": 0.1, "hi": 0.5, "steps": 3}]})
    rows = run_sweep(sweep, jobs=2)
    assert [(r["cell"], r["replica"]) for r in rows] == [(c, r) for c in range(3)
                                                         for r in range(3)]
    for row in rows:
        cfg = sweep.cell_config({"model.params.epsilon": row["model.params.epsilon"]})
        assert execute(cfg, row["seed"])[1].value == row["label"]


def test_failed_replicas_fill_error_column():
    base = small_run(model={"preset": "sj", "params": {"reject": 0.5}})
    sweep = validate_sweep({"base": base, "sweep": [
        {"name": "model.params.accept", "lo": 0.3, "hi": 0.7, "steps": 3}]})
    rows = list(csv.DictReader(sweep_csv(sweep, run_sweep(sweep)).splitlines()))
    # accept = reject is allowed; only the 0.7 cell breaks the ordering
    assert [bool(r["error"]) for r in rows] == [False, False, True]
    assert "LatitudeOrder" in rows[2]["error"] and rows[2]["label"] == ""


# -- CLI ------------------------------------------------------------------------

def test_cli_version(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    assert __version__ in capsys.readouterr().out


def test_cli_simulate_then_classify(tmp_path, capsys):
    cfg = write_json(tmp_path / "run.json", small_run(steps=3000))
    assert main(["simulate", "--config", cfg, "--out", str(tmp_path / "o")]) == 0
    record = json.loads(capsys.readouterr().out)
    traj = str(tmp_path / "o" / "trajectory.csv")
    assert read_attitudes(traj).size == 20
    assert main(["classify", "--input", traj, "--bound", "1"]) == 0
    assert json.loads(capsys.readouterr().out)["label"] == record["label"]
    assert main(["classify", "--input", traj, "--bound", "none", "--eps-ext", "0.5"]) == 0


def test_cli_simulate_bundled_config_with_seed(tmp_path, capsys):
    assert main(["simulate", "--config", "degroot", "--seed", "3", "--out", str(tmp_path)]) == 0
    assert json.loads(capsys.readouterr().out)["params"]["seed"] == 3


def test_cli_sweep_jobs_identical(tmp_path, capsys):
    doc = {"base": small_run(), "replicas": 2, "output": "s.csv",
           "sweep": [{"name": "model.params.epsilon", "lo": 0.1, "hi": 0.6, "steps": 4}]}
    cfg = write_json(tmp_path / "sweep.json", doc)
    assert main(["sweep", "--config", cfg, "--jobs", "1", "--out", str(tmp_path / "j1")]) == 0
    assert main(["sweep", "--config", cfg, "--jobs", "4", "--out", str(tmp_path / "j4")]) == 0
    assert "wrote 8 rows" in capsys.readouterr().out
    assert (tmp_path / "j1" / "s.csv").read_bytes() == (tmp_path / "j4" / "s.csv").read_bytes()


def test_cli_fit(tmp_path, capsys):
    avg = tmp_path / "avg.csv"
    avg.write_text("subject,a_initial,m_avg,a_updated\ns1,0,1,0.3\ns2,0,2,2\n")
    assert main(["fit", "alpha", "--input", str(avg)]) == 0
    out = json.loads(capsys.readouterr().out)["subjects"]
    assert [s["type"] for s in out] == ["Compromiser", "Adopter"]
    pair = tmp_path / "pair.csv"
    rows = ["subject,a_initial,m_m,m_n,a_final"]
    from odl.models import hew_update
    for k in range(30):
        m_m = 150.0 + 2.0 * k
        rows.append(f"s{k},150,{m_m},148,{hew_update(150.0, m_m, 148.0, 5.0, 10.0)!r}")
    pair.write_text("\n".join(rows) + "\n")
    assert main(["fit", "hew", "--input", str(pair), "--raw-weights"]) == 0
    fit = json.loads(capsys.readouterr().out)
    assert fit["alpha"] == pytest.approx(5.0, rel=0.05)
    assert fit["beta"] == pytest.approx(10.0, rel=0.05)


def test_cli_exit_codes(tmp_path, capsys, monkeypatch):
    bad = write_json(tmp_path / "bad.json", small_run(colour="red"))
    assert main(["simulate", "--config", bad, "--out", str(tmp_path)]) == 1
    assert "colour" in capsys.readouterr().err
    assert main(["sweep", "--config", "bc_sweep", "--jobs", "0"]) == 1
    assert main(["classify", "--input", str(tmp_path / "missing.csv"), "--bound", "1"]) == 2
    no_col = tmp_path / "x.csv"
    no_col.write_text("a,b\n1,2\n")
    assert main(["classify", "--input", str(no_col), "--bound", "1"]) == 2
    monkeypatch.setenv("ODL_LOG", "loud")
    assert main(["classify", "--input", str(no_col), "--bound", "1"]) == 1


def test_cli_log_level(tmp_path, capsys, monkeypatch):
    import logging
    monkeypatch.setenv("ODL_LOG", "info")
    monkeypatch.setattr(logging.getLogger(), "handlers", [])
    cfg = write_json(tmp_path / "run.json", small_run(steps=10))
    assert main(["simulate", "--config", cfg, "--out", str(tmp_path)]) == 0
    assert "INFO" in capsys.readouterr().err


def test_loaders_accept_bundled_names():
    assert load_run("degroot").N == 50
    assert load_sweep("sj_sweep").replicas == 20

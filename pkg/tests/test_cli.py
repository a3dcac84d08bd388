import io
import json
import os
import subprocess
import sys

import pytest

from solitonlab import cli
from solitonlab.errors import NumericalAbort
from solitonlab.potentials import harmonic, rectangular_barrier


def run(argv):
    buf = io.StringIO()
    code, manifest, report = cli.run(argv, stdout=buf)
    return code, manifest, report, buf.getvalue()


def outputs(path):
    return json.loads((path / "manifest.json").read_text())["outputs"]


@pytest.fixture
def barrier_file(tmp_path):
    path = tmp_path / "barrier.json"
    path.write_text(json.dumps(rectangular_barrier(1.0, 1.0).to_dict()))
    return str(path)


@pytest.mark.parametrize("argv,files", [
    (["constants"], ["constants.json"]),
    (["dispersion", "--n", "11"], ["dispersion.csv"]),
    (["kg", "--k", "1", "2"], ["kg_dispersion.csv"]),
    (["kg", "evolve", "--steps", "50", "--snapshot-every", "25"], None),
    (["kg", "evanescent"], None),
    (["bohm", "qp", "--profile", "gaussian"], None),
    (["bohm", "residuals"], None),
    (["soliton", "--t-end", "0.01"], None),
    (["soliton", "--eq", "gp", "--g", "-1", "--t-end", "0.01"], None),
    (["zigzag", "--n", "1000", "--seed", "5"], None),
    (["ambiguity", "--shape", "gaussian"], None),
    (["ambiguity", "widths", "--shape", "rectangular"], None),
    (["bohr", "--n", "1,3"], ["orbits.csv"]),
    (["repro", "fig5.1"], ["fig5_1.csv"]),
])
def test_subcommands_write_data_and_records(tmp_path, argv, files):
    out = tmp_path / "out"
    code, manifest, report, _ = run(argv + ["--out", str(out)])
    assert code == 0
    listed = outputs(out)
    assert listed[-2:] == ["report.json", "manifest.json"]
    assert len(listed) == len(set(listed)) >= 3
    assert sorted(listed) == sorted(os.listdir(out))
    if files:
        assert listed[:-2] == files
    rep = json.loads((out / "report.json").read_text())
    assert rep["status"] in ("ok", "warning")


def test_scatter_with_potential_file(tmp_path, barrier_file):
    out = tmp_path / "o"
    code, _, report, _ = run(["stationary", "scatter", "--potential", barrier_file, "--E", "0.5",
                              "--out", str(out)])
    assert code == 0
    assert abs(report.scalars["R_plus_T"] - 1) < 1e-10
    table = (out / outputs(out)[0]).read_text().splitlines()
    assert table[0] == "z,re_psi,im_psi,abs2,V"


def test_bound_states_with_potential_file(tmp_path):
    pot = tmp_path / "harmonic.json"
    pot.write_text(json.dumps(harmonic().to_dict()))
    out = tmp_path / "b"
    code, _, report, _ = run(["stationary", "bound", "--potential", str(pot), "--n", "3",
                              "--out", str(out)])
    assert code == 0
    assert [report.scalars[f"E_{j}"] for j in range(3)] == pytest.approx([0.5, 1.5, 2.5], abs=1e-6)


def test_zigzag_document(tmp_path, barrier_file):
    out = tmp_path / "z"
    code, *_ = run(["zigzag", "--potential", barrier_file, "--n", "20000", "--seed", "9",
                    "--out", str(out)])
    assert code == 0
    doc = json.loads((out / outputs(out)[0]).read_text())
    assert doc["seed"] == 9 and doc["prng"] == "philox4x32-10"
    assert doc["within_5_sigma"] is True


def test_stdout_fallback(monkeypatch):
    monkeypatch.delenv(cli.OUT_ENV, raising=False)
    code, _, _, text = run(["bohr", "--n", "1..2"])
    assert code == 0
    assert text.splitlines()[0].startswith("n,")
    assert len(text.splitlines()) == 3


def test_environment_output_directory(tmp_path, monkeypatch):
    monkeypatch.setenv(cli.OUT_ENV, str(tmp_path / "env"))
    assert run(["bohr"])[0] == 0
    assert (tmp_path / "env" / "orbits.csv").exists()
    code, *_ = run(["bohr", "--out", str(tmp_path / "flag")])
    assert code == 0 and (tmp_path / "flag" / "orbits.csv").exists()


def test_file_output_path(tmp_path):
    target = tmp_path / "levels.csv"
    assert run(["bohr", "--out", str(target)])[0] == 0
    assert target.read_text().startswith("n,")
    assert (tmp_path / "levels.manifest.json").exists()
    assert outputs_from(tmp_path / "levels.manifest.json")[0] == "levels.csv"


def outputs_from(path):
    return json.loads(path.read_text())["outputs"]


def test_json_format(tmp_path):
    out = tmp_path / "j"
    assert run(["dispersion", "--n", "5", "--format", "json", "--out", str(out)])[0] == 0
    doc = json.loads((out / "dispersion.json").read_text())
    assert len(doc["k"]) == 5


def test_config_precedence(tmp_path):
    cfg = tmp_path / "d.json"
    cfg.write_text(json.dumps({"n": 7, "kmax": 2.0}))
    _, manifest, _, text = run(["dispersion", "--config", str(cfg), "--n", "3"])
    params = manifest.config["parameters"]
    assert params == {"kmin": -3.0, "kmax": 2.0, "n": 3, "f_o": 1.0}
    assert len(text.splitlines()) == 4


def test_hash_independent_of_threads_and_output(tmp_path):
    a = run(["repro", "fig7.2", "--threads", "1", "--out", str(tmp_path / "a")])[1]
    b = run(["repro", "fig7.2", "--threads", "4", "--out", str(tmp_path / "b")])[1]
    c = run(["repro", "fig7.2", "--format", "json", "--out", str(tmp_path / "c")])[1]
    assert a.config_hash == b.config_hash != c.config_hash


def test_repro_lists_targets():
    code, _, _, text = run(["repro"])
    assert code == 0
    assert text.split() == list(cli.REPRO_TARGETS) + ["all"]


def test_repro_width_warns(tmp_path):
    out = tmp_path / "w"
    code, _, report, _ = run(["repro", "width", "--out", str(out)])
    assert code == 0
    assert report.status == "warning"
    doc = json.loads((out / "width.json").read_text())
    assert doc["waveguide_width"] == pytest.approx(1.2131551e-12, rel=1e-6)
    assert doc["relative_to_reference"] == pytest.approx(-0.9, abs=1e-3)


@pytest.mark.parametrize("argv", [
    ["nonsense"],
    ["bohr", "--bogus"],
    ["ambiguity", "--shape", "triangle"],
    ["zigzag", "--seed", "-1"],
    ["kg", "--threads", "0"],
    ["bohr", "--n", "0..3"],
    ["soliton", "--eq", "nlq", "--dt", "0.01", "--t-end", "0.01"],
])
def test_invalid_invocations_exit_2(tmp_path, argv):
    out = tmp_path / "bad"
    code, *_ = run(argv + ["--out", str(out)])
    assert code == 2
    assert not out.exists()


@pytest.mark.parametrize("text,fragment", [
    ('{"eq": "nls", "eq": "gp"}', "duplicate key 'eq'"),
    ('{"dt": "fast"}', "$.dt: expected float"),
    ('{"grid": {"nn": 3}}', "$.grid: unknown key 'nn'"),
    ('{"dt": 1e-3,}', ":1:"),
])
def test_config_errors(tmp_path, capsys, text, fragment):
    cfg = tmp_path / "c.json"
    cfg.write_text(text)
    code, *_ = run(["soliton", "--config", str(cfg), "--out", str(tmp_path / "o")])
    assert code == 2
    assert fragment in capsys.readouterr().err
    assert not (tmp_path / "o").exists()


def test_numerical_abort_exit_3(tmp_path, monkeypatch):
    def explode(cfg, args):
        raise NumericalAbort("field underflow")

    monkeypatch.setitem(cli.HANDLERS, "soliton", explode)
    out = tmp_path / "abort"
    code, _, report, _ = run(["soliton", "--out", str(out)])
    assert code == 3
    assert sorted(os.listdir(out)) == ["manifest.json", "report.json"]
    rep = json.loads((out / "report.json").read_text())
    assert rep["status"] == "aborted" and "underflow" in rep["diagnostics"][0]


def test_console_script_entry():
    proc = subprocess.run([sys.executable, "-m", "solitonlab.cli", "bohr", "--n", "1"],
                          capture_output=True, text=True, env={**os.environ, cli.OUT_ENV: ""})
    assert proc.returncode == 0
    assert proc.stdout.startswith("n,")

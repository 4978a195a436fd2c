import csv
import io
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from symsector import io as sio
from symsector.cli import main
from symsector.errors import DimensionMismatch
from symsector.sequences import MapSequence

CAT = {"d": 1, "rows": [[1.0, 1.0], [1.0, 2.0]]}


def _write(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return str(path)


def _run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_sigma_report(tmp_path, capsys):
    code, out, _ = _run(capsys, "sigma", "-i", _write(tmp_path, "m.json", CAT), "--no-timestamp")
    rep = json.loads(out)
    assert code == 0 and rep["command"] == "sigma"
    assert rep["t1"] == 1.0
    assert rep["sigma"] == pytest.approx(1 + math.sqrt(2), abs=1e-15)
    assert "generated_at" not in rep


def test_sigma_with_oracle_band(tmp_path, capsys):
    code, out, _ = _run(capsys, "sigma", "-i", _write(tmp_path, "m.json", CAT), "--samples", "20000", "--seed", "4")
    rep = json.loads(out)
    assert code == 0 and rep["oracle"]["within_band"] and rep["oracle"]["seed"] == 4
    assert "generated_at" in rep


def test_check_identity(tmp_path, capsys):
    path = _write(tmp_path, "id.json", {"d": 2, "rows": np.eye(4).tolist()})
    code, out, _ = _run(capsys, "check", "-i", path)
    rep = json.loads(out)
    assert code == 0 and rep["symplectic"] is True and rep["class"] == "Monotone"


def test_check_non_symplectic(tmp_path, capsys):
    code, out, _ = _run(capsys, "check", "-i", _write(tmp_path, "m.json", {"d": 1, "rows": [[2, 0], [0, 1]]}))
    rep = json.loads(out)
    assert code == 0 and rep["symplectic"] is False and rep["class"] is None


def test_factor_and_canon(tmp_path, capsys):
    path = _write(tmp_path, "m.json", CAT)
    code, out, _ = _run(capsys, "factor", "-i", path)
    rep = json.loads(out)
    assert code == 0 and rep["A"] == [[1.0]] and rep["P_definiteness"]["class"] == "PositiveDefinite"
    assert rep["cond_A"] == 1.0
    code, out, _ = _run(capsys, "canon", "-i", path)
    rep = json.loads(out)
    assert code == 0 and rep["t"] == pytest.approx([1.0])


def test_validation_error_exit_code(tmp_path, capsys):
    code, out, err = _run(capsys, "factor", "-i", _write(tmp_path, "m.json", {"d": 1, "rows": [[2, 0], [0, 1]]}))
    assert code == 2 and out == ""
    assert json.loads(err)["error"]["type"] == "NotSymplectic"
    code, _, err = _run(capsys, "sigma", "-i", str(tmp_path / "missing.json"))
    assert code == 2 and "error" in json.loads(err)
    code, _, err = _run(capsys, "sigma", "-i", _write(tmp_path, "bad.json", {"d": 2, "rows": [[1, 1], [1, 2]]}))
    assert code == 2 and json.loads(err)["error"]["type"] == "DimensionMismatch"


def test_analyze_csv_columns(tmp_path, capsys):
    code, out, _ = _run(capsys, "analyze", "-i", _write(tmp_path, "m.json", CAT), "--n-max", "10", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0
    assert list(rows[0]) == ["n", "sigma_n", "t1_n", "diameter_n", "q_probe_0"]
    assert [int(r["n"]) for r in rows] == list(range(1, 11))
    for r in rows:
        assert float(r["diameter_n"]) == pytest.approx(0.5 * math.log1p(1.0 / float(r["t1_n"])), abs=1e-12)


def test_analyze_conditioning_stop_still_reports(tmp_path, capsys):
    out_path = tmp_path / "rep.json"
    code, _, _ = _run(capsys, "analyze", "-i", _write(tmp_path, "m.json", CAT), "--n-max", "25", "-o", str(out_path))
    rep = json.loads(out_path.read_text())
    assert code == 3
    assert rep["flags"]["conditioning_stop"] == 20 and len(rep["steps"]) == 19


def test_analyze_with_probe_and_infinity_sentinel(tmp_path, capsys):
    path = _write(tmp_path, "id.json", {"maps": [{"d": 1, "rows": [[1, 0], [0, 1]]}] * 3})
    code, out, _ = _run(capsys, "analyze", "-i", path, "--probe", "2,3", "--no-timestamp")
    rep = json.loads(out)
    assert code == 0
    assert all(s["diameter_n"] == math.inf and s["q_probe_0"] == 6.0 for s in rep["steps"])
    assert rep["flags"]["verdict"] == "NoVerdict"
    code, _, err = _run(capsys, "analyze", "-i", path, "--probe", "1,2,3")
    assert code == 2


def test_dist_and_mobius_round_trip(tmp_path, capsys):
    subs = {"subspaces": [{"d": 1, "rows": [[1.0]]}, {"d": 1, "rows": [[math.e]]}]}
    spath = _write(tmp_path, "s.json", subs)
    code, out, _ = _run(capsys, "dist", "-i", spath)
    assert code == 0 and json.loads(out)["distances"][0][1] == pytest.approx(0.5)
    out_path = tmp_path / "img.json"
    code, _, _ = _run(capsys, "mobius", "-i", _write(tmp_path, "m.json", CAT), "-i", spath, "-o", str(out_path))
    img = json.loads(out_path.read_text())
    assert code == 0 and img["subspaces"][0]["rows"] == [[1.5]]
    code, out, _ = _run(capsys, "dist", "-i", str(out_path))
    assert code == 0
    code, _, err = _run(capsys, "mobius", "-i", spath)
    assert code == 2 and json.loads(err)["error"]["type"] == "SchemaError"


def test_gen69_output_reingests(tmp_path, capsys):
    spec = {"example69": {"A": [[1.0, 0.0], [0.0, 0.5]], "P": [[0.0, 0.0], [0.0, 0.0]], "tau": [[1.0, 2.0]] * 6}}
    out_path = tmp_path / "seq.json"
    code, _, _ = _run(capsys, "gen69", "-i", _write(tmp_path, "e.json", spec), "-o", str(out_path), "--probe", "1,1,1,1")
    rep = json.loads(out_path.read_text())
    assert code == 0 and len(rep["maps"]) == 6
    assert rep["criterion"]["ratio_bound_holds"] and rep["criterion"]["nondecreasing"]
    seq = sio.read_sequence(rep)
    assert isinstance(seq, MapSequence) and len(seq) == 6
    code, out, _ = _run(capsys, "analyze", "-i", str(out_path), "--n-max", "6")
    assert code == 0 and len(json.loads(out)["steps"]) == 6
    code, out, _ = _run(capsys, "gen69", "-i", _write(tmp_path, "e.json", spec), "--format", "csv")
    assert code == 0 and out.splitlines()[0] == "n,q" and len(out.splitlines()) == 8


def test_gen69_rejects_expanding_a(tmp_path, capsys):
    spec = {"example69": {"A": [[2.0]], "P": [[0.0]], "tau": [[1.0, 1.0]]}}
    code, _, err = _run(capsys, "gen69", "-i", _write(tmp_path, "e.json", spec))
    assert code == 2 and json.loads(err)["error"]["type"] == "SpecViolation"


def test_oracle_command(tmp_path, capsys):
    code, out, _ = _run(capsys, "oracle", "-i", _write(tmp_path, "m.json", CAT), "--samples", "100000")
    rep = json.loads(out)
    assert code == 0 and 2.414 <= rep["mc_inf_beta"] <= 2.439 and rep["within_band"]


def test_reports_are_deterministic(tmp_path, capsys):
    path = _write(tmp_path, "m.json", CAT)
    outputs = []
    for _ in range(2):
        code, out, _ = _run(capsys, "oracle", "-i", path, "--samples", "5000", "--seed", "9", "--no-timestamp")
        outputs.append(out)
    assert outputs[0] == outputs[1]


def test_float_formatting():
    assert sio.dumps(1.0) == "1.0"
    assert sio.dumps(0.1) == "0.10000000000000001"
    assert sio.dumps(math.inf) == "Infinity"
    assert json.loads(sio.dumps({"x": [1 / 3, 2.0]}))["x"][0] == 1 / 3
    assert sio.dumps([np.float64(2.5), np.int64(3), True, None]) == "[2.5, 3, true, null]"


def test_schema_checks():
    with pytest.raises(sio.SchemaError):
        sio.read_matrix({"rows": [[1.0, 2.0]]})
    with pytest.raises(sio.SchemaError):
        sio.read_matrix({"rows": [[1.0, float("nan")], [0.0, 1.0]]})
    with pytest.raises(DimensionMismatch):
        sio.read_matrix({"d": 3, "rows": [[1.0]]}, "graph")
    with pytest.raises(sio.SchemaError):
        sio.read_sequence({"nothing": 1})
    with pytest.raises(sio.SchemaError):
        sio.read_example69({"example69": {"A": [[1.0]]}})


def test_module_entry_point(tmp_path):
    path = _write(tmp_path, "m.json", CAT)
    res = subprocess.run(
        [sys.executable, "-m", "symsector", "sigma", "-i", path, "--format", "csv"],
        capture_output=True, text=True,
    )
    assert res.returncode == 0
    lines = res.stdout.splitlines()
    assert lines[:3] == ["key,value", "t1,1.0", "sigma,2.4142135623730949"]
    assert lines[3] == 'witness,"[1.189207115002721, 0.8408964152537145]"'

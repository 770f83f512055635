import json

import numpy as np

from hodgecurl.cli import EXIT_CONFIG, EXIT_OK, EXIT_PARSE, EXIT_VERIFY, main
from hodgecurl.report import dumps


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_info_ball(capsys):
    code, out, err = run(capsys, "info", "--gen", "ball", "--radius", "1", "--refine", "1")
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["mesh"]["boundary"]["euler_characteristic"] == 2
    assert doc["all_passed"]
    assert doc["schema_version"]


def test_info_torus(capsys):
    code, out, _ = run(capsys, "info", "--gen", "solid-torus", "--R", "2", "--r", "1", "--nu", "8", "--nv", "8", "--nw", "4")
    assert code == EXIT_OK
    assert json.loads(out)["mesh"]["boundary"]["euler_characteristic"] == 0


def test_malformed_mesh_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.msh"
    bad.write_text("$MeshFormat\n2.2 0 8\n$EndMeshFormat\n$Nodes\n1\n1 0 zero 0\n$EndNodes\n")
    code, out, err = run(capsys, "info", "--mesh", str(bad))
    assert code == EXIT_PARSE
    assert out == ""
    assert "line 6" in err


def test_missing_source_is_config_error(capsys):
    code, out, err = run(capsys, "info")
    assert code == EXIT_CONFIG and out == ""


def test_bad_partition_names_bound(capsys):
    code, out, err = run(capsys, "spectrum", "--gen", "solid-torus", "--nu", "6", "--nv", "6", "--nw", "3", "--partition-I", "2")
    assert code == EXIT_CONFIG
    assert "1..1" in err
    assert out == ""


def test_ball_spectrum(capsys):
    code, out, _ = run(capsys, "spectrum", "--gen", "ball", "--refine", "1")
    doc = json.loads(out)
    sp = doc["spectrum"]
    assert code == EXIT_OK
    assert len(sp["eigenvalues"]) == 6
    assert sp["gkn_asymmetry"] <= 1e-10
    assert sp["gradient_kernel_dimension"] > 0


def test_torus_partitions_give_two_certified_reports(capsys):
    base = ["spectrum", "--gen", "solid-torus", "--nu", "6", "--nv", "6", "--nw", "3", "--k", "4"]
    _, a, _ = run(capsys, *base, "--partition-I", "1")
    _, b, _ = run(capsys, *base, "--partition-I", "")
    da, db = json.loads(a), json.loads(b)
    assert da["spectrum"]["eigenvalues"] != db["spectrum"]["eigenvalues"]
    assert da["spectrum"]["gkn_asymmetry"] <= 1e-10 and db["spectrum"]["gkn_asymmetry"] <= 1e-10


def test_verify_tet(capsys):
    code, out, _ = run(capsys, "verify", "--gen", "tet")
    assert code == EXIT_OK
    assert json.loads(out)["all_passed"]


def test_verify_torus_and_negative_control(capsys):
    base = ["verify", "--gen", "solid-torus", "--nu", "6", "--nv", "6", "--nw", "3"]
    code, out, _ = run(capsys, *base)
    doc = json.loads(out)
    assert code == EXIT_OK
    assert doc["hodge"]["harmonic_dimension"] == 2
    gram = np.array(doc["basis"]["gram_matrix"])
    assert np.abs(gram - [[0, 1], [-1, 0]]).max() <= doc["basis"]["tolerance"]
    code, out, err = run(capsys, *base, "--drop-symplectic-row")
    failed = [c["name"] for c in json.loads(out)["checks"] if not c["passed"]]
    assert code == EXIT_VERIFY
    assert failed == ["GKN asymmetry of restricted curl"]


def test_config_file_and_flag_precedence(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# run settings\ngen = solid-torus\nnu = 5\nnv = 6\nnw = 3\nk = 2\n")
    code, out, _ = run(capsys, "spectrum", "--config", str(cfg), "--k", "3")
    doc = json.loads(out)
    assert code == EXIT_OK
    assert doc["config"]["k"] == 3
    assert doc["config"]["gen_params"]["nu"] == 5


def test_unknown_config_key(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("gen = ball\ncolour = blue\n")
    code, _, err = run(capsys, "info", "--config", str(cfg))
    assert code == EXIT_CONFIG and "colour" in err


def test_out_file_and_sidecars(tmp_path, capsys):
    out = tmp_path / "rep.json"
    code, stdout, _ = run(capsys, "basis", "--gen", "genus2", "--out", str(out), "--sidecar")
    assert code == EXIT_OK and stdout == ""
    doc = json.loads(out.read_text())
    J = [[0, 0, 1, 0], [0, 0, 0, 1], [-1, 0, 0, 0], [0, -1, 0, 0]]
    assert np.abs(np.array(doc["basis"]["gram_matrix"]) - J).max() <= doc["basis"]["tolerance"]


def test_large_matrix_goes_to_sidecar(tmp_path):
    from hodgecurl.report import _Sidecars, matrix_entry

    sc = _Sidecars()
    entry = matrix_entry(np.arange(100.0).reshape(10, 10), "big", sc)
    assert entry["shape"] == [10, 10] and entry["sidecar"] == "big"
    (name,) = sc.write(str(tmp_path / "r.json"))
    raw = (tmp_path / name).read_bytes()
    dims = np.frombuffer(raw[:16], dtype="<u8")
    data = np.frombuffer(raw[16:], dtype="<f8").reshape(dims)
    assert np.array_equal(data, np.arange(100.0).reshape(10, 10))


def test_dumps_is_canonical():
    a = dumps({"b": 0.1, "a": [1, 2.5, None, float("nan")], "c": {"y": True, "x": 1e-300}})
    assert a == dumps({"c": {"x": 1e-300, "y": True}, "a": [1, 2.5, None, float("nan")], "b": 0.1})
    assert "0.10000000000000001" in a
    json.loads(a)


def test_curlcurl_command(capsys):
    code, out, _ = run(capsys, "curlcurl", "--gen", "ball", "--refine", "0", "--k", "3")
    doc = json.loads(out)
    assert code == EXIT_OK
    assert doc["curlcurl"]["square_check"]["max_relative_mismatch"] <= 1e-7
    assert doc["curlcurl"]["dirichlet"]["kernel_dimension"] == doc["curlcurl"]["dirichlet"]["interior_vertices"]

import json
import subprocess
import sys

import pytest

from lassokit import fixtures as fx
from lassokit import serialize as ser
from lassokit.cli import main
from lassokit.config import set_max_carrier
from lassokit.cset import Hom


@pytest.fixture(autouse=True)
def _reset_ceiling():
    yield
    set_max_carrier(None)


@pytest.fixture
def p3_files(tmp_path):
    p3 = fx.p3_contraction()
    paths = {}
    for key, doc in {"base": ser.instance_to_dict(p3["Y"]), "sub": ser.hom_to_dict(p3["f"]),
                     "decomp": ser.decomposition_to_dict(p3["d"])}.items():
        paths[key] = str(tmp_path / f"{key}.json")
        ser.write_json(paths[key], doc)
    return paths


def _run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_contract_p3(p3_files, tmp_path, capsys):
    dot = tmp_path / "c.dot"
    code, out, _ = _run(["contract", "--base", p3_files["base"], "--sub", p3_files["sub"],
                         "--lasso", "cc", "--dot", str(dot)], capsys)
    assert code == 0
    result = json.loads(out)["contraction"]["result"]
    assert result["carriers"] == {"V": 2, "E": 2}
    assert "{0,1}" in dot.read_text()


def test_contract_trivial_keeps_base(p3_files, capsys):
    code, out, _ = _run(["contract", "--base", p3_files["base"], "--sub", p3_files["sub"],
                         "--lasso", "trivial"], capsys)
    doc = json.loads(out)["contraction"]
    assert code == 0 and doc["result"] == doc["base"]


def test_non_mono_sub_exit_3(tmp_path, p3_files, capsys):
    y = fx.path3()
    bad = Hom(fx.discrete(2), y, {"V": [1, 1], "E": []})
    path = tmp_path / "bad.json"
    ser.write_json(str(path), ser.hom_to_dict(bad))
    code, _, err = _run(["contract", "--base", p3_files["base"], "--sub", str(path), "--lasso", "cc"], capsys)
    assert code == 3 and "V" in err


def test_schema_mismatch_exit_4(p3_files, capsys):
    code, _, err = _run(["contract", "--base", p3_files["base"], "--sub", p3_files["sub"],
                         "--lasso", "rgrph:deloop"], capsys)
    assert code == 4 and "RGrph" in err


def test_parse_errors_exit_2(tmp_path, p3_files, capsys):
    garbage = tmp_path / "g.json"
    garbage.write_text("{not json")
    assert _run(["contract", "--base", str(garbage), "--sub", p3_files["sub"], "--lasso", "cc"], capsys)[0] == 2
    assert _run(["contract", "--base", p3_files["base"]], capsys)[0] == 2
    assert _run(["contract", "--base", p3_files["base"], "--sub", p3_files["sub"], "--lasso", "zz"], capsys)[0] == 2
    assert _run(["frobnicate"], capsys)[0] == 2


def test_pushforward_both_verdict(p3_files, tmp_path, capsys):
    dot = tmp_path / "d.dot"
    code, out, _ = _run(["pushforward", "--decomp", p3_files["decomp"], "--sub", p3_files["sub"],
                         "--lasso", "cc", "--method", "both", "--intermediates", "--dot", str(dot)], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["equivalent"] is True
    assert all(doc["images"]["checks"].values())
    assert "intermediates" in doc["span"]
    assert "cluster_1" in dot.read_text()


def test_cyclic_span_gate_exit_3(tmp_path, capsys):
    cyc = fx.rgraph_cycle_fixture()
    d, s = tmp_path / "d.json", tmp_path / "s.json"
    ser.write_json(str(d), ser.decomposition_to_dict(cyc["d"]))
    ser.write_json(str(s), ser.hom_to_dict(cyc["f"]))
    code, _, err = _run(["pushforward", "--decomp", str(d), "--sub", str(s), "--lasso", "rgrph:deloop",
                         "--method", "span"], capsys)
    assert code == 3 and "strong" in err


def test_misalignment_exit_5(tmp_path, p3_files, capsys):
    other = fx.full_two()
    from lassokit.cset import subinstance
    _, inc = subinstance(other, {"V": [0], "E": [0]})
    s = tmp_path / "s.json"
    ser.write_json(str(s), ser.hom_to_dict(inc))
    code, _, _ = _run(["pushforward", "--decomp", p3_files["decomp"], "--sub", str(s), "--lasso", "cc"], capsys)
    assert code == 5


def test_pullback_path_pullback(tmp_path, capsys):
    f1 = fx.path_pullback()
    d, h = tmp_path / "d.json", tmp_path / "f.json"
    ser.write_json(str(d), ser.decomposition_to_dict(f1["d"]))
    ser.write_json(str(h), ser.hom_to_dict(f1["f"]))
    code, out, _ = _run(["pullback", "--decomp", str(d), "--hom", str(h)], capsys)
    bags = [set(b["V"]) for b in json.loads(out)["bags_in_domain"]]
    assert code == 0 and bags == f1["expected_bags"]


def test_colimit_subcommand(p3_files, capsys):
    code, out, _ = _run(["colimit", "--decomp", p3_files["decomp"]], capsys)
    assert code == 0 and json.loads(out)["colimit"]["carriers"] == {"V": 3, "E": 2}


def test_check_cc_passes(tmp_path, capsys):
    report = tmp_path / "r.json"
    code, _, _ = _run(["check", "--lasso", "cc", "--strong", "--report", str(report)], capsys)
    doc = json.loads(report.read_text())
    assert code == 0 and doc["passed"] and doc["axioms"]["bounds"] == {"V": 2, "E": 3}


def test_check_smoothing_fails_with_witness(capsys):
    code, out, err = _run(["check", "--lasso", "smoothing"], capsys)
    doc = json.loads(out)
    assert code == 1
    assert doc["axioms"]["failures"]["L1"][0]["witness"]["span"]
    assert "L1" in err


def test_check_probe(capsys):
    code, out, _ = _run(["check", "--probe", "--schema", "Grph", "--max-vertices", "2", "--max-edges", "2"],
                        capsys)
    matches = sorted(s["matches"] for s in json.loads(out)["survivors"])
    assert code == 0 and matches == [["cc"], ["trivial"]]


def test_bound_exceeded_exit_6(monkeypatch, capsys):
    monkeypatch.setenv("LASSOKIT_MAX_CARRIER", "2")
    code, _, err = _run(["check", "--lasso", "cc", "--max-vertices", "3", "--max-edges", "1"], capsys)
    assert code == 6 and "ceiling" in err


def test_config_file_sets_ceiling(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"max_carrier": 1, "seed": 5}))
    code, _, _ = _run(["--config", str(cfg), "check", "--lasso", "cc"], capsys)
    assert code == 6


def test_bad_bound_flag(capsys):
    assert _run(["check", "--lasso", "cc", "--bound", "W=3"], capsys)[0] == 2


def test_explore_lassos_and_morphisms(capsys):
    code, out, _ = _run(["explore", "lassos"], capsys)
    assert code == 0 and "rgrph:gather" in json.loads(out)["lassos"]
    code, out, _ = _run(["explore", "morphisms", "--max-edges", "3"], capsys)
    table = json.loads(out)["morphisms"]
    assert code == 0 and "cc_then_deloop" in table["trivial"]


def test_explore_compose(tmp_path, p3_files, capsys):
    p3 = fx.p3_contraction()
    from lassokit.contraction import contract
    from lassokit.cset import identity
    from lassokit.lasso import lasso_cc
    c1 = contract(p3["Y"], p3["f"], lasso_cc())
    s2 = tmp_path / "s2.json"
    ser.write_json(str(s2), ser.hom_to_dict(identity(c1.result)))
    code, out, _ = _run(["explore", "compose", "--base", p3_files["base"], "--sub", p3_files["sub"],
                         "--sub2", str(s2), "--lasso", "cc"], capsys)
    assert code == 0 and json.loads(out)["found"] is True
    assert _run(["explore", "compose"], capsys)[0] == 2


def test_console_entry_point(p3_files):
    proc = subprocess.run([sys.executable, "-m", "lassokit.cli", "contract", "--base", p3_files["base"],
                           "--sub", p3_files["sub"], "--lasso", "cc"], capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["contraction"]["lasso"] == "cc"

import json

import pytest

from zerodiv.cli import BUDGET_ENV, main, parse_config


@pytest.fixture
def spec(catalog_dir):
    return lambda stem: str(catalog_dir / f"{stem}.spec")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_graph_z12_dot(capsys, spec):
    code, out, _ = run(capsys, "graph", "--spec", spec("z12"), "--relation", "assoc", "--format", "dot")
    assert code == 0
    assert out.startswith("graph G {") and out.count("[label=") == 6


def test_graph_gamma_z8(capsys, spec, tmp_path):
    path = tmp_path / "g.json"
    code, out, _ = run(capsys, "graph", "--spec", spec("z8"), "--relation", "eq",
                       "--restrict", "zero-divisors", "--strip-loops", "--output", str(path))
    assert code == 0 and json.loads(out)["vertices"] == 3
    doc = json.loads(path.read_text())
    assert [v["label"] for v in doc["vertices"]] == ["2", "4", "6"]
    assert doc["edges"] == [[0, 1], [1, 2]]


def test_graph_invalid_spec(capsys, tmp_path):
    bad = tmp_path / "bad.spec"
    bad.write_text(json.dumps({"kind": "Table", "add_table": [[0, 1], [1, 0]],
                               "mul_table": [[0, 0], [0, 0]], "zero": 0, "one_id": 1}))
    out_path = tmp_path / "out.dot"
    code, _, err = run(capsys, "graph", "--spec", str(bad), "--format", "dot", "--output", str(out_path))
    assert code == 2 and "witness" in err
    assert not out_path.exists()


def test_missing_spec_file(capsys, tmp_path):
    code, _, _ = run(capsys, "graph", "--spec", str(tmp_path / "nope.spec"))
    assert code == 2


def test_graph_non_zdr_relation_is_input_error(capsys, spec, tmp_path):
    part = tmp_path / "p.json"
    part.write_text(json.dumps([[0], [1, 2, 3]]))
    code, _, _ = run(capsys, "graph", "--spec", spec("z4"), "--relation", f"custom:{part}")
    assert code == 2


def test_check_zdrel_non_zdr_fails(capsys, spec, tmp_path):
    part = tmp_path / "p.json"
    part.write_text(json.dumps([[0], [1, 2, 3]]))
    code, out, _ = run(capsys, "check", "--property", "zdrel", "--spec", spec("z4"),
                       "--relation", f"custom:{part}")
    doc = json.loads(out)
    assert code == 1 and doc["witness"] == [2, 2, 2, 1]


def test_check_connectivity_z12(capsys, spec):
    code, out, _ = run(capsys, "check", "--property", "connectivity", "--spec", spec("z12"))
    doc = json.loads(out)
    assert code == 0 and doc["pass"] and doc["diameter"] == 3 and doc["seed"] == 0


def test_check_product_blend_units(capsys, spec):
    code, out, _ = run(capsys, "check", "--property", "product", "--spec", spec("z2"),
                       "--spec", spec("z4"), "--relation", "blend-units")
    doc = json.loads(out)
    assert code == 1 and not doc["flags"]["is_iso"]
    assert (doc["details"]["product_vertices"], doc["details"]["factor_product_vertices"]) == (7, 6)


def test_check_product_assoc(capsys, spec):
    code, _, _ = run(capsys, "check", "--property", "product", "--spec", spec("z2"), "--spec", spec("z4"))
    assert code == 0


def test_check_pir_z12(capsys, spec):
    code, out, _ = run(capsys, "check", "--property", "pir", "--spec", spec("z12"))
    assert code == 0 and sorted(json.loads(out)["staircase_indices"]) == [1, 2]


@pytest.mark.parametrize("prop", ["cla", "staircase", "lemmas", "localization", "zdrel"])
def test_check_properties_pass_on_z8(capsys, spec, prop):
    code, out, _ = run(capsys, "check", "--property", prop, "--spec", spec("z8"))
    assert code == 0 and json.loads(out)["pass"]


def test_check_staircase_fails_on_non_pir(capsys, spec):
    code, out, _ = run(capsys, "check", "--property", "staircase", "--spec", spec("f2xy_x2_xy_y2"))
    assert code == 1 and "4 looped" in json.loads(out)["failure_reason"]


def test_check_localization_subset(capsys, spec):
    code, out, _ = run(capsys, "check", "--property", "localization", "--spec", spec("z12"), "--subset", "1,4")
    assert code == 0 and json.loads(out)["details"]["localized_order"] == 3


def test_check_functorial_and_equalizer(capsys, spec):
    code, _, _ = run(capsys, "check", "--property", "functorial", "--spec", spec("z12"), "--spec", spec("z4"))
    assert code == 0
    code, out, _ = run(capsys, "check", "--property", "equalizer", "--spec", spec("z4x_2x_x2"))
    assert code == 0 and json.loads(out)["homs"] == 4


def test_hom_budget_exit_3(capsys, spec):
    code, _, err = run(capsys, "check", "--property", "equalizer", "--spec", spec("z12"),
                       "--budget", "hom_order_cap=4")
    assert code == 3 and "budget" in err


def test_iso_budget_exit_3(capsys, spec):
    code, _, _ = run(capsys, "factor", "--spec", spec("z30"), "--budget", "iso_nodes=1")
    assert code == 3


def test_budget_env(monkeypatch, capsys, spec):
    monkeypatch.setenv(BUDGET_ENV, "hom_order_cap=4,ideal_cap=99")
    cfg = parse_config(["check", "--property", "equalizer", "--spec", spec("z12")])
    assert cfg.budgets.hom_order_cap == 4 and cfg.budgets.ideal_cap == 99
    assert run(capsys, "check", "--property", "equalizer", "--spec", spec("z12"))[0] == 3
    # command line wins over the environment
    assert run(capsys, "check", "--property", "equalizer", "--spec", spec("z6"),
               "--budget", "hom_order_cap=16")[0] == 0


def test_bad_budget_is_input_error(capsys, spec):
    assert run(capsys, "factor", "--spec", spec("z6"), "--budget", "iso_nodes=0")[0] == 2
    assert run(capsys, "factor", "--spec", spec("z6"), "--budget", "colour=3")[0] == 2


@pytest.mark.parametrize("stem,orders", [("z6", [2, 3]), ("z12", [3, 4]), ("z30", [2, 3, 5])])
def test_factor(capsys, spec, stem, orders):
    code, out, _ = run(capsys, "factor", "--spec", spec(stem))
    doc = json.loads(out)
    assert code == 0 and sorted(f["order"] for f in doc["factors"]) == orders
    assert all(f["spec"]["kind"] for f in doc["factors"])


@pytest.mark.parametrize("stem", ["z8", "z27"])
def test_factor_local_exit_1(capsys, spec, stem):
    code, out, _ = run(capsys, "factor", "--spec", spec(stem))
    assert code == 1 and "no orthogonal pair (local ring)" in json.loads(out)["message"]


def test_factor_requires_assoc(capsys, spec):
    assert run(capsys, "factor", "--spec", spec("z6"), "--relation", "eq")[0] == 2


def test_output_is_deterministic(capsys, spec):
    argv = ["check", "--property", "lemmas", "--spec", spec("z12"), "--spec", spec("z6")]
    assert run(capsys, *argv) == run(capsys, *argv)


def test_timings_only_on_request(capsys, spec):
    _, out, _ = run(capsys, "check", "--property", "cla", "--spec", spec("z12"))
    assert json.loads(out)["timings"] == {}
    _, out, _ = run(capsys, "check", "--property", "cla", "--spec", spec("z12"), "--timings")
    assert "seconds" in json.loads(out)["timings"]


def test_catalog_export_roundtrip(capsys, tmp_path, catalog_dir):
    code, out, _ = run(capsys, "catalog", "--output", str(tmp_path))
    assert code == 0
    assert (tmp_path / "z12.spec").read_text() == (catalog_dir / "z12.spec").read_text()
    assert len(list(tmp_path.glob("*.spec"))) == 13

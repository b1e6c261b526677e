"""End-to-end CLI tests: output formats, exit codes, error paths."""

import json

import pytest

from subcat.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


# -- catalog ----------------------------------------------------------------------


def test_catalog_a2_table(capsys):
    code, out, _ = run(capsys, "catalog", "--builtin", "a2")
    assert code == 0
    assert "3 indecomposables" in out
    assert "0 -> A -> B -> C -> 0" in out


def test_catalog_uniserial_json(capsys):
    code, out, _ = run(capsys, "catalog", "--builtin", "uniserial:3", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert len(data["indecomposables"]) == 3
    assert data["simples"] == ["M1"]
    assert data["hom_dims"] == [[1, 1, 1], [1, 2, 2], [1, 2, 3]]


def test_catalog_bad_builtin(capsys):
    code, _, err = run(capsys, "catalog", "--builtin", "a2:oops")
    assert code == 2
    assert "error" in err


def test_catalog_missing_source(capsys):
    code, _, err = run(capsys, "catalog", "--format", "json")
    assert code == 2
    assert "exactly one" in err


# -- closure -----------------------------------------------------------------------


def test_closure_tors_b(capsys):
    code, out, _ = run(capsys, "closure", "--builtin", "a2", "--kind", "tors", "--set", "B")
    assert code == 0
    assert out.strip() == "{B, C}"


def test_closure_torf_b(capsys):
    code, out, _ = run(capsys, "closure", "--builtin", "a2", "--kind", "torf", "--set", "B")
    assert code == 0
    assert out.strip() == "{A, B}"


def test_closure_serre_empty(capsys):
    code, out, _ = run(capsys, "closure", "--builtin", "a2", "--kind", "serre", "--set", "")
    assert code == 0
    assert out.strip() == "{}"


def test_closure_explain_json(capsys):
    code, out, _ = run(
        capsys, "closure", "--builtin", "a2", "--kind", "tors", "--set", "B",
        "--format", "json", "--explain",
    )
    assert code == 0
    data = json.loads(out)
    assert data["closure"] == ["B", "C"]
    assert {c["start"][0] for c in data["certificates"]} == {"B", "C"}
    assert all(c["member"] for c in data["certificates"])


def test_closure_unknown_name(capsys):
    code, _, err = run(capsys, "closure", "--builtin", "a2", "--kind", "tors", "--set", "Z")
    assert code == 2
    assert "unknown module name" in err


# -- enumerate ----------------------------------------------------------------------


def test_enumerate_all_table(capsys):
    code, out, _ = run(capsys, "enumerate", "--builtin", "a2", "--kind", "all")
    assert code == 0
    for row in ("serre", "tors", "torf", "wide", "ice", "ike", "ie"):
        assert row in out
    counts = [line.rsplit("|", 1)[1].strip() for line in out.splitlines()[2:9]]
    assert counts == ["4", "5", "5", "5", "6", "6", "7"]


def test_enumerate_ie_dot(capsys):
    code, out, _ = run(capsys, "enumerate", "--builtin", "a2", "--kind", "ie", "--format", "dot")
    assert code == 0
    assert out.startswith("digraph hasse {")
    assert out.count("->") == 9
    assert out.count("label=") == 7


def test_enumerate_uniserial_all_rows_of_two(capsys):
    code, out, _ = run(capsys, "enumerate", "--builtin", "uniserial:4", "--kind", "all",
                       "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert all(fam["count"] == 2 for fam in data["families"].values())


def test_enumerate_all_dot_rejected(capsys):
    code, _, err = run(capsys, "enumerate", "--builtin", "a2", "--kind", "all", "--format", "dot")
    assert code == 2
    assert "single --kind" in err


def test_enumerate_out_file(tmp_path, capsys):
    target = tmp_path / "fam.json"
    code, out, _ = run(capsys, "enumerate", "--builtin", "a2", "--kind", "ie",
                       "--format", "json", "--out", str(target))
    assert code == 0
    assert out == ""
    assert json.loads(target.read_text())["count"] == 7


# -- verify --------------------------------------------------------------------------


def test_verify_a2(capsys):
    code, out, _ = run(capsys, "verify", "--builtin", "a2")
    assert code == 0
    assert "PASS a2-none-coincide" in out
    assert "RESULT: PASS" in out


def test_verify_uniserial3_json(capsys):
    code, out, _ = run(capsys, "verify", "--builtin", "uniserial:3", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["passed"] is True
    names = {c["name"] for c in data["checks"]}
    assert "local-artinian-collapse" in names


def test_verify_a3(capsys):
    code, out, _ = run(capsys, "verify", "--builtin", "a3")
    assert code == 0
    assert "PASS ie-by-intersection" in out


# -- file-based catalogs ----------------------------------------------------------------


@pytest.fixture()
def a2_files(tmp_path):
    (tmp_path / "algebra.json").write_text(json.dumps({
        "field_char": 2,
        "vertices": ["1", "2"],
        "arrows": [{"name": "a", "from": "1", "to": "2"}],
        "relations": [],
    }))
    mods = tmp_path / "mods"
    mods.mkdir()
    (mods / "A.json").write_text(json.dumps({"dims": {"2": 1}, "matrices": {}}))
    (mods / "B.json").write_text(json.dumps({"dims": {"1": 1, "2": 1}, "matrices": {"a": [[1]]}}))
    (mods / "C.json").write_text(json.dumps({"dims": {"1": 1}, "matrices": {}}))
    return tmp_path


def test_file_catalog_roundtrip(a2_files, capsys):
    code, out, _ = run(
        capsys, "enumerate",
        "--algebra", str(a2_files / "algebra.json"),
        "--modules", str(a2_files / "mods"),
        "--kind", "ie", "--format", "json",
    )
    assert code == 0
    assert json.loads(out)["count"] == 7


def test_bad_module_file(a2_files, capsys):
    (a2_files / "mods" / "D.json").write_text(json.dumps(
        {"dims": {"1": 2, "2": 1}, "matrices": {"a": [[1]]}}
    ))
    code, _, err = run(
        capsys, "catalog",
        "--algebra", str(a2_files / "algebra.json"),
        "--modules", str(a2_files / "mods"),
    )
    assert code == 2
    assert "D.json" in err


def test_modules_without_algebra(capsys):
    code, _, err = run(capsys, "catalog", "--builtin", "a2", "--modules", "/nowhere")
    assert code == 2


def test_cap_exceeded_exit_code(tmp_path, capsys):
    """A single large module trips the isomorphism-search cap during build."""
    (tmp_path / "algebra.json").write_text(json.dumps({
        "field_char": 2,
        "vertices": ["1"],
        "arrows": [{"name": "x", "from": "1", "to": "1"}],
        "relations": [[{"coeff": 1, "path": ["x"] * 5}]],
    }))
    mods = tmp_path / "mods"
    mods.mkdir()
    jordan5 = [[1 if c == r - 1 else 0 for c in range(5)] for r in range(5)]
    (mods / "M5.json").write_text(json.dumps({"dims": {"1": 5}, "matrices": {"x": jordan5}}))
    code, _, err = run(
        capsys, "catalog",
        "--algebra", str(tmp_path / "algebra.json"),
        "--modules", str(mods),
    )
    assert code == 3
    assert "cap exceeded" in err


def test_threads_env_byte_identical(monkeypatch, capsys):
    monkeypatch.delenv("SUBCAT_THREADS", raising=False)
    code, serial, _ = run(capsys, "enumerate", "--builtin", "a2", "--kind", "all",
                          "--format", "json")
    assert code == 0
    monkeypatch.setenv("SUBCAT_THREADS", "4")
    code, threaded, _ = run(capsys, "enumerate", "--builtin", "a2", "--kind", "all",
                            "--format", "json")
    assert code == 0
    assert serial == threaded

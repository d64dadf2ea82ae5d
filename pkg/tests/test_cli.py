import json
import re
from pathlib import Path

import pytest

from gpdcov.cli import main

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv)
    return code, json.loads(out) if out else None


def test_check_cover_identity(capsys):
    code, doc = run_json(capsys, "check-cover", FIXTURES / "id_c4.json")
    assert code == 0
    assert doc == {"covering": True, "fold": 1}


def test_check_cover_negative_names_object(capsys):
    code, doc = run_json(capsys, "check-cover",
                         FIXTURES / "collapse_i2.json")
    assert code == 1
    assert doc["covering"] is False
    assert doc["object"] == "x"
    assert doc["star_sizes"] == [2, 1]


def test_input_error_exit_code(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code = main(["validate", str(bad)])
    assert code == 2
    missing = tmp_path / "missing.json"
    assert main(["validate", str(missing)]) == 2


def test_validate_and_star(capsys):
    code, doc = run_json(capsys, "validate", FIXTURES / "s3.json")
    assert code == 0 and doc["valid"] is True
    code, doc = run_json(capsys, "star", FIXTURES / "i2.json",
                         "--object", "y")
    assert code == 0
    assert doc == {"object": "y", "arrows": ["id_y", "f"]}


def test_vertex_group_and_components(capsys):
    code, doc = run_json(capsys, "vertex-group", FIXTURES / "c4.json")
    assert code == 0 and doc["elements"] == ["0", "1", "2", "3"]
    code, doc = run_json(capsys, "components", FIXTURES / "i2.json")
    assert doc == {"components": [["x", "y"]]}


def test_build_universal_pipeline(capsys, tmp_path):
    out = tmp_path / "cov.json"
    code, _ = run(capsys, "build-cover", FIXTURES / "c4.json",
                  "--subgroup", "2", "--out", out)
    assert code == 0
    code, doc = run_json(capsys, "check-cover", out)
    assert code == 0 and doc == {"covering": True, "fold": 2}
    code, doc = run_json(capsys, "fold", out)
    assert doc == {"fold": 2}
    code, doc = run_json(capsys, "regular", out)
    assert code == 0 and doc == {"regular": True}
    code, doc = run_json(capsys, "monodromy", out)
    assert doc["transitive"] is True
    assert doc["stabilizers"]["[0]"] == ["0", "2"]

    uni = tmp_path / "univ.json"
    assert run(capsys, "universal", FIXTURES / "s3.json",
               "--out", uni)[0] == 0
    code, doc = run_json(capsys, "cov-group", uni)
    assert doc["order"] == 6


def test_not_regular_negative(capsys, tmp_path):
    out = tmp_path / "flip.json"
    assert run(capsys, "build-cover", FIXTURES / "s3.json",
               "--subgroup", "(12)", "--out", out)[0] == 0
    code, doc = run_json(capsys, "regular", out)
    assert code == 1 and doc == {"regular": False}


def test_equiv_command(capsys, tmp_path):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    run(capsys, "build-cover", FIXTURES / "c4.json", "--subgroup", "2",
        "--out", a)
    run(capsys, "universal", FIXTURES / "c4.json", "--out", b)
    code, doc = run_json(capsys, "equiv", a, a, "--fixed-base")
    assert code == 0 and doc["equivalent"] is True
    code, doc = run_json(capsys, "equiv", a, b, "--fixed-base")
    assert code == 1 and doc == {"equivalent": False}


def test_lattice_json_and_dot(capsys):
    code, doc = run_json(capsys, "lattice", FIXTURES / "s3.json")
    assert code == 0
    assert len(doc["nodes"]) == 6
    assert sorted(n["fold"] for n in doc["nodes"]) == [1, 2, 3, 3, 3, 6]
    assert sum(1 for n in doc["nodes"] if not n["regular"]) == 3

    code, text = run(capsys, "lattice", FIXTURES / "s3.json", "--dot")
    assert code == 0
    assert text.startswith("digraph lattice {")
    assert text.count("{") == text.count("}") == 1
    assert len(re.findall(r"n\d+ \[label=", text)) == 6
    assert len(re.findall(r"n\d+ -> n\d+;", text)) == 8
    assert 'label="fold=6, regular=+"' in text
    assert 'label="fold=3, regular=-"' in text
    assert "rankdir=BT" in text
    # top of the diagram is the identity covering: the fold-1 node is
    # never the source of an edge
    top = next(i for i, n in enumerate(json.loads(
        run(capsys, "lattice", FIXTURES / "s3.json")[1])["nodes"])
        if n["fold"] == 1)
    assert not re.search(rf"n{top} -> ", text)


def test_byte_determinism(capsys):
    _, first = run(capsys, "lattice", FIXTURES / "s3.json")
    _, second = run(capsys, "lattice", FIXTURES / "s3.json")
    assert first == second
    _, d1 = run(capsys, "universal", FIXTURES / "c4.json")
    _, d2 = run(capsys, "universal", FIXTURES / "c4.json")
    assert d1 == d2
    assert d1.endswith("\n") and "\r" not in d1


def test_emitted_groupoids_reparse(capsys, tmp_path):
    out = tmp_path / "univ.json"
    run(capsys, "universal", FIXTURES / "c4.json", "--out", out)
    doc = json.loads(out.read_text())
    inner = tmp_path / "total.json"
    inner.write_text(json.dumps(doc["source"]))
    code, parsed = run_json(capsys, "validate", inner)
    assert code == 0 and parsed["valid"] is True
    code, comp = run_json(capsys, "components", inner)
    assert len(comp["components"]) == 1


def test_omega_char_subobjects_pipeline(capsys, tmp_path):
    om = tmp_path / "omega.json"
    assert run(capsys, "omega", FIXTURES / "c4.json", "--out", om)[0] == 0
    code, doc = run_json(capsys, "subobjects", om)
    assert code == 0 and doc["count"] == 4

    omega_doc = json.loads(om.read_text())
    sub = {
        "source": FIXTURES_C4_DOC(),
        "target": omega_doc["source"],
        "objects": {"*": "*:t"},
        "arrows": {str(k): f"{k}:t" for k in range(4)},
    }
    sub_file = tmp_path / "sub.json"
    sub_file.write_text(json.dumps(sub))
    code, doc = run_json(capsys, "char", om, "--sub", sub_file)
    assert code == 0
    assert doc["phi"]["objects"] == {"*:t": "*:t", "*:f": "*:f"}


def FIXTURES_C4_DOC():
    return json.loads((FIXTURES / "c4.json").read_text())


def test_expo_and_adjunction(capsys, tmp_path):
    cov = tmp_path / "cov.json"
    run(capsys, "build-cover", FIXTURES / "c4.json", "--subgroup", "2",
        "--out", cov)
    ex = tmp_path / "expo.json"
    assert run(capsys, "expo", cov, cov, "--out", ex)[0] == 0
    code, doc = run_json(capsys, "check-cover", ex)
    assert code == 0 and doc["fold"] == 4
    code, doc = run_json(capsys, "adjunction", cov, cov, cov)
    assert code == 0 and doc["bijection"] is True
    assert doc["product_hom_count"] == doc["exponential_hom_count"] == 4


def test_presheaf_pipeline(capsys, tmp_path):
    cov = tmp_path / "cov.json"
    run(capsys, "build-cover", FIXTURES / "c4.json", "--subgroup", "2",
        "--out", cov)
    ps = tmp_path / "ps.json"
    assert run(capsys, "to-presheaf", cov, "--out", ps)[0] == 0
    back = tmp_path / "back.json"
    assert run(capsys, "from-presheaf", ps, "--out", back)[0] == 0
    code, doc = run_json(capsys, "equiv", cov, back, "--fixed-base")
    assert code == 0 and doc["equivalent"] is True


def test_lift_commands(capsys, tmp_path):
    uni = tmp_path / "univ.json"
    run(capsys, "universal", FIXTURES / "c4.json", "--out", uni)
    code, doc = run_json(capsys, "lift-arrow", uni, "--arrow", "1",
                         "--at", "[0]")
    assert code == 0 and doc["lift"].endswith("1")
    code, doc = run_json(
        capsys, "lift-morphism", uni,
        "--morphism", FIXTURES / "id_c4.json",
        "--source-object", "*", "--target-object", "[0]")
    assert code == 1 and doc["lift"] is None


def test_pullback_and_pushout_commands(capsys, tmp_path):
    uni = tmp_path / "univ.json"
    run(capsys, "universal", FIXTURES / "c4.json", "--out", uni)
    code, doc = run_json(capsys, "pullback", uni, "--along",
                         FIXTURES / "id_c4.json")
    assert code == 0
    assert len(doc["covering"]["source"]["objects"]) == 4
    # pulling back along the projection itself gives the square
    code, doc = run_json(capsys, "pullback", uni, "--along", uni)
    assert code == 0
    assert len(doc["covering"]["source"]["objects"]) == 16
    code, doc = run_json(capsys, "pushout", uni, uni)
    assert code == 0
    assert len(doc["orbit_morphism"]["target"]["objects"]) == 1

"""Command-line surface: exit codes, JSON reports, file round trips."""

import json

import pytest

from dimerdual.cli import main
from dimerdual.dimerfile import parse, serialize
from dimerdual.core import validate


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    return code, json.loads(out), err


# --- validate ------------------------------------------------------------------


def test_validate_catalog_ok(capsys):
    code, doc, _ = run_json(capsys, "validate", "catalog:p2")
    assert code == 0
    assert doc["valid"] is True
    assert doc["violations"] == []


def test_validate_bad_face_exits_2(tmp_path, capsys):
    bad = tmp_path / "bad.dimer"
    bad.write_text(
        "dimer broken\n"
        "arrow a u v\n"
        "arrow b v u\n"
        "face + a b\n"
        "face - a\n"  # face misses arrow b
    )
    code, doc, _ = run_json(capsys, "validate", str(bad))
    assert code == 2
    assert doc["valid"] is False
    assert any("b" in v for v in doc["violations"])


def test_validate_parse_error_exits_2(tmp_path, capsys):
    bad = tmp_path / "bad.dimer"
    bad.write_text("dimer x\nfrobnicate y\n")
    code, out, err = run(capsys, "validate", str(bad))
    assert code == 2
    assert "frobnicate" in err


def test_unknown_catalog_name_exits_2(capsys):
    code, _, err = run(capsys, "info", "catalog:nonesuch")
    assert code == 2
    assert "nonesuch" in err


# --- info / consistent ----------------------------------------------------------


def test_info_p2(capsys):
    code, doc, _ = run_json(capsys, "info", "catalog:p2")
    assert code == 0
    assert doc == {
        "name": "p2",
        "vertices": 3,
        "arrows": 9,
        "faces": 6,
        "genus": 1,
        "zigzag_cycles": 3,
    }


def test_consistent_p2(capsys):
    code, doc, _ = run_json(capsys, "consistent", "catalog:p2")
    assert code == 0
    assert doc["status"] == "consistent"
    assert doc["r_charge"] is not None
    assert doc["probe_violations"] == []


def test_consistent_inconsistent_exits_1(capsys):
    code, doc, _ = run_json(capsys, "consistent", "catalog:inconsistent")
    assert code == 1
    assert doc["status"] == "inconsistent"
    assert doc["certificate"] is not None
    assert doc["probe_violations"]


# --- matchings / polygon --------------------------------------------------------


def test_matchings_stable_filter(capsys):
    code, doc, _ = run_json(capsys, "matchings", "catalog:p2", "--stable")
    assert code == 0
    assert doc["count"] == 6  # all matchings counted even when filtered
    shown = doc["matchings"]
    assert all(m["stable"] for m in shown)
    # one stable matching per lattice point of the reflexive triangle
    assert len(shown) == len(doc["boundary_points"]) + 1


def test_matchings_root_by_name(capsys):
    code, doc, _ = run_json(capsys, "matchings", "catalog:p2", "--root", "2")
    assert code == 0
    assert doc["root"] == "2"


def test_matchings_unknown_root(capsys):
    code, _, err = run(capsys, "matchings", "catalog:p2", "--root", "zz")
    assert code == 2
    assert "zz" in err


def test_polygon_p1xp1_type(capsys):
    code, doc, _ = run_json(capsys, "polygon", "catalog:p1xp1")
    assert code == 0
    assert doc["reflexive"] is True
    assert doc["type"] == "4a"


def test_polygon_c3_not_reflexive(capsys):
    code, doc, _ = run_json(capsys, "polygon", "catalog:c3")
    assert code == 0
    assert doc["reflexive"] is False
    assert doc["type"] is None


# --- dual -----------------------------------------------------------------------


def test_dual_roundtrip_file(tmp_path, capsys):
    out = tmp_path / "dual.dimer"
    code, _, _ = run(capsys, "dual", "catalog:p2", "-o", str(out))
    assert code == 0
    M = validate(parse(out.read_text()))
    assert M.name == "p2-dual"
    assert M.num_arrows == 9


def test_dual_stdout(capsys):
    code, out, _ = run(capsys, "dual", "catalog:p2", "-o", "-")
    assert code == 0
    assert out.startswith("dimer p2-dual\n")


# --- sequences / verify-duality -------------------------------------------------


def test_sequences_p2(capsys):
    code, doc, _ = run_json(capsys, "sequences", "catalog:p2")
    assert code == 0
    assert doc["a"] == [1, 1, 1]
    assert doc["b"] == [1, 1, 1]
    assert doc["classes"][0] == [0, 0, 0]
    assert len(doc["lambda"]["values"]) == 3
    assert doc["vertex_order"]["values"][0] == "0"


def test_sequences_byte_stable(capsys):
    _, first, _ = run(capsys, "sequences", "catalog:p1xp1")
    _, second, _ = run(capsys, "sequences", "catalog:p1xp1")
    assert first == second


def test_verify_duality_p2(capsys):
    code, doc, _ = run_json(capsys, "verify-duality", "catalog:p2")
    assert code == 0
    assert doc["ok"] is True
    assert doc["failures"] == []
    assert doc["mirror_a"] is not None


def test_verify_duality_non_fano_exits_1(capsys):
    code, _, err = run(capsys, "verify-duality", "catalog:c3")
    assert code == 1


def test_no_ansi_codes_when_no_color(capsys, monkeypatch):
    monkeypatch.setenv("NO_COLOR", "1")
    _, _, err = run(capsys, "verify-duality", "catalog:p2")
    assert "\x1b[" not in err


# --- synth / census -------------------------------------------------------------


def test_synth_p2_sequence(tmp_path, capsys):
    seq = tmp_path / "seq.txt"
    seq.write_text("# classes on the 3a triangle\n0 0 0\n0 0 1\n0 0 2\n")
    out = tmp_path / "out.dimer"
    code, _, _ = run(
        capsys, "synth", "--polygon", "3a", "--sequence", str(seq),
        "-o", str(out), "--name", "tri",
    )
    assert code == 0
    D = validate(parse(out.read_text()))
    assert (D.num_vertices, D.num_arrows) == (3, 9)
    code, doc, _ = run_json(capsys, "polygon", str(out))
    assert doc["type"] == "3a"


def test_synth_invalid_sequence_exits_1(tmp_path, capsys):
    seq = tmp_path / "seq.txt"
    seq.write_text("0 0 0\n0 0 1\n0 0 3\n")
    code, _, err = run(
        capsys, "synth", "--polygon", "3a", "--sequence", str(seq),
        "-o", "-",
    )
    assert code == 1
    assert "exceptional" in err


def test_synth_malformed_sequence_exits_2(tmp_path, capsys):
    seq = tmp_path / "seq.txt"
    seq.write_text("0 0\n")
    code, _, err = run(
        capsys, "synth", "--polygon", "3a", "--sequence", str(seq),
        "-o", "-",
    )
    assert code == 2
    assert "expected 3 integers" in err


def test_census_triangle(tmp_path, capsys):
    code, doc, _ = run_json(
        capsys, "census", "--polygon", "3a", "--out-dir", str(tmp_path)
    )
    assert code == 0
    assert doc["dimer_count"] == 1
    assert doc["bound_touched"] is False
    assert doc["dimers"][0]["sequence"] == [[0, 0, 0], [0, 0, 1], [0, 0, 2]]
    written = tmp_path / f"{doc['dimers'][0]['name']}.dimer"
    D = validate(parse(written.read_text()))
    assert D.num_vertices == 3


def test_census_unknown_polygon_exits_2(capsys):
    code, _, err = run(capsys, "census", "--polygon", "17z")
    assert code == 2
    assert "17z" in err


# --- render ---------------------------------------------------------------------


def test_render_svg(tmp_path, capsys):
    out = tmp_path / "pic.svg"
    code, _, _ = run(capsys, "render", "catalog:p2", "--svg", str(out))
    assert code == 0
    text = out.read_text()
    assert text.startswith("<svg")
    assert "<line" in text and "<polygon" in text


def test_render_with_matching(tmp_path, capsys):
    out = tmp_path / "pic.svg"
    code, _, _ = run(
        capsys, "render", "catalog:p2", "--svg", str(out), "--matching", "0"
    )
    assert code == 0
    assert "#0a7a2f" in out.read_text()


def test_render_positions_used(tmp_path, capsys):
    # declared vertex positions survive into the layout; genus-2 input works
    out = tmp_path / "pic.svg"
    code, _, _ = run(capsys, "render", "catalog:genus2", "--svg", str(out))
    assert code == 0
    assert out.read_text().startswith("<svg")


def test_render_matching_out_of_range(tmp_path, capsys):
    out = tmp_path / "pic.svg"
    code, _, err = run(
        capsys, "render", "catalog:p2", "--svg", str(out), "--matching", "99"
    )
    assert code == 2
    assert "out of range" in err


# --- catalog / lemmas -----------------------------------------------------------


def test_catalog_list(capsys):
    code, out, _ = run(capsys, "catalog", "list")
    assert code == 0
    assert "p2" in out
    assert "available" in out


def test_catalog_get(capsys):
    code, out, _ = run(capsys, "catalog", "get", "p2")
    assert code == 0
    assert "dimer p2" in out  # raw file text, comments included


def test_catalog_list_includes_polygons(capsys):
    code, out, _ = run(capsys, "catalog", "list")
    assert code == 0
    assert "9a" in out and "polygon" in out


def test_catalog_get_polygon(capsys):
    code, out, _ = run_json(capsys, "catalog", "get", "4a")
    assert code == 0
    assert out["polygon"] == "4a"
    assert len(out["points"]) == 4
    assert sum(out["a_sequence"]) == 0


def test_catalog_get_missing_name(capsys):
    code, _, err = run(capsys, "catalog", "get")
    assert code == 2


def test_catalog_get_unknown(capsys):
    code, _, err = run(capsys, "catalog", "get", "zzz")
    assert code == 2
    assert "zzz" in err


def test_lemmas_p2(capsys):
    code, doc, _ = run_json(
        capsys, "lemmas", "catalog:p2", "--walks", "25", "--seed", "3"
    )
    assert code == 0
    assert doc["ok"] is True
    assert doc["arc_failures"] == []
    assert doc["grade_sums_ok"] is True


def test_lemmas_seed_changes_sampling(capsys):
    _, a, _ = run(capsys, "lemmas", "catalog:conifold", "--walks", "5", "--seed", "1")
    _, b, _ = run(capsys, "lemmas", "catalog:conifold", "--walks", "5", "--seed", "1")
    assert a == b  # same seed: byte-identical report

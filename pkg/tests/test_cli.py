import io
import json
import subprocess
import sys
from fractions import Fraction

import pytest

from conftest import DATA
from plumbd.cli import ParseError, RunConfig, load_graph, main, run
from plumbd.plumbing import GraphValidationError, graph_to_dict
from plumbd.report import UnsupportedFormat, format_rational, write_report


def run_capture(*args, **kwargs):
    out = io.StringIO()
    code = run(RunConfig(*args, **kwargs), out)
    return code, out.getvalue()


class TestLoadGraph:
    def test_single_vertex(self, tmp_path):
        path = tmp_path / "g.json"
        path.write_text('{"vertices":[{"id":1,"weight":-1}],"edges":[]}')
        g = load_graph(str(path))
        assert g.vertices == ((1, -1),) and g.edges == ()

    def test_self_loop(self):
        with pytest.raises(GraphValidationError) as info:
            load_graph(str(DATA / "self_loop.json"))
        assert info.value.report.kinds() == ["SelfLoop"]

    def test_malformed(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        with pytest.raises(ParseError):
            load_graph(str(path))
        with pytest.raises(ParseError):
            load_graph(str(tmp_path / "missing.json"))

    def test_e8_validate_reports_det(self):
        code, text = run_capture("validate", str(DATA / "e8.json"))
        doc = json.loads(text)
        assert code == 0
        assert doc["det"] == 1 and doc["negative_definite"] and doc["manifold"]["s"] == 8
        assert len(doc["ldl_pivots"]) == 8

    def test_round_trip(self, tmp_path):
        g = load_graph(str(DATA / "brieskorn_2_3_7.json"))
        path = tmp_path / "copy.json"
        path.write_text(json.dumps(graph_to_dict(g)))
        assert load_graph(str(path)) == g


class TestRun:
    def test_dinv_lens2(self):
        code, text = run_capture("dinv", str(DATA / "lens_m2.json"))
        doc = json.loads(text)
        assert code == 0
        assert sorted(c["d"] for c in doc["classes"]) == ["-1/4", "1/4"]
        assert set(doc["classes"][0]) == {"index", "rep", "maximizer", "max_square", "d"}

    def test_dinv_e8(self):
        _, text = run_capture("dinv", str(DATA / "e8.json"))
        (row,) = json.loads(text)["classes"]
        assert row["d"] == "2"

    def test_dinv_csv(self):
        _, text = run_capture("dinv", str(DATA / "chain_m2_m3.json"), "csv")
        lines = text.splitlines()
        assert lines[0] == "index,rep,maximizer,max_square,d"
        assert len(lines) == 6
        assert lines[1] == "0,-2;-3,0;1,-2/5,2/5"

    def test_parallel_output_identical(self):
        serial = run_capture("dinv", str(DATA / "chain_m2_m3.json"))
        parallel = run_capture("dinv", str(DATA / "chain_m2_m3.json"), parallel=True)
        assert serial == parallel

    def test_spinc(self):
        code, text = run_capture("spinc", str(DATA / "chain_m2_m3.json"))
        assert code == 0
        assert [c["index"] for c in json.loads(text)["classes"]] == list(range(5))

    def test_root_dot(self):
        code, text = run_capture("root", str(DATA / "lens_m2.json"), "dot", t_max=2)
        assert code == 0
        assert text.count("digraph") == 2
        assert 'label="t=0 λ=1/4"' in text and 'label="t=0 λ=-1/4"' in text

    def test_root_json(self):
        _, text = run_capture("root", str(DATA / "unknot_m1.json"), "json", t_max=1)
        (root,) = json.loads(text)["roots"]
        assert [n["grading"] for n in root["nodes"]] == ["0", "-2"]

    def test_dot_only_for_root(self):
        with pytest.raises(UnsupportedFormat):
            RunConfig("dinv", str(DATA / "e8.json"), "dot")

    def test_verify_single_input(self):
        code, text = run_capture("verify", str(DATA / "chain_m2_m3.json"))
        assert code == 0 and text.endswith("1/1 manifolds passed\n")

    def test_verify_random_trees(self):
        code, text = run_capture("verify", None, count=10, seed=0)
        assert code == 0, text
        assert text.endswith("10/10 manifolds passed\n")


class TestExitCodes:
    def test_input_errors(self, capsys):
        assert main(["dinv", str(DATA / "self_loop.json")]) == 2
        assert "SelfLoop" in capsys.readouterr().err
        assert main(["dinv", str(DATA / "indefinite.json")]) == 2
        assert main(["validate", str(DATA / "indefinite.json")]) == 2
        assert main(["dinv", str(DATA / "e8.json"), "--format", "dot"]) == 2

    def test_singular_validate(self, tmp_path, capsys):
        path = tmp_path / "sing.json"
        path.write_text('{"vertices":[{"id":1,"weight":-1},{"id":2,"weight":-1}],"edges":[[1,2]]}')
        assert main(["validate", str(path)]) == 2
        assert json.loads(capsys.readouterr().out)["det"] == 0

    def test_seed_env(self, monkeypatch, capsys):
        monkeypatch.setenv("PLUMBD_SEED", "7")
        assert main(["verify", "--count", "2"]) == 0
        first = capsys.readouterr().out
        assert main(["verify", "--count", "2", "--seed", "7"]) == 0
        assert capsys.readouterr().out == first

    def test_module_entry_point(self):
        proc = subprocess.run([sys.executable, "-m", "plumbd", "dinv", str(DATA / "unknot_m1.json"),
                               "--format", "csv"], capture_output=True, text=True)
        assert proc.returncode == 0
        assert proc.stdout.splitlines()[1] == "0,-1,-1,-1,0"


class TestWriteReport:
    def test_rationals(self):
        assert format_rational(Fraction(1, 4)) == "1/4"
        assert format_rational(Fraction(2)) == "2"
        assert format_rational(Fraction(-6, 8)) == "-3/4"

    def test_vectors(self):
        doc = {"manifold": {}, "classes": [{"index": 0, "rep": [0, 1], "maximizer": [0, 1],
                                            "max_square": Fraction(-2, 5), "d": Fraction(2, 5)}]}
        as_json = json.loads(write_report(doc, "json"))
        assert as_json["classes"][0]["rep"] == [0, 1]
        assert as_json["classes"][0]["d"] == "2/5"
        assert write_report(doc, "csv").decode().splitlines()[1] == "0,0;1,0;1,-2/5,2/5"

    def test_unsupported(self):
        with pytest.raises(UnsupportedFormat):
            write_report({"classes": []}, "xml")
        with pytest.raises(UnsupportedFormat):
            write_report({"classes": []}, "dot")

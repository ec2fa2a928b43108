import json
import math

import pytest

from mstratio.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


class TestRatio:
    def test_fig8(self, capsys):
        code, out = run(capsys, "ratio", "--construction", "fig8")
        assert code == 0
        doc = json.loads(out)
        assert doc["ratio"] == pytest.approx(122 / 99, abs=1e-9)
        assert doc["class_lengths"] == [48.0, 74.0]
        assert doc["len_total"] == 99.0

    def test_packing_with_torus_flag(self, capsys):
        code, out = run(capsys, "ratio", "--construction", "packing:quarter",
                        "--torus", "40")
        assert code == 0
        doc = json.loads(out)
        assert doc["ratio"] == pytest.approx(1997 / 1599, abs=1e-9)

    def test_input_file_whole_set_blue(self, capsys, tmp_path):
        doc = {
            "basis": {"u": [1.0, 0.0], "v": [0.0, 1.0]},
            "topology": {"type": "plane"},
            "coords": [[0, 0], [1, 0], [0, 1], [1, 1]],
            "colors": [0, 0, 0, 0],
        }
        path = tmp_path / "points.json"
        path.write_text(json.dumps(doc))
        code, out = run(capsys, "ratio", "--in", str(path))
        assert code == 0
        assert json.loads(out)["ratio"] == 1.0

    def test_unknown_construction_exits_three(self, capsys):
        code, _ = run(capsys, "ratio", "--construction", "nonesuch")
        assert code == 3


class TestSweep:
    def test_quarter_closed_form(self, capsys):
        code, out = run(capsys, "sweep", "--family", "quarter", "--values", "4:12:2")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "param,ratio,closed_form,abs_diff"
        assert len(lines) == 6
        for line in lines[1:]:
            _, ratio, closed, diff = line.split(",")
            assert abs(float(ratio) - float(closed)) < 1e-9
            assert float(diff) < 1e-9

    def test_value_list(self, capsys):
        code, out = run(capsys, "sweep", "--family", "checkerboard",
                        "--values", "4,6")
        assert code == 0
        assert len(out.strip().splitlines()) == 3

    def test_stretched_family_matches_closed_form(self, capsys):
        code, out = run(capsys, "sweep", "--family", "stretched",
                        "--values", "9,15,30")
        assert code == 0
        for line in out.strip().splitlines()[1:]:
            assert float(line.split(",")[3]) < 1e-9

    def test_parallel_matches_sequential(self, capsys, monkeypatch):
        _, seq = run(capsys, "sweep", "--family", "quarter", "--values", "4:10:2")
        monkeypatch.setenv("MSTRATIO_THREADS", "2")
        _, par = run(capsys, "sweep", "--family", "quarter", "--values", "4:10:2")
        assert seq == par


class TestGen:
    def test_reproducible_bytes(self, capsys):
        _, out1 = run(capsys, "gen", "--construction", "collapse:n=5,eps=0.001")
        _, out2 = run(capsys, "gen", "--construction", "collapse:n=5,eps=0.001")
        assert out1 == out2
        doc = json.loads(out1)
        assert doc["coords"] is None
        assert len(doc["cartesian"]) == 5
        assert doc["colors"].count(0) == 2

    def test_lattice_doc(self, capsys):
        _, out = run(capsys, "gen", "--construction", "packing:third", "--torus", "6")
        doc = json.loads(out)
        assert doc["topology"] == {"type": "torus", "n": 6}
        assert len(doc["coords"]) == 36
        assert doc["colors"].count(0) == 12


class TestBrute:
    def test_checkerboard_two(self, capsys):
        code, out = run(capsys, "brute", "--construction", "checkerboard:n=2")
        assert code == 0
        doc = json.loads(out)
        assert doc["ratio"] == pytest.approx(2 * math.sqrt(2) / 3, abs=1e-9)


class TestAnneal:
    def test_seeded_run_reproducible(self, capsys, tmp_path):
        trace1 = tmp_path / "a.csv"
        trace2 = tmp_path / "b.csv"
        best = tmp_path / "best.json"
        args = ["anneal", "--construction", "packing:quarter", "--torus", "4",
                "--seed", "7", "--budget", "1000"]
        code, out1 = run(capsys, *args, "--trace", str(trace1), "--best-out", str(best))
        assert code == 0
        _, out2 = run(capsys, *args, "--trace", str(trace2))
        assert out1 == out2
        assert trace1.read_text() == trace2.read_text()
        doc = json.loads(out1)
        assert doc["best_ratio"] >= 17 / 15 - 1e-9
        # the best coloring round-trips through the canonical document
        best_doc = json.loads(best.read_text())
        assert best_doc["colors"] == doc["best_labels"]
        code, out3 = run(capsys, "ratio", "--in", str(best))
        assert code == 0
        assert json.loads(out3)["ratio"] == pytest.approx(doc["best_ratio"], abs=1e-9)


class TestHabitat:
    def test_quarter_summary(self, capsys):
        code, out = run(capsys, "habitat", "--construction", "packing:quarter",
                        "--torus", "8")
        assert code == 0
        doc = json.loads(out)
        lv = doc["levels"]["1"]
        assert [lv["rooms"], lv["houses"], lv["blocks"], lv["compounds"]] == [16, 16, 1, 1]
        assert lv["beta"] == 32


class TestPersist:
    def test_fig8_norms(self, capsys, tmp_path):
        diagram = tmp_path / "dgm.csv"
        code, out = run(capsys, "persist", "--construction", "fig8",
                        "--policy", "exclude", "--diagram-out", str(diagram))
        assert code == 0
        doc = json.loads(out)
        assert doc["domain_norm"] == 61.0
        assert doc["image_norm"] == 49.5
        assert doc["ratio_from_norms"] == pytest.approx(122 / 99, abs=1e-9)
        body = diagram.read_text().strip().splitlines()
        assert body[0] == "birth,death"
        assert sum(1 for line in body if line.endswith(",inf")) == 2


class TestRender:
    def test_deterministic_svg(self, capsys, tmp_path):
        p1 = tmp_path / "a.svg"
        p2 = tmp_path / "b.svg"
        assert main(["render", "--construction", "fig8", "--out", str(p1)]) == 0
        assert main(["render", "--construction", "fig8", "--out", str(p2)]) == 0
        capsys.readouterr()
        assert p1.read_bytes() == p2.read_bytes()
        text = p1.read_text()
        assert text.count("<circle") == 100
        assert text.count("<line") == 24 + 74

    def test_thickening_fills(self, capsys, tmp_path):
        p = tmp_path / "t.svg"
        code = main(["render", "--construction", "packing:quarter", "--torus", "8",
                     "--thicken", "1", "--out", str(p)])
        capsys.readouterr()
        assert code == 0
        assert p.read_text().count("<polygon") == 16

    def test_singleton_renders_one_dot_no_edges(self, capsys, tmp_path):
        doc = {
            "basis": {"u": [1.0, 0.0], "v": [0.0, 1.0]},
            "topology": {"type": "plane"},
            "coords": [[0, 0]],
            "colors": [0],
        }
        src = tmp_path / "one.json"
        src.write_text(json.dumps(doc))
        out = tmp_path / "one.svg"
        code = main(["render", "--in", str(src), "--out", str(out)])
        capsys.readouterr()
        assert code == 0
        text = out.read_text()
        assert text.count("<circle") == 1
        assert text.count("<line") == 0


class TestAudit:
    def test_small_run_passes(self, capsys):
        code, out = run(capsys, "audit", "--samples", "25", "--k-max", "50")
        assert code == 0
        assert "FAIL" not in out
        assert "k=1 anomaly" in out

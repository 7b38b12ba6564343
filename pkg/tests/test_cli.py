"""
Tests for the ctxlab command line
"""
import json
from pathlib import Path
from unittest.mock import patch

import pytest

from ctxlab.cli import _batch_worker, main
from ctxlab.io import distribution_to_dict, scenario_to_dict, validate_document, write_json
from ctxlab.schema_registry import REPORT
from ctxlab.scenario import cycle_scenario


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, json.loads(out.out), out.err


@pytest.fixture
def chsh_file(tmp_path, chsh):
    path = tmp_path / "chsh.json"
    write_json(path, distribution_to_dict(chsh))
    return path


class TestAnalyze:
    """Test the analyze command"""

    def test_chsh_report(self, capsys, chsh_file):
        """Test the CHSH box is SC, contextual and a vertex"""
        code, report, _ = run(capsys, "analyze", str(chsh_file))
        assert code == 0
        validate_document(report, REPORT)
        assert report["classification"]["strongly_contextual"] is True
        assert report["classification"]["vertex"] is True
        assert report["config"]["cross_check"] is True

    def test_digest_stable(self, capsys, chsh_file):
        """Test the same input gives the same digest"""
        _, first, _ = run(capsys, "analyze", str(chsh_file))
        _, second, _ = run(capsys, "analyze", str(chsh_file))
        assert first["input_digest"] == second["input_digest"]

    def test_category_and_homotopy_sections(self, capsys, chsh_file):
        """Test optional report sections"""
        code, report, _ = run(capsys, "analyze", str(chsh_file), "--category", "--homotopy")
        assert code == 0
        assert report["category"]["criterion"]["strongly_contextual"] is True
        assert report["homotopy"]["pr_circle"]["minus_edges"] == ["e0"]
        assert report["homotopy"]["circle_labels"] == {"e0": 1, "e1": 0, "e2": 0, "e3": 0}
        assert report["homotopy"]["circle_invariants"] == [{"circle": ["e0", "e1", "e2", "e3"], "invariant": 1}]

    def test_budget_section(self, capsys, chsh_file):
        """Test the report carries the labeling budget usage"""
        code, report, _ = run(capsys, "analyze", str(chsh_file), "--cap", "100")
        assert code == 0
        validate_document(report, REPORT)
        assert report["budget"] == {"cap": 100, "checks": 1, "largest": 16, "refused": 0, "budget_exceeded": False}

    def test_verbose_summary(self, capsys, chsh_file):
        """Test --verbose writes the settings and a summary to stderr"""
        code, _, err = run(capsys, "analyze", str(chsh_file), "--verbose")
        assert code == 0
        assert "⚙️ CTXLAB SETTINGS" in err
        assert "✅ strongly contextual" in err

    def test_parse_error_exit_code(self, capsys, tmp_path):
        """Test malformed JSON exits with 2"""
        path = tmp_path / "bad.json"
        path.write_text('{"scenario": ', encoding="utf-8")
        code, report, _ = run(capsys, "analyze", str(path))
        assert code == 2
        assert report["error_type"] == "ParseError"

    def test_precondition_exit_code(self, capsys, tmp_path):
        """Test inconsistent input exits with 3"""
        s = {"vertices": ["a", "b"], "edges": [{"id": "e", "source": "a", "target": "b"}]}
        path = tmp_path / "bad.json"
        write_json(path, {"scenario": s, "edges": {"e": [["1/2", 0], [0, "1/4"]]}})
        code, _, _ = run(capsys, "analyze", str(path))
        assert code == 3

    def test_cap_exit_code(self, capsys, chsh_file):
        """Test exceeding the labeling cap exits with 4"""
        code, report, _ = run(capsys, "analyze", str(chsh_file), "--cap", "8")
        assert code == 4
        assert report["error_type"] == "TooLarge"

    def test_d_flag_checked(self, capsys, chsh_file):
        """Test --d must agree with the file"""
        code, _, _ = run(capsys, "analyze", str(chsh_file), "--d", "3")
        assert code == 3

    def test_batch(self, capsys, tmp_path, chsh):
        """Test batch mode reports every file and returns the worst exit code"""
        write_json(tmp_path / "a.json", distribution_to_dict(chsh))
        (tmp_path / "b.json").write_text("{", encoding="utf-8")
        code, output, _ = run(capsys, "analyze", "--batch", str(tmp_path))
        assert code == 2
        assert [r["input"].endswith(name) for r, name in zip(output["reports"], ["a.json", "b.json"])] == [True, True]
        assert output["reports"][0]["classification"]["contextual"] is True

    def test_batch_worker_keeps_unexpected_failures(self, chsh_file):
        """Test a crash in one file becomes an error entry with exit code 1"""
        options = {"cap": 64, "cross_check": True, "d": None}
        with patch("ctxlab.cli.analyze_distribution", side_effect=RuntimeError("worker crashed")):
            entry = _batch_worker((str(chsh_file), options, False, False))
        assert entry["exit_code"] == 1
        assert entry["error_type"] == "RuntimeError"
        assert entry["error"] == "worker crashed"
        assert entry["input"] == str(chsh_file)

    def test_usage_error(self, capsys):
        """Test argparse failures exit with 2"""
        assert main(["analyze", "--no-such-flag"]) == 2
        capsys.readouterr()


class TestGenerate:
    """Test the generate command"""

    def test_pr_box_document(self, capsys):
        """Test generated PR boxes have one p₋ edge by default"""
        code, doc, _ = run(capsys, "generate", "pr-box", "--cycle", "3")
        assert code == 0
        assert doc["edges"]["e0"] == [["0", "1/2"], ["1/2", "0"]]
        assert doc["edges"]["e1"] == [["1/2", "0"], ["0", "1/2"]]

    def test_even_minus_refused(self, capsys):
        """Test an even p₋ count exits with 3"""
        code, report, _ = run(capsys, "generate", "pr-box", "--cycle", "4", "--minus", "e0,e1")
        assert code == 3
        assert report["error_type"] == "EvenMinusCount"

    def test_random_is_seeded(self, capsys):
        """Test the same seed reproduces the same distribution"""
        _, first, _ = run(capsys, "generate", "random", "--cycle", "4", "--seed", "5")
        _, second, _ = run(capsys, "generate", "random", "--cycle", "4", "--seed", "5")
        assert first == second
        assert first["seed"] == 5

    def test_output_then_analyze(self, capsys, tmp_path):
        """Test writing a file and analyzing it"""
        path = tmp_path / "det.json"
        code, report, _ = run(capsys, "generate", "deterministic", "--cycle", "3", "--labels", "0,1,1", "--output", str(path))
        assert code == 0
        assert report["output"] == str(path)
        code, report, _ = run(capsys, "analyze", str(path))
        assert report["classification"]["deterministic"] is True
        assert report["classification"]["contextual"] is False

    def test_section_t(self, capsys):
        """Test T-section images from edge labels"""
        code, doc, _ = run(capsys, "generate", "section-t", "--cycle", "2", "--edge-labels", "1,0", "--d", "3")
        assert code == 0
        assert doc["d"] == 3
        assert doc["edges"]["e0"][0] == ["0", "1/3", "0"]

    def test_wrong_label_count(self, capsys):
        """Test label counts must match the scenario"""
        code, _, _ = run(capsys, "generate", "deterministic", "--cycle", "3", "--labels", "0,1")
        assert code == 3


class TestFace:
    """Test the face command"""

    def test_pr_face(self, capsys, tmp_path):
        """Test a single odd label on the square has a unique SC vertex"""
        write_json(tmp_path / "square.json", scenario_to_dict(cycle_scenario(4), 2))
        write_json(tmp_path / "labels.json", {"labels": {"e0": 1, "e1": 0, "e2": 0, "e3": 0}})
        code, report, _ = run(capsys, "face", str(tmp_path / "square.json"), str(tmp_path / "labels.json"))
        assert code == 0
        validate_document(report, REPORT)
        face = report["face"]
        assert face["dimension"] == 0
        assert face["null_homotopic"] is False
        assert face["unique_sc_vertex_classification"]["strongly_contextual"] is True

    def test_null_homotopic_face(self, capsys, tmp_path):
        """Test null-homotopic labels give a potential and no SC vertex"""
        write_json(tmp_path / "square.json", scenario_to_dict(cycle_scenario(4), 3))
        write_json(tmp_path / "labels.json", {"labels": {"e0": 1, "e1": 2, "e2": 0, "e3": 0}})
        code, report, _ = run(capsys, "face", str(tmp_path / "square.json"), str(tmp_path / "labels.json"))
        assert code == 0
        assert report["face"]["null_homotopic"] is True
        assert report["face"]["dimension"] == 2
        assert report["face"]["unique_sc_vertex"] is None

    def test_labels_must_match_edges(self, capsys, tmp_path):
        """Test labels naming unknown edges exit with 3"""
        write_json(tmp_path / "square.json", scenario_to_dict(cycle_scenario(4), 2))
        write_json(tmp_path / "labels.json", {"labels": {"e0": 1}})
        code, _, _ = run(capsys, "face", str(tmp_path / "square.json"), str(tmp_path / "labels.json"))
        assert code == 3


class TestCollapse:
    """Test the collapse command"""

    def test_all_diagonal(self, capsys, tmp_path):
        """Test collapsing every diagonal edge keeps the flags"""
        path = tmp_path / "det.json"
        run(capsys, "generate", "deterministic", "--cycle", "3", "--labels", "1,1,1", "--output", str(path))
        code, report, _ = run(capsys, "collapse", str(path), "--all-diagonal")
        assert code == 0
        assert report["collapse"]["edges"] == ["e0", "e1"]
        assert report["collapse"]["vertices"] == 1
        assert report["collapse"]["flags"]["deterministic"] is True

    def test_writes_files(self, capsys, tmp_path):
        """Test --output writes a scenario and a distribution"""
        path = tmp_path / "det.json"
        run(capsys, "generate", "deterministic", "--cycle", "4", "--labels", "0,0,1,1", "--output", str(path))
        out = tmp_path / "out"
        code, report, _ = run(capsys, "collapse", str(path), "e0", "--output", str(out))
        assert code == 0
        assert sorted(p.name for p in out.iterdir()) == ["det_collapsed.json", "det_collapsed_scenario.json"]
        code, analyzed, _ = run(capsys, "analyze", str(out / "det_collapsed.json"))
        assert analyzed["classification"]["deterministic"] is True

    def test_off_diagonal_refused(self, capsys, chsh_file):
        """Test p₋ edges exit with 3"""
        code, report, _ = run(capsys, "collapse", str(chsh_file), "e0")
        assert code == 3
        assert report["error_type"] == "NotCollapsible"


class TestCategory:
    """Test the category command"""

    def test_abcdu(self, capsys, tmp_path, abcdu):
        """Test hom-sets and the semigroup table"""
        path = tmp_path / "abcdu.json"
        write_json(path, distribution_to_dict(abcdu))
        code, report, _ = run(capsys, "category", str(path), "--semigroup")
        assert code == 0
        category = report["category"]
        assert category["hom_sets"]["x,w"] == ["B", "B^T", "U"]
        assert len(category["support"]) == 2
        assert category["criterion"]["strongly_contextual"] is False
        assert all(row["holds"] for row in category["semigroup_table"])


class TestBundledData:
    """Test the example files under data/"""

    DATA = Path(__file__).resolve().parent.parent / "data"

    @pytest.mark.parametrize(
        "name,sc,contextual",
        [("chsh_pr.json", True, True), ("square_mixture.json", False, False), ("abcdu.json", False, True)],
    )
    def test_analyze(self, capsys, name, sc, contextual):
        """Test the bundled distributions classify as documented"""
        code, report, _ = run(capsys, "analyze", str(self.DATA / name))
        assert code == 0
        assert report["classification"]["strongly_contextual"] is sc
        assert report["classification"]["contextual"] is contextual

    def test_face(self, capsys):
        """Test the bundled labeling gives the PR box face"""
        code, report, _ = run(capsys, "face", str(self.DATA / "square_scenario.json"), str(self.DATA / "square_odd_labels.json"))
        assert code == 0
        assert report["face"]["unique_sc_vertex"]["edges"]["e0"] == [["0", "1/2"], ["1/2", "0"]]


if __name__ == "__main__":
    pytest.main([__file__, "-v"])

import json
from pathlib import Path

import pytest

from clocus.cli import main
from clocus.config import Mode, load_config, parse_config
from clocus.errors import ConfigError
from clocus.report import to_text
from clocus.runner import EXIT_CONFIG, EXIT_INTERNAL, EXIT_OK, run_scenario

SCENARIOS = Path(__file__).resolve().parents[1] / "scenarios"


def write(tmp_path, doc, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


class TestConfig:
    def test_version_mandatory(self):
        with pytest.raises(ConfigError, match="version"):
            parse_config({"mode": "Analyze", "random": {"k": 3, "hs": [2, 2]}})

    def test_unknown_key(self):
        with pytest.raises(ConfigError):
            parse_config({"version": 1, "mode": "Analyze", "random": {"k": 3, "hs": [2, 2]}, "extra": 1})

    def test_exactly_one_source(self):
        with pytest.raises(ConfigError, match="exactly one"):
            parse_config({"version": 1, "mode": "Analyze"})
        with pytest.raises(ConfigError):
            parse_config({"version": 1, "mode": "ConstructScroll", "random": {"k": 3, "hs": [2, 2]}})

    def test_mode_conflict(self):
        with pytest.raises(ConfigError, match="conflicts"):
            parse_config({"version": 1, "mode": "Analyze", "random": {"k": 3, "hs": [2, 2]}}, Mode.VERIFY)

    def test_bad_modulus(self):
        with pytest.raises(ConfigError, match="prime"):
            parse_config({"version": 1, "mode": "Analyze", "field": 12, "random": {"k": 3, "hs": [2, 2]}})

    def test_normalized_echo_round_trips(self):
        for path in sorted(SCENARIOS.glob("*.json")):
            cfg = load_config(path)
            again = parse_config(json.loads(json.dumps(cfg.to_json())))
            assert again == cfg

    def test_report_config_round_trips(self):
        cfg = load_config(SCENARIOS / "two_view_quadric.json")
        report = run_scenario(cfg).report
        assert parse_config(report["config"]) == cfg


class TestReports:
    def test_bordiga_analysis(self):
        report = run_scenario(load_config(SCENARIOS / "bordiga_random.json")).report
        assert report["expected"] == {"dim": 2, "deg": 6}
        assert (report["measured"]["dim"], report["measured"]["deg"]) == (2, 6)
        assert report["verdict"] == "PASS"
        assert {"seed", "field", "version"} <= report.keys()

    def test_four_lines_construction(self):
        result = run_scenario(load_config(SCENARIOS / "four_lines.json"))
        tags = {c["tag"]: c["passed"] for c in result.report["checks"]}
        assert result.exit_code == EXIT_OK
        assert tags["center-recovery"] and tags["round-trip"]

    def test_text_lists_checks_with_tags(self):
        text = to_text(run_scenario(load_config(SCENARIOS / "scroll_p4.json")).report)
        assert "PASS  round-trip" in text
        assert "seed" in text and "GF(32003)" in text and "clocus 0.1.0" in text


class TestCommandLine:
    def test_analyze_json_is_byte_identical(self, tmp_path):
        outs = []
        for name in ("a.json", "b.json"):
            out = tmp_path / name
            assert main(["analyze", "--config", str(SCENARIOS / "bordiga_random.json"), "--out", str(out)]) == EXIT_OK
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]
        assert json.loads(outs[0])["verdict"] == "PASS"

    def test_schema_violation_exit_code(self, tmp_path, capsys):
        path = write(tmp_path, {"version": 2, "random": {"k": 3, "hs": [2, 2]}})
        assert main(["analyze", "--config", path]) == EXIT_CONFIG
        assert "config error" in capsys.readouterr().err

    def test_missing_file_exit_code(self, tmp_path):
        assert main(["analyze", "--config", str(tmp_path / "nope.json")]) == EXIT_CONFIG

    def test_invalid_json_exit_code(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{ not json")
        assert main(["analyze", "--config", str(path)]) == EXIT_CONFIG

    def test_invalid_camera_is_config_error(self, tmp_path):
        doc = {"version": 1, "field": "QQ", "setup": {
            "k": 3, "hs": [1, 1],
            "P": [[[1, 0, 0, 0], [1, 0, 0, 0]], [[0, 1, 0, 0], [0, 0, 1, 0]]],
            "Q": [[[1, 0, 0, 0], [0, 1, 0, 0]], [[0, 0, 1, 0], [0, 0, 0, 1]]],
        }}
        assert main(["analyze", "--config", write(tmp_path, doc)]) == EXIT_CONFIG

    def test_construction_failure_exit_code(self, tmp_path, capsys):
        doc = {"version": 1, "target": {"lambda": 5, "E": [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [1, 1, 1, 0]]}}
        assert main(["construct", "four-lines", "--input", write(tmp_path, doc)]) == EXIT_INTERNAL
        report = json.loads(capsys.readouterr().out)
        assert report["verdict"] == "ERROR" and report["error"]["type"] == "InvalidLinesError"

    @pytest.mark.parametrize("kind,name", [("scroll", "scroll_p4"), ("cubic", "fermat_cubic"), ("four-lines", "four_lines")])
    def test_constructions_pass(self, kind, name, capsys):
        assert main(["construct", kind, "--input", str(SCENARIOS / f"{name}.json"), "--format", "text"]) == EXIT_OK
        assert "verdict               PASS" in capsys.readouterr().out

    def test_verify_subset_and_figures(self, tmp_path, capsys):
        code = main(["verify-classification", "--only", "1,7,11", "--format", "text", "--figures", str(tmp_path / "figs")])
        out = capsys.readouterr().out
        assert code == EXIT_OK
        assert out.count("PASS  ") == 3
        assert (tmp_path / "figs" / "criteria.png").stat().st_size > 0
        rows = (tmp_path / "figs" / "criteria.csv").read_text().splitlines()
        assert rows[0].startswith("criterion,") and len(rows) == 4

    def test_only_rejects_garbage(self):
        assert main(["verify-classification", "--only", "one"]) == EXIT_CONFIG

    def test_analyze_figures(self, tmp_path):
        figs = tmp_path / "figs"
        assert main(["analyze", "--config", str(SCENARIOS / "quartic_small_field.json"), "--out", str(tmp_path / "r.json"), "--figures", str(figs)]) == EXIT_OK
        assert {"hilbert_function.png", "hilbert_function.csv", "jacobian_ranks.png", "jacobian_ranks.csv"} <= {p.name for p in figs.iterdir()}

import csv
import json

import pytest

from hyperforge.bundle import canonical_json
from hyperforge.cli import export_report, main, run_command

from conftest import TARGETS_JSON


@pytest.fixture()
def targets_file(tmp_path):
    path = tmp_path / "targets.json"
    path.write_text(json.dumps(TARGETS_JSON))
    return str(path)


def test_spaces_list():
    code, payload = run_command(["spaces", "list"])
    assert code == 0 and len(payload["spaces"]) == 7


class TestCriteriaCommands:
    def test_hypercyclicity_witness(self):
        code, payload = run_command(
            ["criteria", "hc", "--space", "l1", "--weight", "const:2", "--count", "5",
             "--horizon-n", "3"]
        )
        assert code == 0
        assert payload["hypercyclicity"]["p"] == [1, 2, 3, 4, 5]

    def test_contracting_weight_reports_search_exhausted(self):
        code, payload = run_command(
            ["criteria", "hc", "--space", "l1", "--weight", "const:0.5", "--count", "3",
             "--horizon-n", "3"]
        )
        assert code == 1 and payload["error"] == "search_exhausted"

    def test_mixing(self):
        code, payload = run_command(
            ["criteria", "mixing", "--space", "entire_cauchy", "--weight", "maclane",
             "--horizon-n", "60", "--horizon-q", "2"]
        )
        assert code == 0 and payload["mixing"]["thresholds"]["2"] == 10

    def test_property_b_rejection_names_the_condition(self):
        code, payload = run_command(["criteria", "prop-b", "--space", "omega_cauchy"])
        assert code == 1
        assert payload["error"] == "property_b_unavailable"
        assert "does not satisfy condition (i)" in payload["message"]

    def test_bad_space_is_a_distinct_code(self):
        code, payload = run_command(["criteria", "hc", "--space", "nope"])
        assert code == 1 and payload["error"] == "space_unknown"

    def test_bad_weight_is_a_distinct_code(self):
        code, payload = run_command(["criteria", "hc", "--space", "l1", "--weight", "const:x"])
        assert code == 1 and payload["error"] == "weight_invalid"


class TestBuildAndVerify:
    def test_coordinatewise_build_and_reports(self, targets_file, tmp_path):
        out = str(tmp_path / "g.json")
        code, payload = run_command(
            ["build", "coord", "--space", "l1", "--weight", "const:2",
             "--targets", targets_file, "--rounds", "12", "--out", out]
        )
        assert code == 0 and len(payload["rounds"]) == 12
        assert all(
            c["pass"] for rd in payload["rounds"] for c in rd["checks"].values()
        )
        code, rep = run_command(["verify", "power", "--bundle", out, "--power", "2"])
        assert code == 0 and rep["summary"]["pass"]
        code, rep = run_command(["verify", "certificates", "--bundle", out])
        assert code == 0

    def test_element_verification_via_parser(self, targets_file, tmp_path):
        out = str(tmp_path / "g3.json")
        code, _ = run_command(
            ["build", "algebrable-coord", "--space", "l1", "--weight", "const:2",
             "--targets", targets_file, "--rounds", "12", "--K", "3", "--out", out]
        )
        assert code == 0
        code, rep = run_command(
            ["verify", "element", "--bundle", out, "--element", "x1^2 + 0.3*x1^3"]
        )
        assert code == 0 and rep["summary"]["pass"]
        code, rep = run_command(["verify", "zero-products", "--bundle", out])
        assert code == 0 and rep["summary"]["pass"]

    def test_constant_element_is_a_semantic_error(self, targets_file, tmp_path):
        out = str(tmp_path / "g.json")
        run_command(
            ["build", "coord", "--space", "l1", "--weight", "const:2",
             "--targets", targets_file, "--rounds", "4", "--out", out]
        )
        code, payload = run_command(
            ["verify", "element", "--bundle", out, "--element", "1 + x1"]
        )
        assert code == 1 and payload["error"] == "semantic_error"

    def test_cauchy_build_expansion(self, targets_file, tmp_path):
        out = str(tmp_path / "c.json")
        code, _ = run_command(
            ["build", "cauchy", "--space", "l1", "--weight", "const:2",
             "--targets", targets_file, "--rounds", "6", "--out", out]
        )
        assert code == 0
        code, rep = run_command(
            ["verify", "expansion", "--bundle", out, "--element", "x1^2 + x1"]
        )
        assert code == 0 and rep["agree"]

    def test_lambda_build_and_element(self, targets_file, tmp_path):
        out = str(tmp_path / "ca.json")
        code, _ = run_command(
            ["build", "algebrable-cauchy", "--space", "l1", "--weight", "const:2",
             "--targets", targets_file, "--rounds", "8", "--K", "2", "--out", out]
        )
        assert code == 0
        code, rep = run_command(
            ["verify", "element", "--bundle", out, "--element", "x1*x2 + x1"]
        )
        assert code == 0 and rep["summary"]["pass"]

    def test_missing_bundle_file(self):
        code, payload = run_command(["verify", "power", "--bundle", "/nonexistent.json"])
        assert code == 1 and payload["error"] == "bundle_invalid"

    def test_build_determinism(self, targets_file, tmp_path):
        args = ["build", "coord", "--space", "l1", "--weight", "const:2",
                "--targets", targets_file, "--rounds", "8"]
        _, p1 = run_command(args)
        _, p2 = run_command(args)
        assert canonical_json(p1) == canonical_json(p2)

    def test_main_prints_json(self, capsys, targets_file):
        rc = main(["criteria", "hc", "--space", "l1", "--weight", "const:2",
                   "--count", "3", "--horizon-n", "3"])
        assert rc == 0
        out = capsys.readouterr().out
        assert json.loads(out)["hypercyclicity"]["p"] == [1, 2, 3]


class TestReportExport:
    def test_csv_rows_match_checked_rounds(self, targets_file, tmp_path):
        out = str(tmp_path / "g.json")
        run_command(
            ["build", "coord", "--space", "l1", "--weight", "const:2",
             "--targets", targets_file, "--rounds", "8", "--out", out]
        )
        rep_path = str(tmp_path / "r.json")
        csv_path = str(tmp_path / "r.csv")
        code, rep = run_command(
            ["verify", "power", "--bundle", out, "--power", "1",
             "--out", rep_path, "--csv", csv_path]
        )
        assert code == 0
        with open(csv_path) as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["round", "distance", "bound", "ratio"]
        assert len(rows) - 1 == rep["summary"]["rounds_checked"]
        reread = json.loads(open(rep_path).read())
        assert canonical_json(reread) == canonical_json(rep)

    def test_empty_report_gives_header_only_csv(self, tmp_path):
        path = str(tmp_path / "empty.csv")
        export_report({"rounds": []}, None, csv_path=path)
        with open(path) as fh:
            rows = list(csv.reader(fh))
        assert rows == [["round", "distance", "bound", "ratio"]]

    def test_json_roundtrip_identical(self, tmp_path):
        report = {"rounds": [{"round": 1, "distance": 0.5, "bound": 1.0, "ratio": 0.5}]}
        path = str(tmp_path / "rep.json")
        export_report(report, path)
        back = json.loads(open(path).read())
        assert canonical_json(back) == canonical_json(report)
        export_report(back, path)
        assert json.loads(open(path).read()) == back


def test_out_of_range_values_map_to_config_errors(tmp_path, targets_file):
    out = str(tmp_path / "g.json")
    run_command(
        ["build", "coord", "--space", "l1", "--weight", "const:2",
         "--targets", targets_file, "--rounds", "3", "--out", out]
    )
    code, payload = run_command(["verify", "power", "--bundle", out, "--power", "0"])
    assert code == 1 and payload["error"] == "config_invalid"

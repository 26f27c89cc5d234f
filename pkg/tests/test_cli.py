import json

import pytest

from hybridmethods.cli import main
from hybridmethods.dataset import CleaningPolicy, write_clean_csv
from hybridmethods.synthetic import (
    REFERENCE_EXTENSION,
    REFERENCE_FRAME,
    REFERENCE_QUADRUPLE,
    reference_construction_table,
)


@pytest.fixture(scope="module")
def clean_csv(tmp_path_factory):
    path = tmp_path_factory.mktemp("cli") / "clean.csv"
    write_clean_csv(reference_construction_table(), path, CleaningPolicy())
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out) if out.strip() else None


RAW_CSV = """CASE,PU04,D001,PU09_19,PU10_07,PU10_08
a,1,1,1,3,2
b,0,2,1,-9,0
c,1,3,0,1,
"""

RAW_MAPPING = {
    "respondent_id": "CASE",
    "variables": [
        {"id": "PU04", "type": "yesno"},
        {"id": "D001", "type": "category",
         "categories": {"1": "Micro", "2": "Small", "3": "Medium"}},
        {"id": "PU09_19", "type": "yesno"},
        {"id": "PU10_07", "type": "likert"},
        {"id": "PU10_08", "type": "likert"},
    ],
}


class TestClean:
    def test_clean_pipeline(self, tmp_path, capsys):
        raw = tmp_path / "raw.csv"
        raw.write_text(RAW_CSV, encoding="utf-8")
        mapping = tmp_path / "mapping.json"
        mapping.write_text(json.dumps(RAW_MAPPING), encoding="utf-8")
        out = tmp_path / "clean.csv"
        code, summary = run(capsys, "clean", "--input", str(raw),
                            "--mapping", str(mapping), "--output", str(out))
        assert code == 0
        assert summary["rows_in"] == 3 and summary["rows_out"] == 3
        lines = out.read_text().strip().splitlines()
        assert lines[0] == "respondent_id,PU04,D001,PU09_19,PU10_07,PU10_08"
        # Micro/Small merged; skipped likert became NA; levels categorized
        assert lines[1] == "a,1,MicroAndSmall,1,1,1"
        assert lines[2] == "b,0,MicroAndSmall,1,NA,0"
        assert lines[3] == "c,1,Medium,0,1,NA"


class TestHypotheses:
    def test_report_structure(self, clean_csv, capsys):
        code, report = run(capsys, "hypotheses", "--data", clean_csv)
        assert code == 0
        assert report["alpha"] == 0.05
        assert report["company_size"]["df"] == 3
        assert len(report["sectors"]) == 3
        for sector in report["sectors"]:
            assert sector["corrected_alpha"] == pytest.approx(0.05 / 3)


class TestMine:
    def test_methods_mining(self, clean_csv, capsys):
        code, out = run(capsys, "mine", "--data", clean_csv,
                        "--items", "methods", "--threshold", "0.5")
        assert code == 0
        singles = [s for s in out if len(s["members"]) == 1]
        assert {s["members"][0] for s in singles} >= set(REFERENCE_FRAME)

    def test_practices_with_frame_scope(self, clean_csv, capsys):
        code, out = run(capsys, "mine", "--data", clean_csv,
                        "--items", "practices", "--filter", "PU04=yes",
                        "--frame", ",".join(REFERENCE_FRAME),
                        "--min-size", "2", "--max-size", "2")
        assert code == 0
        assert all(len(s["members"]) == 2 for s in out)
        assert all(s["n"] == 206 for s in out)

    def test_deterministic_output(self, clean_csv, capsys):
        args = ("mine", "--data", clean_csv, "--items", "practices",
                "--threshold", "0.85")
        _, first = run(capsys, *args)
        _, second = run(capsys, *args)
        assert first == second


class TestRank:
    def test_rank_reference_frame(self, clean_csv, capsys):
        code, out = run(capsys, "rank", "--data", clean_csv,
                        "--frame", ",".join(REFERENCE_FRAME),
                        "--filter", "PU04=yes", "--set-size", "4")
        assert code == 0
        assert out["subset_n"] == 206
        entry = out["sizes"][0]
        assert entry["set_size"] == 4 and entry["variant_count"] == 5
        firsts = {r["practice"]: r["first_index"] for r in entry["ranks"]}
        assert all(firsts[p] == 0 for p in REFERENCE_QUADRUPLE)
        assert firsts[REFERENCE_EXTENSION] == 1


class TestConstruct:
    def reference_script(self):
        return {
            "frame": list(REFERENCE_FRAME),
            "filter": "PU04=yes",
            "set_size": 4,
            "steps": [{"add": p} for p in
                      (*REFERENCE_QUADRUPLE, REFERENCE_EXTENSION)],
        }

    def test_reference_script(self, clean_csv, tmp_path, capsys):
        script = tmp_path / "script.json"
        script.write_text(json.dumps(self.reference_script()), encoding="utf-8")
        code, out = run(capsys, "construct", "--script", str(script),
                        "--data", clean_csv)
        assert code == 0
        assert out["final_min_agreement"] == pytest.approx(0.932038835, abs=1e-6)
        assert out["interval"]["lower"] == pytest.approx(0.951456311, abs=1e-9)
        assert out["interval"]["upper"] == pytest.approx(0.966019417, abs=1e-9)

    def test_accepts_labels(self, clean_csv, tmp_path, capsys):
        script = tmp_path / "script.json"
        script.write_text(json.dumps({
            "frame": ["Scrum", "Iterative Development", "Lean Software Development"],
            "filter": "PU04=yes",
            "add": ["Code Review", "Coding Standards"],
        }), encoding="utf-8")
        code, out = run(capsys, "construct", "--script", str(script),
                        "--data", clean_csv)
        assert code == 0
        assert [p["id"] for p in out["practices"]] == ["PU10_07", "PU10_08"]

    def test_empty_script_is_usage_error(self, clean_csv, tmp_path, capsys):
        script = tmp_path / "script.json"
        script.write_text("{}", encoding="utf-8")
        code = main(["construct", "--script", str(script), "--data", clean_csv])
        assert code == 2

    def test_engine_error_gives_exit_1_and_error_object(self, clean_csv,
                                                        tmp_path, capsys):
        script = tmp_path / "script.json"
        script.write_text(json.dumps({
            "frame": ["PU09_01", "PU09_19"], "filter": "PU04=yes",
        }), encoding="utf-8")
        code, out = run(capsys, "construct", "--script", str(script),
                        "--data", clean_csv)
        assert code == 1
        assert out["error"]["type"] == "DegenerateSubsetError"

    def test_matches_service_export(self, clean_csv, tmp_path, capsys):
        from fastapi.testclient import TestClient

        from hybridmethods.service import ServiceConfig, create_app

        script = tmp_path / "script.json"
        script.write_text(json.dumps(self.reference_script()), encoding="utf-8")
        _, cli_out = run(capsys, "construct", "--script", str(script),
                         "--data", clean_csv)

        client = TestClient(create_app(ServiceConfig(data_path=clean_csv)))
        sid = client.post("/sessions", json={
            "frame": list(REFERENCE_FRAME), "filter": "PU04=yes",
            "set_size": 4}).json()["id"]
        for practice in (*REFERENCE_QUADRUPLE, REFERENCE_EXTENSION):
            client.post(f"/sessions/{sid}/practices", json={"item_id": practice})
        assert client.get(f"/sessions/{sid}/export").json() == cli_out


class TestFrames:
    def test_frames_and_cores(self, clean_csv, capsys):
        code, out = run(capsys, "frames", "--data", clean_csv,
                        "--threshold", "0.5")
        assert code == 0
        assert any(f["members"] == list(REFERENCE_FRAME) for f in out["frames"])
        assert out["cores"][0]["members"] == ["PU10_07", "PU10_08"]


class TestOutputFile:
    def test_output_flag_writes_file(self, clean_csv, tmp_path, capsys):
        target = tmp_path / "mined.json"
        code = main(["mine", "--data", clean_csv, "--items", "practices",
                     "--threshold", "0.85", "--output", str(target)])
        assert code == 0
        assert json.loads(target.read_text())

from __future__ import annotations

import json

from ffactor.cli import main
from ffactor.core import problem_to_json


def write_instance(tmp_path, problem, name="instance.json"):
    path = tmp_path / name
    path.write_text(json.dumps(problem_to_json(problem)))
    return str(path)


class TestSolve:
    def test_finds_factor(self, tmp_path, capsys, k2):
        code = main(["solve", write_instance(tmp_path, k2)])
        assert code == 0
        assert json.loads(capsys.readouterr().out) == [["a", "b"]]

    def test_no_factor_exits_three(self, tmp_path, capsys, path3):
        code = main(["solve", write_instance(tmp_path, path3)])
        assert code == 3
        assert capsys.readouterr().out.strip() == "null"

    def test_verify_flag(self, tmp_path, capsys, c4):
        assert main(["solve", "--verify", write_instance(tmp_path, c4)]) == 0

    def test_verify_flag_agrees_on_absence(self, tmp_path, capsys, path3):
        assert main(["solve", "--verify", write_instance(tmp_path, path3)]) == 3

    def test_malformed_json_exits_two(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text("{nope")
        assert main(["solve", str(bad)]) == 2

    def test_inadmissible_instance_exits_two(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text(
            json.dumps(
                {"vertices": ["a", "b"], "edges": [["a", "b"]], "f": {"a": 2, "b": 1}}
            )
        )
        assert main(["solve", str(bad)]) == 2

    def test_missing_file_exits_two(self, tmp_path):
        assert main(["solve", str(tmp_path / "missing.json")]) == 2


class TestRank:
    def test_path_rank_one(self, tmp_path, capsys, path3):
        assert main(["rank", write_instance(tmp_path, path3)]) == 0
        assert json.loads(capsys.readouterr().out) == {"rank": 1}

    def test_unobstructed_rank_null(self, tmp_path, capsys, c4):
        assert main(["rank", write_instance(tmp_path, c4)]) == 0
        assert json.loads(capsys.readouterr().out) == {"rank": None}

    def test_rank_zero(self, tmp_path, capsys):
        from ffactor import build_problem

        problem = build_problem(["a", "b"], [("a", "b")], {"a": 1, "b": 0})
        assert main(["rank", write_instance(tmp_path, problem)]) == 0
        assert json.loads(capsys.readouterr().out) == {"rank": 0}

    def test_witness_attached(self, tmp_path, capsys, path3):
        assert main(["rank", "--witness", write_instance(tmp_path, path3)]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["rank"] == 1
        assert set(doc["witness"]) == {"vertex", "children"}

    def test_omega_capacity_is_an_input_error(self, tmp_path, capsys):
        path = tmp_path / "omega.json"
        path.write_text(
            json.dumps(
                {
                    "vertices": ["a", "b"],
                    "edges": [["a", "b"]],
                    "f": {"a": "omega", "b": 1},
                }
            )
        )
        assert main(["rank", str(path)]) == 2

    def test_budget_flag_exits_five(self, tmp_path, capsys, c4):
        assert (
            main(["rank", "--budget-nodes", "1", write_instance(tmp_path, c4)]) == 5
        )

    def test_budget_env_fallback(self, tmp_path, monkeypatch, c4):
        monkeypatch.setenv("FFACTOR_BUDGET_NODES", "1")
        assert main(["rank", write_instance(tmp_path, c4)]) == 5


class TestCheck:
    def test_true_exits_zero(self, tmp_path, capsys, triangle2):
        code = main(
            ["check", "--property", "p1", write_instance(tmp_path, triangle2)]
        )
        assert code == 0
        assert capsys.readouterr().out.strip() == "true"

    def test_false_exits_one(self, tmp_path, capsys, triangle2):
        code = main(
            ["check", "--property", "p3", write_instance(tmp_path, triangle2)]
        )
        assert code == 1
        assert capsys.readouterr().out.strip() == "false"


class TestStream:
    def test_double_ray_to_file(self, tmp_path, capsys):
        out = tmp_path / "prefix.json"
        code = main(
            ["stream", "--family", "double-ray", "--f", "2", "--steps", "20",
             "--out", str(out)]
        )
        assert code == 0
        doc = json.loads(out.read_text())
        assert doc["steps"] == 20
        assert doc["schedule_ok"] is True
        assert doc["violations"] == []
        assert len(doc["edges"]) == 21
        for entry in doc["ledger"].values():
            assert entry["capacity"] == 2

    def test_complete_reports_omega(self, capsys):
        assert main(["stream", "--family", "complete", "--steps", "6"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert all(e["capacity"] == "omega" for e in doc["ledger"].values())

    def test_omega_f_flag_parses(self, capsys):
        assert (
            main(["stream", "--family", "complete", "--f", "omega", "--steps", "3"])
            == 0
        )

    def test_wrong_family_capacity_exits_two(self, capsys):
        assert (
            main(["stream", "--family", "double-ray", "--f", "1", "--steps", "5"])
            == 2
        )

    def test_negative_steps_exit_two(self, capsys):
        assert (
            main(["stream", "--family", "double-ray", "--steps", "-3"]) == 2
        )


class TestExportDot:
    def test_styles(self, tmp_path, capsys, c4):
        assert main(["export-dot", write_instance(tmp_path, c4)]) == 0
        out = capsys.readouterr().out
        assert out.startswith("graph instance {")
        assert out.count("style=bold") == 2
        assert out.count("style=dashed") == 2

    def test_no_factor_all_dashed(self, tmp_path, capsys, path3):
        assert main(["export-dot", write_instance(tmp_path, path3)]) == 0
        out = capsys.readouterr().out
        assert out.count("style=bold") == 0
        assert out.count("style=dashed") == 2


class TestHereditarySample:
    def test_summary_table(self, capsys):
        assert main(["hereditary-sample", "--property", "p2",
                     "--max-vertices", "3"]) == 0
        out = capsys.readouterr().out
        assert "hereditary-step sample for p2" in out
        assert "counterexamples" in out


def test_module_entry_point_runs_in_subprocess(tmp_path, k2):
    import subprocess
    import sys

    instance = write_instance(tmp_path, k2)
    result = subprocess.run(
        [sys.executable, "-m", "ffactor.cli", "solve", instance],
        capture_output=True,
        text=True,
    )
    assert result.returncode == 0
    assert json.loads(result.stdout) == [["a", "b"]]


SMALL_SUITE = [
    "suite",
    "--max-exhaustive", "3",
    "--samples-5", "12",
    "--samples-6", "6",
    "--samples-7", "4",
    "--trail-samples", "6",
    "--degeneration-samples", "6",
    "--ray-steps", "30",
]


class TestSuite:
    def test_small_run_passes(self, tmp_path, capsys):
        out = tmp_path / "report.json"
        assert main(SMALL_SUITE + ["--out", str(out)]) == 0
        doc = json.loads(out.read_text())
        assert doc["ok"] is True
        names = {c["name"] for c in doc["checks"]}
        assert "oracle_equivalence_p2" in names
        assert "hereditary_p3_measured" in names
        summary = capsys.readouterr().out
        assert "oracle_equivalence_p2: ok" in summary

    def test_injected_fault_fails(self, tmp_path, capsys):
        out = tmp_path / "report.json"
        code = main(SMALL_SUITE + ["--inject-fault", "bad-flip", "--out", str(out)])
        assert code == 4
        doc = json.loads(out.read_text())
        assert doc["ok"] is False

    def test_seed_change_keeps_verdicts(self, tmp_path, capsys):
        assert main(SMALL_SUITE + ["--seed", "12345",
                                   "--out", str(tmp_path / "r.json")]) == 0

    def test_worker_pool_matches_sequential(self, tmp_path, capsys):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        assert main(SMALL_SUITE + ["--out", str(a)]) == 0
        assert main(SMALL_SUITE + ["--workers", "2", "--out", str(b)]) == 0
        doc_a, doc_b = json.loads(a.read_text()), json.loads(b.read_text())
        doc_a["config"]["workers"] = doc_b["config"]["workers"]
        assert doc_a == doc_b

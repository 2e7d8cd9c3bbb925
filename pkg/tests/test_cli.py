import hashlib
import json
from pathlib import Path

from click.testing import CliRunner

from adfit.cli import main

from conftest import bench_description, fixture_project, write_fixture_dir


def run_cli(*args):
    return CliRunner().invoke(main, list(args))


def sha(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


class TestValidateCommand:
    def test_valid_project(self, project_file):
        result = run_cli("validate", str(project_file))
        assert result.exit_code == 0
        assert "ok" in result.output

    def test_overlapping_labels_exit_2(self, tmp_path, project_file):
        doc = json.loads(project_file.read_text())
        doc["labels"][1]["start"] = doc["labels"][0]["end"] - 1.0  # overlap
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps(doc))
        result = run_cli("validate", str(bad))
        assert result.exit_code == 2
        assert "label" in result.output


class TestRenderCommand:
    def test_happy_path_writes_artifacts(self, project_file, tmp_path):
        out = tmp_path / "out"
        result = run_cli("render", str(project_file), "--mode", "inline",
                         "--seed", "3", "--out-dir", str(out))
        assert result.exit_code == 0, result.output
        for name in ("plan.json", "manifest.json", "output.wav", "report.txt"):
            assert (out / name).exists(), name
        plan = json.loads((out / "plan.json").read_text())
        assert plan["mode"] == "inline"
        assert "total cost E" in result.output

    def test_validation_failure_exit_2(self, tmp_path, project_file):
        doc = json.loads(project_file.read_text())
        doc["labels"][1]["start"] -= 1.0
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps(doc))
        result = run_cli("render", str(bad))
        assert result.exit_code == 2

    def test_infeasible_presence_lock_exit_3(self, tmp_path):
        # presence-locked description that cannot fit any gap
        bench = bench_description(anchor=5.5, lock_text=True, lock_presence=True)
        from adfit.model import SILENCE, SPEECH, AudioLabelSegment

        project = fixture_project(
            source_duration=20.0,
            transcript=(),
            labels=(
                AudioLabelSegment(0, 5, SPEECH),
                AudioLabelSegment(5, 6, SILENCE),
                AudioLabelSegment(6, 20, SPEECH),
            ),
            shots=(),
            descriptions=(bench,),
        )
        path = write_fixture_dir(project, tmp_path / "proj")
        result = run_cli("render", str(path), "--mode", "inline")
        assert result.exit_code == 3
        assert "d2" in result.output

    def test_determinism_byte_identical(self, session_project_file, tmp_path):
        hashes = []
        for run in ("a", "b"):
            out = tmp_path / run
            result = run_cli(
                "render", str(session_project_file), "--mode", "extended-inline",
                "--seed", "11", "--out-dir", str(out),
            )
            assert result.exit_code == 0, result.output
            hashes.append(
                tuple(sha(out / n) for n in ("plan.json", "manifest.json", "output.wav"))
            )
        assert hashes[0] == hashes[1]

    def test_config_flags_respected(self, project_file, tmp_path):
        out = tmp_path / "out"
        result = run_cli(
            "render", str(project_file), "--skip-cost", "123.0",
            "--grid", "0.2", "--out-dir", str(out),
        )
        assert result.exit_code == 0, result.output
        plan = json.loads((out / "plan.json").read_text())
        for p in plan["placed"]:
            # starts land on the coarser 0.2 s grid
            assert abs((p["start"] * 1000) % 200) < 1e-6

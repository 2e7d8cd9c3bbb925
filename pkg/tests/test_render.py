import numpy as np
import pytest

from adfit.audio import concat, save_wav, tone
from adfit.audio.render import build_manifest, execute_manifest, render
from adfit.model import Recording
from adfit.optimizer import OptimizerConfig
from adfit.pipeline import run_pipeline
from adfit.plancheck import plan_violations

from conftest import bench_description, fixture_project, synthesize_source

RATE = 8000


@pytest.fixture(scope="module")
def source():
    return synthesize_source(fixture_project(), RATE)


def pipeline_for(mode, source, seed=7, project=None):
    project = project or fixture_project()
    config = OptimizerConfig().with_overrides({"mode": mode})
    return project, run_pipeline(project, config, seed=seed, source=source)


class TestRenderModes:
    def test_empty_plan_copies_source(self, source):
        project = fixture_project(descriptions=())
        project, result = pipeline_for("inline", source, project=project)
        assert result.manifest["decisions"] == [
            {"type": "copy", "src": [0, source.n_frames]}
        ]
        assert np.array_equal(result.clip.samples, source.samples)

    def test_inline_sample_count_exact(self, source):
        project, result = pipeline_for("inline", source)
        assert result.clip.n_frames == source.n_frames
        assert plan_violations(project, result.plan) == []

    def test_extended_duration(self, source):
        project, result = pipeline_for("extended", source)
        narration = 0
        for d in result.manifest["decisions"]:
            if d["type"] == "pause":
                desc = project.description(d["description"])
                spoken = sum(
                    1 for i in d["kept_indices"] if not desc.words[i].is_punct
                )
                narration += int(round(0.3 * RATE)) * spoken
        assert len(result.plan.placed) == len(project.descriptions)
        assert abs(result.clip.n_frames - (source.n_frames + narration)) <= 1

    def test_extended_inline_duration(self, source):
        project, result = pipeline_for("extended_inline", source)
        ext_frames = sum(int(round(p.extension * RATE)) for p in result.plan.placed)
        assert abs(result.clip.n_frames - (source.n_frames + ext_frames)) <= 1

    def test_extension_used_when_gap_too_small(self):
        from adfit.model import AudioLabelSegment, SILENCE, SPEECH

        bench = bench_description(anchor=5.3, lock_text=True)
        project = fixture_project(
            source_duration=20.0,
            transcript=(),
            labels=(
                AudioLabelSegment(0, 5, SPEECH),
                AudioLabelSegment(5, 6.2, SILENCE),
                AudioLabelSegment(6.2, 20, SPEECH),
            ),
            shots=(),
            descriptions=(bench,),
        )
        src = synthesize_source(project, RATE)

        config = OptimizerConfig().with_overrides({"mode": "inline"})
        inline = run_pipeline(project, config, seed=3, source=src)
        assert inline.plan.skipped == ("d2",)

        config = OptimizerConfig().with_overrides({"mode": "extended_inline"})
        result = run_pipeline(project, config, seed=3, source=src)
        assert len(result.plan.placed) == 1
        placed = result.plan.placed[0]
        # t = 5.3 clears the 0.3 s near-speech margin (+10) at the cost of
        # 0.3 s more extension (+0.3): x = 5.3 + 1.8 - 6.2 = 0.9
        assert placed.start == pytest.approx(5.3)
        assert placed.extension == pytest.approx(0.9, abs=1e-6)
        ext_frames = int(round(placed.extension * RATE))
        assert abs(result.clip.n_frames - (src.n_frames + ext_frames)) <= 1
        assert plan_violations(project, result.plan) == []
        extend = next(d for d in result.manifest["decisions"] if d["type"] == "extend_gap")
        assert extend["method"] == "ambient"
        assert extend["target_frames"] == (extend["src"][1] - extend["src"][0]) + ext_frames

    def test_manifest_replay_bit_identical(self, source):
        project, result = pipeline_for("extended_inline", source)
        replay, stats = execute_manifest(project, result.manifest, source)
        assert np.array_equal(replay.samples, result.clip.samples)

    def test_same_seed_same_output(self, source):
        project1, r1 = pipeline_for("extended_inline", source, seed=5)
        project2, r2 = pipeline_for("extended_inline", source, seed=5)
        assert np.array_equal(r1.clip.samples, r2.clip.samples)
        assert r1.manifest == r2.manifest

    def test_mix_regions_duck_source(self, source):
        project, result = pipeline_for("inline", source)
        mixes = [d for d in result.manifest["decisions"] if d["type"] == "mix"]
        assert mixes, "fixture plan should place narrations inline"
        # inside a mix region the output differs from the raw source
        a, b = mixes[0]["src"]
        assert not np.array_equal(result.clip.samples[a:b], source.samples[a:b])
        # outside every mix region the source is copied verbatim
        copies = [d for d in result.manifest["decisions"] if d["type"] == "copy"]
        ca, cb = copies[0]["src"]
        assert np.array_equal(result.clip.samples[ca:cb], source.samples[ca:cb])

    def test_no_sample_clips_beyond_full_scale(self, source):
        for mode in ("inline", "extended", "extended_inline"):
            _, result = pipeline_for(mode, source)
            assert float(np.abs(result.clip.samples).max()) <= 1.0

    def test_stereo_source_supported(self, source):
        from adfit.audio import AudioClip

        stereo = AudioClip(np.repeat(source.samples, 2, axis=1), RATE)
        project = fixture_project()
        config = OptimizerConfig().with_overrides({"mode": "inline"})
        result = run_pipeline(project, config, seed=2, source=stereo)
        assert result.clip.channels == 2
        assert result.clip.n_frames == stereo.n_frames

        config = OptimizerConfig().with_overrides({"mode": "extended"})
        result = run_pipeline(project, config, seed=2, source=stereo)
        assert result.clip.channels == 2

    def test_limiter_engages_only_above_full_scale(self):
        from adfit.audio import AudioClip
        from adfit.audio.render import _mix_narration

        region = np.full((8000, 1), 0.8, dtype=np.float32)
        loud = AudioClip(np.full((4000, 1), 0.8, dtype=np.float32), RATE)
        stats = {"limiter_engaged": []}
        out = _mix_narration(region, loud, 0, RATE, 1.0, "dx", stats)
        assert stats["limiter_engaged"] == ["dx"]
        assert float(np.abs(out).max()) <= 1.0

        quiet = AudioClip(np.full((4000, 1), 0.1, dtype=np.float32), RATE)
        stats = {"limiter_engaged": []}
        _mix_narration(region, quiet, 0, RATE, 10 ** (-9 / 20), "dy", stats)
        assert stats["limiter_engaged"] == []


class TestRecordedNarration:
    def test_recording_is_cut_into_render(self, tmp_path, source):
        freqs = [300, 350, 400, 450, 500, 550]
        rec = concat([tone(f, 0.4, RATE, amplitude=0.5) for f in freqs])
        audio_dir = tmp_path
        (audio_dir / "audio").mkdir()
        save_wav(audio_dir / "audio" / "d2.wav", rec)
        alignment = tuple((i * 0.4, (i + 1) * 0.4) for i in range(6))
        bench = bench_description(
            recording=Recording(path="audio/d2.wav", alignment=alignment)
        )
        project = fixture_project(
            descriptions=(bench,),
        )
        config = OptimizerConfig()
        result = run_pipeline(project, config, seed=1, source=source, audio_dir=audio_dir)
        assert len(result.plan.placed) == 1
        placed = result.plan.placed[0]
        assert placed.candidate.duration <= 2.4  # recorded timing, 6 words x 0.4s
        mix = next(d for d in result.manifest["decisions"] if d["type"] == "mix")
        assert mix["kept_indices"] == list(placed.candidate.kept_indices)

    def test_narration_longer_than_slot_rejected(self, source):
        from adfit.audio.render import RenderError
        from adfit.optimizer import PlacedDescription
        from adfit.optimizer.plan import CompositionPlan
        from adfit.candidates import Candidate

        project = fixture_project()
        cand = Candidate(
            description_id="d2",
            kept_indices=tuple(range(6)),
            text=project.description("d2").text,
            duration=30.0,
            cut_count=0,
            drops_last_word=False,
        )
        plan = CompositionPlan(
            mode="inline",
            placed=(
                PlacedDescription(
                    description_id="d2", candidate=cand, start=33.0, duration=30.0
                ),
            ),
            skipped=(),
            total_cost=0.0,
            total_cost_units=0,
            costs={"d2": {"breakdown": None, "penalty": 0.0, "skipped": False}},
        )
        with pytest.raises(RenderError, match="d2"):
            build_manifest(project, plan, "inline", 0, source)

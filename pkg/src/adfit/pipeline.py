"""End-to-end pipeline: gaps -> candidates -> scores -> optimize -> render."""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

from . import resources
from .audio import AudioClip, estimate_tempo, load_wav, render, save_wav
from .candidates import collect_protected_phrases, droppable_units, generate_candidates
from .model import MUSIC, Project, compute_gaps, validate_project
from .optimizer import OptimizerConfig, ScoredCandidate, optimize
from .optimizer.config import MIN_EXTENDABLE_MUSIC_S
from .optimizer.geometry import classify_extendable
from .scoring import (
    OverrideScorer,
    build_fallback_model,
    candidate_cost,
    _occurrence_counts,
)


@dataclass
class ScoringSetup:
    lm_by_description: dict
    freq: object
    glossary: list
    stopwords: list
    occurrence_counts: dict


@dataclass
class PipelineResult:
    plan: object
    gaps: list
    scored_by_id: dict
    manifest: dict = None
    clip: AudioClip = None
    render_stats: dict = None
    report: str = ""
    diagnostics: list = field(default_factory=list)


def build_scoring(project: Project, glossary=None, stopwords=None, freq=None) -> ScoringSetup:
    glossary = glossary if glossary is not None else resources.default_glossary()
    stopwords = stopwords if stopwords is not None else resources.default_stopwords()
    freq = freq if freq is not None else resources.default_frequency_table()
    base = build_fallback_model(project, resources.general_corpus_sentences())
    lm_by_description = {
        d.id: OverrideScorer(base, project.coherence_overrides.get(d.id, {}))
        for d in project.descriptions
    }
    return ScoringSetup(
        lm_by_description=lm_by_description,
        freq=freq,
        glossary=glossary,
        stopwords=stopwords,
        occurrence_counts=_occurrence_counts(project),
    )


def scored_candidates_for(
    description, project: Project, config: OptimizerConfig, setup: ScoringSetup, diagnostics=None
):
    protected = collect_protected_phrases(
        description, project, setup.glossary, setup.stopwords
    )
    if diagnostics is not None:
        diagnostics.extend(protected.diagnostics)
    units = droppable_units(description, protected)
    candidates = generate_candidates(description, units, cap=config.candidate_cap)
    lm = setup.lm_by_description[description.id]
    scored = [
        ScoredCandidate(
            candidate=c,
            breakdown=candidate_cost(
                c,
                config,
                lm,
                setup.freq,
                project,
                glossary=setup.glossary,
                description=description,
                occurrence_counts=setup.occurrence_counts,
            ),
        )
        for c in candidates
    ]
    return scored, protected


def generate_all_scored(project, config, setup, diagnostics=None) -> dict:
    out = {}
    for d in project.descriptions:
        scored, _ = scored_candidates_for(d, project, config, setup, diagnostics)
        out[d.id] = scored
    return out


def classify_project_gaps(project, config, source: AudioClip = None, diagnostics=None) -> list:
    """Derive and classify gaps; music gaps long enough to matter get a
    tempo estimate from the source audio when it is available."""
    gaps = []
    for gp in compute_gaps(project.labels, project.transcript):
        bpm = None
        if gp.label == MUSIC and source is not None and gp.duration >= MIN_EXTENDABLE_MUSIC_S:
            a = int(round(gp.start * source.sample_rate))
            b = int(round(gp.end * source.sample_rate))
            bpm = estimate_tempo(source.slice_frames(a, b), diagnostics=diagnostics)
        gaps.append(
            classify_extendable(
                gp, bpm, cap_factor=config.extension_cap_factor, diagnostics=diagnostics
            )
        )
    return gaps


def run_pipeline(
    project: Project,
    config: OptimizerConfig,
    seed: int = 0,
    audio_dir=None,
    source: AudioClip = None,
    render_audio: bool = True,
    setup: ScoringSetup = None,
) -> PipelineResult:
    diagnostics = []
    if source is None and render_audio:
        if not project.source_audio:
            raise FileNotFoundError("project has no source audio reference")
        path = Path(audio_dir) / project.source_audio if audio_dir else Path(project.source_audio)
        source = load_wav(path)

    setup = setup or build_scoring(project)
    gaps = classify_project_gaps(project, config, source=source, diagnostics=diagnostics)
    scored_by_id = generate_all_scored(project, config, setup, diagnostics)
    plan = optimize(project, scored_by_id, config, gaps=gaps, diagnostics=diagnostics)

    result = PipelineResult(
        plan=plan, gaps=gaps, scored_by_id=scored_by_id, diagnostics=diagnostics
    )
    if render_audio:
        clip, manifest, stats = render(
            project, plan, config.mode, seed, source=source, audio_dir=audio_dir,
            duck_db=config.duck_db,
        )
        result.manifest = manifest
        result.clip = clip
        result.render_stats = stats
    result.report = build_report(project, result, config, seed)
    return result


def build_report(project: Project, result: PipelineResult, config: OptimizerConfig, seed: int) -> str:
    plan = result.plan
    lines = [
        f"mode: {plan.mode}",
        f"seed: {seed}",
        f"descriptions: {len(project.descriptions)}"
        f" (placed {len(plan.placed)}, skipped {len(plan.skipped)})",
        f"total cost E: {plan.total_cost:.6f}",
        "",
        "placed:",
    ]
    for p in plan.placed:
        c = plan.costs[p.description_id]
        b = c["breakdown"]
        lines.append(
            f"  {p.description_id}: t={p.start:.2f}s l={p.duration:.2f}s"
            + (f" ext={p.extension:.2f}s" if p.extension else "")
            + f" | coh={b.coherence:.3f} info={b.informativeness:.4f} edit={b.edit:.0f}"
            f" C={b.weighted_total:.3f} P={c['penalty']:.3f}"
            f" | \"{p.candidate.text}\""
        )
    if plan.skipped:
        lines.append("skipped:")
        for did in plan.skipped:
            lines.append(f"  {did}: cost {config.skip_cost:.0f}")
    if result.render_stats and result.render_stats.get("limiter_engaged"):
        lines.append(f"limiter engaged for: {result.render_stats['limiter_engaged']}")
    if result.diagnostics:
        lines.append("diagnostics:")
        for d in result.diagnostics:
            lines.append(f"  {d}")
    return "\n".join(lines) + "\n"


def write_artifacts(result: PipelineResult, out_dir) -> dict:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {
        "plan": out / "plan.json",
        "manifest": out / "manifest.json",
        "wav": out / "output.wav",
        "report": out / "report.txt",
    }
    paths["plan"].write_text(
        json.dumps(result.plan.to_dict(), indent=2, sort_keys=True), encoding="utf-8"
    )
    if result.manifest is not None:
        paths["manifest"].write_text(
            json.dumps(result.manifest, indent=2, sort_keys=True), encoding="utf-8"
        )
    if result.clip is not None:
        save_wav(paths["wav"], result.clip)
    paths["report"].write_text(result.report, encoding="utf-8")
    return paths


def artifact_hashes(paths: dict) -> dict:
    return {
        name: hashlib.sha256(Path(p).read_bytes()).hexdigest()
        for name, p in paths.items()
        if Path(p).exists()
    }


def validate_or_raise(project: Project):
    diags = validate_project(project)
    if diags:
        raise ProjectValidationError(diags)
    return project


class ProjectValidationError(ValueError):
    def __init__(self, diagnostics):
        super().__init__(
            "project validation failed:\n" + "\n".join(f"  {d}" for d in diagnostics)
        )
        self.diagnostics = diagnostics

"""HTTP authoring service.

Serves the interactive workflow on top of the engine: project CRUD,
description editing with live candidate regeneration, recording upload,
rendering, and the post-render word-toggle / slider interactions.

Writes are serialized per project behind optimistic revision checks:
every mutating request carries ``base_revision`` and conflicts get 409.
Each mutation is persisted (atomic temp-file rename + fsync) before its
response is sent.
"""
from __future__ import annotations

import base64
import json
import os
import threading
import uuid
from dataclasses import replace
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, HTTPException, Query
from fastapi.responses import FileResponse
from pydantic import BaseModel

from .audio import AudioClip, load_wav, save_wav
from .audio.render import RenderError, _mix_narration, narration_clip
from .candidates import collect_protected_phrases
from .model import Recording, TimedWord, validate_project
from .optimizer import InfeasiblePlacementError, OptimizerConfig
from .pipeline import build_scoring, run_pipeline, scored_candidates_for
from .project_io import (
    project_from_dict,
    project_to_dict,
    word_from_dict,
)
from .scoring import CostBreakdown


class ProjectStore:
    """Directory-backed store: one subdirectory per project holding the
    versioned document, uploaded audio and render artifacts."""

    def __init__(self, root):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self._locks = {}
        self._guard = threading.Lock()

    def lock(self, pid: str) -> threading.Lock:
        with self._guard:
            return self._locks.setdefault(pid, threading.Lock())

    def _doc_path(self, pid: str) -> Path:
        return self.root / pid / "project.json"

    def audio_dir(self, pid: str) -> Path:
        d = self.root / pid / "audio"
        d.mkdir(parents=True, exist_ok=True)
        return d

    def artifacts_dir(self, pid: str) -> Path:
        d = self.root / pid / "artifacts"
        d.mkdir(parents=True, exist_ok=True)
        return d

    def project_dir(self, pid: str) -> Path:
        return self.root / pid

    def create(self, stored: dict) -> str:
        pid = uuid.uuid4().hex[:12]
        (self.root / pid).mkdir(parents=True)
        self.save(pid, stored)
        return pid

    def load(self, pid: str) -> dict:
        path = self._doc_path(pid)
        if not path.exists():
            raise KeyError(pid)
        return json.loads(path.read_text(encoding="utf-8"))

    def save(self, pid: str, stored: dict) -> None:
        path = self._doc_path(pid)
        tmp = path.with_suffix(".json.tmp")
        data = json.dumps(stored, indent=2, sort_keys=True)
        with open(tmp, "w", encoding="utf-8") as fh:
            fh.write(data)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, path)


class CreateProjectBody(BaseModel):
    project: dict
    source_audio_base64: Optional[str] = None


class DescriptionEditBody(BaseModel):
    base_revision: int
    words: Optional[list] = None
    text: Optional[str] = None
    anchor_time: Optional[float] = None
    lock_text: Optional[bool] = None
    lock_time: Optional[bool] = None
    lock_presence: Optional[bool] = None


class RecordingBody(BaseModel):
    base_revision: int
    wav_base64: str
    alignment: list


class ToggleWordBody(BaseModel):
    base_revision: int
    word_index: int


class SelectCandidateBody(BaseModel):
    base_revision: int
    index: int


def _breakdown_json(b: CostBreakdown) -> dict:
    return {
        "coherence": b.coherence,
        "informativeness": b.informativeness,
        "edit": b.edit,
        "weighted_total": b.weighted_total,
    }


def _candidate_json(sc) -> dict:
    c = sc.candidate
    return {
        "kept_indices": list(c.kept_indices),
        "text": c.text,
        "duration": c.duration,
        "cut_count": c.cut_count,
        "drops_last_word": c.drops_last_word,
        "cost": _breakdown_json(sc.breakdown),
    }


def create_app(store_root) -> FastAPI:
    store = ProjectStore(store_root)
    app = FastAPI(title="adfit authoring service")

    def get_stored(pid: str) -> dict:
        try:
            return store.load(pid)
        except KeyError:
            raise HTTPException(status_code=404, detail=f"unknown project {pid!r}")

    def check_revision(stored: dict, base_revision: int) -> None:
        if stored["revision"] != base_revision:
            raise HTTPException(
                status_code=409,
                detail={
                    "error": "revision-conflict",
                    "current": stored["revision"],
                    "base": base_revision,
                },
            )

    def project_of(stored: dict):
        return project_from_dict(stored["project"])

    def config_of(stored: dict, mode=None) -> OptimizerConfig:
        overrides = dict(stored["project"].get("optimizer", {}))
        if mode is not None:
            overrides["mode"] = mode
        return OptimizerConfig().with_overrides(overrides)

    @app.post("/projects")
    def create_project(body: CreateProjectBody):
        project_dict = dict(body.project)
        pid = uuid.uuid4().hex[:12]
        pdir = store.root / pid
        pdir.mkdir(parents=True)
        if body.source_audio_base64:
            audio_dir = store.audio_dir(pid)
            (audio_dir / "source.wav").write_bytes(
                base64.b64decode(body.source_audio_base64)
            )
            project_dict["source_audio"] = "audio/source.wav"
        try:
            project = project_from_dict(project_dict)
        except Exception as exc:
            raise HTTPException(status_code=422, detail=f"malformed project: {exc}")
        diags = validate_project(project)
        if diags:
            raise HTTPException(
                status_code=422,
                detail={"error": "invalid-project", "diagnostics": [str(d) for d in diags]},
            )
        stored = {
            "revision": 1,
            "project": project_to_dict(project),
            "state": {"plan": None, "mode": None, "seed": None, "selection": {}},
        }
        store.save(pid, stored)
        return {"id": pid, "revision": 1}

    @app.get("/projects/{pid}")
    def get_project(pid: str):
        stored = get_stored(pid)
        project = project_of(stored)
        config = config_of(stored)
        source = _try_load_source(store, pid, stored)
        from .pipeline import classify_project_gaps

        gaps = classify_project_gaps(project, config, source=source)
        return {
            "id": pid,
            "revision": stored["revision"],
            "project": stored["project"],
            "gaps": [
                {
                    "start": g.start,
                    "end": g.end,
                    "label": g.label,
                    "extendable": g.extendable,
                    "max_extension": g.max_extension,
                }
                for g in gaps
            ],
            "plan": stored["state"]["plan"],
            "mode": stored["state"]["mode"],
            "seed": stored["state"]["seed"],
            "selection": stored["state"]["selection"],
        }

    @app.put("/projects/{pid}/descriptions/{did}")
    def edit_description(pid: str, did: str, body: DescriptionEditBody):
        with store.lock(pid):
            stored = get_stored(pid)
            check_revision(stored, body.base_revision)
            project = project_of(stored)
            try:
                desc = project.description(did)
            except KeyError:
                raise HTTPException(status_code=404, detail=f"unknown description {did!r}")

            diagnostics = []
            changed_text = False
            if body.words is not None:
                desc = replace(desc, words=tuple(word_from_dict(w) for w in body.words))
                changed_text = True
            elif body.text is not None:
                tokens = tuple(TimedWord(text=t) for t in body.text.split())
                desc = replace(desc, words=tokens)
                changed_text = True
                diagnostics.append(
                    "plain-text edit carries no POS/dependency annotations; "
                    "only the full original candidate will be generated"
                )
            if changed_text and desc.recording is not None:
                desc = replace(desc, recording=None)
                diagnostics.append("recording deleted because the text changed")
            if body.anchor_time is not None:
                desc = replace(desc, anchor_time=body.anchor_time)
            for lock_name in ("lock_text", "lock_time", "lock_presence"):
                value = getattr(body, lock_name)
                if value is not None:
                    desc = replace(desc, **{lock_name: bool(value)})

            project = project.with_description(desc)
            diags = validate_project(project)
            if diags:
                raise HTTPException(
                    status_code=422,
                    detail={"error": "invalid-edit", "diagnostics": [str(d) for d in diags]},
                )

            config = config_of(stored)
            candidates_json, extra = _regenerate_candidates(project, desc, config)
            diagnostics.extend(extra)

            stored["project"] = project_to_dict(project)
            stored["state"]["selection"].pop(did, None)
            stored["revision"] += 1
            store.save(pid, stored)
            return {
                "revision": stored["revision"],
                "candidates": candidates_json,
                "diagnostics": diagnostics,
            }

    @app.post("/projects/{pid}/descriptions/{did}/recording")
    def upload_recording(pid: str, did: str, body: RecordingBody):
        with store.lock(pid):
            stored = get_stored(pid)
            check_revision(stored, body.base_revision)
            project = project_of(stored)
            try:
                desc = project.description(did)
            except KeyError:
                raise HTTPException(status_code=404, detail=f"unknown description {did!r}")
            if len(body.alignment) != len(desc.words):
                raise HTTPException(
                    status_code=422,
                    detail=f"alignment covers {len(body.alignment)} words, "
                    f"description has {len(desc.words)}",
                )
            rel = f"audio/{did}.wav"
            (store.audio_dir(pid) / f"{did}.wav").write_bytes(
                base64.b64decode(body.wav_base64)
            )
            desc = replace(
                desc,
                recording=Recording(
                    path=rel, alignment=tuple((a, b) for a, b in body.alignment)
                ),
            )
            project = project.with_description(desc)
            stored["project"] = project_to_dict(project)
            stored["revision"] += 1
            store.save(pid, stored)
            return {"revision": stored["revision"]}

    @app.post("/projects/{pid}/render")
    def render_project(pid: str, mode: str = Query("inline"), seed: int = Query(0)):
        mode_key = mode.replace("-", "_")
        with store.lock(pid):
            stored = get_stored(pid)
            project = project_of(stored)
            try:
                config = config_of(stored, mode=mode_key)
            except ValueError as exc:
                raise HTTPException(status_code=422, detail=str(exc))
            try:
                result = run_pipeline(
                    project,
                    config,
                    seed=seed,
                    audio_dir=store.project_dir(pid),
                )
            except InfeasiblePlacementError as exc:
                raise HTTPException(
                    status_code=409, detail={"error": "infeasible-presence-lock", "message": str(exc)}
                )
            except (FileNotFoundError, RenderError) as exc:
                raise HTTPException(status_code=422, detail=str(exc))

            artifacts = store.artifacts_dir(pid)
            wav_name = f"output-{mode_key}-{seed}.wav"
            save_wav(artifacts / wav_name, result.clip)
            plan_dict = result.plan.to_dict()
            (artifacts / "plan.json").write_text(
                json.dumps(plan_dict, indent=2, sort_keys=True), encoding="utf-8"
            )
            (artifacts / "manifest.json").write_text(
                json.dumps(result.manifest, indent=2, sort_keys=True), encoding="utf-8"
            )
            stored["state"]["plan"] = plan_dict
            stored["state"]["mode"] = mode_key
            stored["state"]["seed"] = seed
            stored["state"]["selection"] = {}
            stored["revision"] += 1
            store.save(pid, stored)
            return {
                "revision": stored["revision"],
                "plan": plan_dict,
                "manifest": result.manifest,
                "audio_url": f"/projects/{pid}/artifacts/{wav_name}",
                "report": result.report,
            }

    @app.post("/projects/{pid}/descriptions/{did}/toggle-word")
    def toggle_word(pid: str, did: str, body: ToggleWordBody):
        with store.lock(pid):
            stored = get_stored(pid)
            check_revision(stored, body.base_revision)
            project = project_of(stored)
            try:
                desc = project.description(did)
            except KeyError:
                raise HTTPException(status_code=404, detail=f"unknown description {did!r}")
            idx = body.word_index
            if not (0 <= idx < len(desc.words)):
                raise HTTPException(status_code=422, detail=f"word index {idx} out of range")

            config = config_of(stored)
            setup = build_scoring(project)
            protected = collect_protected_phrases(
                desc, project, setup.glossary, setup.stopwords
            )
            for ps, pe in protected.spans:
                if ps <= idx < pe:
                    raise HTTPException(
                        status_code=422,
                        detail={
                            "error": "protected-phrase",
                            "message": (
                                f"word {desc.words[idx].text!r} is inside the protected "
                                f"phrase {' '.join(w.text for w in desc.words[ps:pe])!r}"
                            ),
                            "span": [ps, pe],
                        },
                    )

            kept = set(_current_kept(stored, desc, did))
            if idx in kept:
                kept.discard(idx)
            else:
                kept.add(idx)
            if not any(not desc.words[i].is_punct for i in kept):
                raise HTTPException(
                    status_code=422, detail="cannot drop every spoken word of a description"
                )
            response = _manual_candidate_response(
                store, pid, stored, project, desc, sorted(kept), config, setup
            )
            stored["state"]["selection"][did] = sorted(kept)
            stored["revision"] += 1
            store.save(pid, stored)
            response["revision"] = stored["revision"]
            return response

    @app.post("/projects/{pid}/descriptions/{did}/select-candidate")
    def select_candidate(pid: str, did: str, body: SelectCandidateBody):
        with store.lock(pid):
            stored = get_stored(pid)
            check_revision(stored, body.base_revision)
            project = project_of(stored)
            try:
                desc = project.description(did)
            except KeyError:
                raise HTTPException(status_code=404, detail=f"unknown description {did!r}")
            config = config_of(stored)
            setup = build_scoring(project)
            scored, _ = scored_candidates_for(desc, project, config, setup)
            if not (0 <= body.index < len(scored)):
                raise HTTPException(
                    status_code=422,
                    detail=f"candidate index {body.index} out of range (0..{len(scored) - 1})",
                )
            chosen = scored[body.index]
            response = _manual_candidate_response(
                store, pid, stored, project, desc,
                list(chosen.candidate.kept_indices), config, setup,
            )
            stored["state"]["selection"][did] = list(chosen.candidate.kept_indices)
            stored["revision"] += 1
            store.save(pid, stored)
            response["revision"] = stored["revision"]
            return response

    @app.get("/projects/{pid}/artifacts/{name}")
    def get_artifact(pid: str, name: str):
        get_stored(pid)
        path = store.artifacts_dir(pid) / name
        if not path.exists() or not path.is_file():
            raise HTTPException(status_code=404, detail=f"unknown artifact {name!r}")
        return FileResponse(path)

    return app


def _try_load_source(store: ProjectStore, pid: str, stored: dict):
    rel = stored["project"].get("source_audio")
    if not rel:
        return None
    path = store.project_dir(pid) / rel
    if not path.exists():
        return None
    return load_wav(path)


def _regenerate_candidates(project, desc, config: OptimizerConfig):
    diagnostics = []
    annotated = all(w.pos is not None and w.dep_head is not None for w in desc.words)
    setup = build_scoring(project)
    if annotated:
        scored, protected = scored_candidates_for(desc, project, config, setup)
        diagnostics.extend(str(d) for d in protected.diagnostics)
    else:
        from .candidates import make_candidate
        from .optimizer.plan import ScoredCandidate
        from .scoring import candidate_cost

        full = make_candidate(desc, range(len(desc.words)))
        scored = [
            ScoredCandidate(
                candidate=full,
                breakdown=candidate_cost(
                    full,
                    config,
                    setup.lm_by_description[desc.id],
                    setup.freq,
                    project,
                    glossary=setup.glossary,
                    description=desc,
                    occurrence_counts=setup.occurrence_counts,
                ),
            )
        ]
    return [_candidate_json(sc) for sc in scored], diagnostics


def _current_kept(stored: dict, desc, did: str) -> list:
    selection = stored["state"]["selection"].get(did)
    if selection is not None:
        return list(selection)
    plan = stored["state"]["plan"]
    if plan:
        for p in plan["placed"]:
            if p["id"] == did:
                return list(p["candidate"]["kept_indices"])
    return list(range(len(desc.words)))


def _manual_candidate_response(store, pid, stored, project, desc, kept, config, setup):
    """Score a manually chosen keep-set and re-render just its gap."""
    from .candidates import make_candidate
    from .scoring import candidate_cost

    candidate = make_candidate(desc, kept)
    breakdown = candidate_cost(
        candidate,
        config,
        setup.lm_by_description[desc.id],
        setup.freq,
        project,
        glossary=setup.glossary,
        description=desc,
        occurrence_counts=setup.occurrence_counts,
    )
    response = {
        "candidate": {
            "kept_indices": list(candidate.kept_indices),
            "text": candidate.text,
            "duration": candidate.duration,
            "cut_count": candidate.cut_count,
            "drops_last_word": candidate.drops_last_word,
        },
        "cost": _breakdown_json(breakdown),
        "fits": None,
        "snippet_url": None,
    }

    plan = stored["state"]["plan"]
    placement = None
    if plan:
        placement = next((p for p in plan["placed"] if p["id"] == desc.id), None)
    source = _try_load_source(store, pid, stored)
    if placement is None or source is None:
        return response

    from .model import compute_gaps

    gaps = compute_gaps(project.labels, project.transcript)
    gap = next(
        (g for g in gaps if g.start <= placement["start"] < g.end), None
    )
    if gap is None:
        return response
    slot_end = gap.end + placement.get("extension", 0.0)
    fits = placement["start"] + candidate.duration <= slot_end + 1e-9
    response["fits"] = bool(fits)
    if not fits:
        return response

    rate = source.sample_rate
    g0 = int(round(gap.start * rate))
    g1 = int(round(gap.end * rate))
    region = source.samples[g0:g1]
    ext_frames = int(round(placement.get("extension", 0.0) * rate))
    if ext_frames > 0:
        from .audio import AudioClip as Clip
        from .audio.extend import extend_ambient, extend_music
        from .model import MUSIC

        clip = Clip(region, rate)
        target_s = (len(region) + ext_frames) / rate
        seed = stored["state"].get("seed") or 0
        if gap.label == MUSIC:
            region = extend_music(clip, target_s, seed=seed).samples
        else:
            region = extend_ambient(clip, target_s, seed=seed).samples
    nar = narration_clip(desc, kept, rate, store.project_dir(pid))
    offset = int(round((placement["start"] - gap.start) * rate))
    stats = {"limiter_engaged": []}
    gain = 10.0 ** (config.duck_db / 20.0)
    try:
        region = _mix_narration(region, nar, offset, rate, gain, desc.id, stats)
    except RenderError:
        response["fits"] = False
        return response
    snippet_name = f"snippet-{desc.id}.wav"
    save_wav(store.artifacts_dir(pid) / snippet_name, AudioClip(region, rate))
    response["snippet_url"] = f"/projects/{pid}/artifacts/{snippet_name}"
    return response

from .clips import AudioClip, click_track, concat, load_wav, resample, save_wav, silence, tone, white_noise
from .extend import extend_ambient, extend_music, find_loop_points
from .labels import label_segments_by_energy
from .render import RenderError, build_manifest, execute_manifest, narration_clip, render
from .tempo import estimate_tempo, onset_envelope
from .words import cut_duration_frames, cut_words, kept_runs

__all__ = [
    "AudioClip",
    "build_manifest",
    "click_track",
    "concat",
    "cut_duration_frames",
    "cut_words",
    "estimate_tempo",
    "execute_manifest",
    "extend_ambient",
    "extend_music",
    "find_loop_points",
    "kept_runs",
    "label_segments_by_energy",
    "load_wav",
    "narration_clip",
    "onset_envelope",
    "render",
    "RenderError",
    "resample",
    "save_wav",
    "silence",
    "tone",
    "white_noise",
]

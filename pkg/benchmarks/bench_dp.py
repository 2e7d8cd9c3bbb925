"""Placement-sweep benchmark: compiled kernel vs numpy fallback.

Builds the 10-minute synthetic instance from the performance criterion
(6000 grid slots, 20 descriptions, 50 candidates each) and times the
backward value sweep under both backends, plus the full optimize call.

    python benchmarks/bench_dp.py
"""
import time

import numpy as np

import adfit.optimizer.dp as dp_module
from adfit._kernels import BACKEND, backward_sweep, backward_sweep_py
from adfit.model import AudioLabelSegment, Project
from adfit.optimizer import OptimizerConfig, optimize
from adfit.optimizer.decisions import build_stages
from adfit.optimizer.dp import ordered_descriptions
from adfit.optimizer.geometry import PlacementContext, classify_extendable
from adfit.model import compute_gaps


def build_instance(seed=5, duration=600.0, n_desc=20, n_cands=50):
    import sys
    from pathlib import Path

    sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))
    from test_optimizer import mk_description, mk_scored

    rng = np.random.default_rng(seed)
    labels = []
    cursor = 0.0
    speech_turn = True
    while cursor < duration - 1:
        seg = float(rng.uniform(4.0, 14.0))
        end = min(cursor + seg, duration)
        labels.append(
            AudioLabelSegment(cursor, end, "speech" if speech_turn else
                              str(rng.choice(["music", "silence", "ambient"])))
        )
        cursor = end
        speech_turn = not speech_turn
    labels[-1] = AudioLabelSegment(labels[-1].start, duration, labels[-1].label)

    descriptions = []
    scored = {}
    for i, anchor in enumerate(sorted(rng.uniform(5, duration - 5) for _ in range(n_desc))):
        did = f"d{i:02d}"
        descriptions.append(mk_description(did, float(anchor)))
        scored[did] = [
            mk_scored(did, float(rng.uniform(0.5, 6.0)), float(rng.uniform(0, 200)))
            for _ in range(n_cands)
        ]
    project = Project(
        source_duration=duration,
        labels=tuple(labels),
        descriptions=tuple(descriptions),
    )
    return project, scored


def time_sweeps(stages, n_states, sweep, repeats=5):
    g = np.zeros(n_states, dtype=np.int64)
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        level = g
        for st in reversed(stages):
            level = sweep(
                level, st.t_ms, st.end_state, st.base_units, st.grid_idx,
                st.offgrid_idx, st.skip_units, st.skip_allowed, st.near_units,
                st.grid_ms, st.margin_ms,
            )
        best = min(best, time.perf_counter() - t0)
    return best, level


def bench_grid(project, scored, grid_s: float):
    config = OptimizerConfig().with_overrides({"time_grid": grid_s})
    gaps = [
        classify_extendable(g, cap_factor=config.extension_cap_factor)
        for g in compute_gaps(project.labels, project.transcript)
    ]
    ctx = PlacementContext(project.source_duration, gaps, project.labels, config)
    stages = build_stages(
        ordered_descriptions(project), scored, ctx, [], config, config.mode
    )
    n_dec = sum(len(st) for st in stages)
    print(f"\ngrid {grid_s}s: {ctx.n_slots} slots, {len(stages)} descriptions, "
          f"{n_dec} decisions")

    t_py, level_py = time_sweeps(stages, ctx.n_states, backward_sweep_py)
    print(f"  numpy fallback sweep : {t_py * 1e3:8.1f} ms")
    if BACKEND == "compiled":
        t_cy, level_cy = time_sweeps(stages, ctx.n_states, backward_sweep)
        assert np.array_equal(level_py, level_cy), "backends disagree"
        print(f"  compiled sweep       : {t_cy * 1e3:8.1f} ms   ({t_py / t_cy:.1f}x)")
    else:
        print("  compiled kernel not built; install with `pip install -e .` to compare")

    for name, sweep in (("numpy", backward_sweep_py), ("active", backward_sweep)):
        dp_module.backward_sweep = sweep
        t0 = time.perf_counter()
        plan = optimize(project, scored, config)
        t1 = time.perf_counter() - t0
        print(f"  full optimize ({name:6s}): {t1 * 1e3:8.1f} ms, "
              f"E={plan.total_cost:.3f}, placed {len(plan.placed)}/{len(stages)}")
    dp_module.backward_sweep = backward_sweep


def main():
    project, scored = build_instance()
    print(f"active backend: {BACKEND}")
    bench_grid(project, scored, 0.1)   # the acceptance-criterion instance
    bench_grid(project, scored, 0.02)  # finer grid: the sweep dominates


if __name__ == "__main__":
    main()

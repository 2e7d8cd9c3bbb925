"""Pure numpy implementation of the backward placement sweep.

Selected automatically when the compiled extension is unavailable; must
produce bit-identical int64 results to the Cython kernel.
"""
import numpy as np

INF_UNITS = 1 << 60


def backward_sweep(
    g_next,
    t_ms,
    end_state,
    base_units,
    grid_idx,
    offgrid_idx,
    skip_units,
    skip_allowed,
    near_units,
    grid_ms,
    margin_ms,
):
    """One stage of the backward value recursion.

    g_next[e] is the best completion cost after this description given
    state e (e = 0: nothing placed; e >= 1: previous placement ends at
    grid boundary e - 1). Returns g_prev of the same shape.
    """
    m2 = len(g_next)
    g_next = np.minimum(g_next, INF_UNITS)
    if skip_allowed:
        g_prev = np.minimum(skip_units + g_next, INF_UNITS)
    else:
        g_prev = np.full(m2, INF_UNITS, dtype=np.int64)

    if len(grid_idx):
        t = t_ms[grid_idx]
        h = np.minimum(base_units[grid_idx] + g_next[end_state[grid_idx]], INF_UNITS)
        # bucket decisions by start slot, then suffix-minimize
        bucket = np.full(m2 + 1, INF_UNITS, dtype=np.int64)
        np.minimum.at(bucket, t // grid_ms, h)
        sfx = np.minimum.accumulate(bucket[::-1])[::-1]

        g_prev[0] = min(g_prev[0], sfx[0])
        e = np.arange(1, m2, dtype=np.int64)
        e_ms = (e - 1) * grid_ms
        idx_far = np.minimum((e_ms + margin_ms + grid_ms - 1) // grid_ms, m2)
        far = sfx[idx_far]
        near = np.minimum(sfx[e - 1] + near_units, INF_UNITS)
        g_prev[1:] = np.minimum(g_prev[1:], np.minimum(far, near))

    for j in offgrid_idx:
        h = min(int(base_units[j]) + int(min(g_next[end_state[j]], INF_UNITS)), INF_UNITS)
        if h >= INF_UNITS:
            continue
        t = int(t_ms[j])
        e = np.arange(m2, dtype=np.int64)
        e_ms = (e - 1) * grid_ms
        feas = (e == 0) | (t >= e_ms)
        is_near = (e >= 1) & (t - e_ms < margin_ms)
        vals = np.where(feas, h + is_near * near_units, INF_UNITS)
        g_prev = np.minimum(g_prev, vals)

    return np.minimum(g_prev, INF_UNITS)

# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled backward placement sweep; see sweep_py for the reference
semantics. Must return bit-identical results to the fallback."""
import numpy as np

cimport numpy as cnp

cdef long long INF_UNITS = <long long>1 << 60


def backward_sweep(
    g_next_in,
    t_ms_in,
    end_state_in,
    base_units_in,
    grid_idx_in,
    offgrid_idx_in,
    long long skip_units,
    bint skip_allowed,
    long long near_units,
    long long grid_ms,
    long long margin_ms,
):
    cdef cnp.int64_t[:] g_next = np.ascontiguousarray(g_next_in, dtype=np.int64)
    cdef cnp.int64_t[:] t_ms = np.ascontiguousarray(t_ms_in, dtype=np.int64)
    cdef cnp.int64_t[:] end_state = np.ascontiguousarray(end_state_in, dtype=np.int64)
    cdef cnp.int64_t[:] base_units = np.ascontiguousarray(base_units_in, dtype=np.int64)
    cdef cnp.int64_t[:] grid_idx = np.ascontiguousarray(grid_idx_in, dtype=np.int64)
    cdef cnp.int64_t[:] offgrid_idx = np.ascontiguousarray(offgrid_idx_in, dtype=np.int64)

    cdef Py_ssize_t m2 = g_next.shape[0]
    out_arr = np.empty(m2, dtype=np.int64)
    cdef cnp.int64_t[:] g_prev = out_arr
    bucket_arr = np.full(m2 + 1, INF_UNITS, dtype=np.int64)
    cdef cnp.int64_t[:] sfx = bucket_arr

    cdef Py_ssize_t i, j, e
    cdef long long h, gn, t, v, e_ms, idx, far, near

    for e in range(m2):
        gn = g_next[e]
        if gn > INF_UNITS:
            gn = INF_UNITS
        if skip_allowed:
            v = skip_units + gn
            if v > INF_UNITS:
                v = INF_UNITS
            g_prev[e] = v
        else:
            g_prev[e] = INF_UNITS

    if grid_idx.shape[0] > 0:
        for i in range(grid_idx.shape[0]):
            j = grid_idx[i]
            gn = g_next[end_state[j]]
            if gn > INF_UNITS:
                gn = INF_UNITS
            h = base_units[j] + gn
            if h > INF_UNITS:
                h = INF_UNITS
            idx = t_ms[j] // grid_ms
            if h < sfx[idx]:
                sfx[idx] = h
        for e in range(m2 - 1, -1, -1):
            if sfx[e + 1] < sfx[e]:
                sfx[e] = sfx[e + 1]

        if sfx[0] < g_prev[0]:
            g_prev[0] = sfx[0]
        for e in range(1, m2):
            e_ms = (e - 1) * grid_ms
            idx = (e_ms + margin_ms + grid_ms - 1) // grid_ms
            if idx > m2:
                idx = m2
            far = sfx[idx]
            near = sfx[e - 1] + near_units
            if near > INF_UNITS:
                near = INF_UNITS
            v = far if far < near else near
            if v < g_prev[e]:
                g_prev[e] = v

    for i in range(offgrid_idx.shape[0]):
        j = offgrid_idx[i]
        gn = g_next[end_state[j]]
        if gn > INF_UNITS:
            gn = INF_UNITS
        h = base_units[j] + gn
        if h > INF_UNITS:
            h = INF_UNITS
        if h >= INF_UNITS:
            continue
        t = t_ms[j]
        for e in range(m2):
            e_ms = (e - 1) * grid_ms
            if e != 0 and t < e_ms:
                continue
            v = h
            if e >= 1 and t - e_ms < margin_ms:
                v = h + near_units
                if v > INF_UNITS:
                    v = INF_UNITS
            if v < g_prev[e]:
                g_prev[e] = v

    return out_arr

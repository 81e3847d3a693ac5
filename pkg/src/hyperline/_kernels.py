"""Compiled inner loops for the overlap algorithms.

All kernels are ``nogil`` so the thread pool in :mod:`hyperline.overlap` gets
real parallelism. They only read the CSR arrays; every mutable buffer is
owned by the calling worker.
"""

import numpy as np
from numba import njit

_JIT = dict(nogil=True, cache=True)


@njit(**_JIT)
def merge_intersect(a, b, stop_at):
    """Count common elements of two ascending arrays.

    Stops as soon as ``stop_at`` common elements are found when
    ``stop_at > 0``. Returns ``(count, steps)`` where ``steps`` is the number
    of merge iterations performed.
    """
    i = 0
    j = 0
    count = 0
    steps = 0
    na = a.shape[0]
    nb = b.shape[0]
    while i < na and j < nb:
        steps += 1
        x = a[i]
        y = b[j]
        if x == y:
            count += 1
            if count == stop_at:
                break
            i += 1
            j += 1
        elif x < y:
            i += 1
        else:
            j += 1
    return count, steps


@njit(**_JIT)
def _grow(buf, size):
    out = np.empty(max(2 * buf.shape[0], size), dtype=buf.dtype)
    out[: buf.shape[0]] = buf
    return out


@njit(**_JIT)
def naive_kernel(e_ptr, e_idx, s):
    """Every unordered pair (i < j), full intersection count."""
    m = e_ptr.shape[0] - 1
    cap = 64
    pi = np.empty(cap, dtype=np.int64)
    pj = np.empty(cap, dtype=np.int64)
    pw = np.empty(cap, dtype=np.int64)
    k = 0
    examined = 0
    steps_total = 0
    for i in range(m):
        a = e_idx[e_ptr[i] : e_ptr[i + 1]]
        for j in range(i + 1, m):
            b = e_idx[e_ptr[j] : e_ptr[j + 1]]
            examined += 1
            c, st = merge_intersect(a, b, 0)
            steps_total += st
            if c >= s:
                if k == pi.shape[0]:
                    pi = _grow(pi, k + 1)
                    pj = _grow(pj, k + 1)
                    pw = _grow(pw, k + 1)
                pi[k] = i
                pj[k] = j
                pw[k] = c
                k += 1
    return pi[:k], pj[:k], pw[:k], examined, steps_total


@njit(**_JIT)
def wedge_kernel(e_ptr, e_idx, v_ptr, v_idx, ids, s, prune, skip_visited, short_circuit, stamp):
    """Wedge enumeration e_i -> v_k -> e_j over the outer IDs in ``ids``.

    The strictly-upper-triangular rule (skip e_j <= e_i) is always applied.
    ``stamp`` is the worker's visited array; an outer edge ``i`` marks its
    neighbours with generation ``i + 1`` so no per-iteration clearing is
    needed (stamps from other outer edges never equal ``i + 1``).

    Returns pairs, their intersection counts (exact unless short-circuited),
    and the counters ``(visits, candidates, intersections, steps)``.
    """
    cap = 64
    pi = np.empty(cap, dtype=np.int64)
    pj = np.empty(cap, dtype=np.int64)
    pw = np.empty(cap, dtype=np.int64)
    k = 0
    visits = 0
    candidates = 0
    intersections = 0
    steps_total = 0
    stop_at = s if short_circuit else 0
    for t in range(ids.shape[0]):
        i = ids[t]
        lo = e_ptr[i]
        hi = e_ptr[i + 1]
        if prune and hi - lo < s:
            continue
        a = e_idx[lo:hi]
        gen = i + 1
        for p in range(lo, hi):
            v = e_idx[p]
            for q in range(v_ptr[v], v_ptr[v + 1]):
                j = v_idx[q]
                visits += 1
                if i >= j:
                    continue
                candidates += 1
                if prune and e_ptr[j + 1] - e_ptr[j] < s:
                    continue
                if skip_visited:
                    if stamp[j] == gen:
                        continue
                    stamp[j] = gen
                intersections += 1
                c, st = merge_intersect(a, e_idx[e_ptr[j] : e_ptr[j + 1]], stop_at)
                steps_total += st
                if c >= s:
                    if k == pi.shape[0]:
                        pi = _grow(pi, k + 1)
                        pj = _grow(pj, k + 1)
                        pw = _grow(pw, k + 1)
                    pi[k] = i
                    pj[k] = j
                    pw[k] = c
                    k += 1
    return pi[:k], pj[:k], pw[:k], visits, candidates, intersections, steps_total


@njit(**_JIT)
def spgemm_kernel(e_ptr, e_idx, v_ptr, v_idx):
    """Row-by-row (Gustavson) product of the incidence matrix with its transpose.

    Materializes every row of E x E including both triangles and the
    diagonal. Returns CSR ``(ptr, cols, vals)`` with ascending columns per
    row, plus the number of accumulations performed.
    """
    m = e_ptr.shape[0] - 1
    acc = np.zeros(m, dtype=np.int64)
    touched = np.empty(m, dtype=np.int64)
    ptr = np.zeros(m + 1, dtype=np.int64)
    cap = 64
    cols = np.empty(cap, dtype=np.int64)
    vals = np.empty(cap, dtype=np.int64)
    nnz = 0
    accumulations = 0
    for i in range(m):
        nt = 0
        for p in range(e_ptr[i], e_ptr[i + 1]):
            v = e_idx[p]
            for q in range(v_ptr[v], v_ptr[v + 1]):
                j = v_idx[q]
                accumulations += 1
                if acc[j] == 0:
                    touched[nt] = j
                    nt += 1
                acc[j] += 1
        row = np.sort(touched[:nt])
        if nnz + nt > cols.shape[0]:
            cols = _grow(cols, nnz + nt)
            vals = _grow(vals, nnz + nt)
        for r in range(nt):
            j = row[r]
            cols[nnz] = j
            vals[nnz] = acc[j]
            acc[j] = 0
            nnz += 1
        ptr[i + 1] = nnz
    return ptr, cols[:nnz], vals[:nnz], accumulations

# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled cell scan. Mirrors ``_pykernels.scan_cells`` exactly."""

from libc.stdint cimport int64_t, uint8_t


cdef inline int _key_cmp(const int64_t[:, ::1] keys, Py_ssize_t idx,
                         int64_t i, int64_t j, int64_t k) noexcept nogil:
    if keys[idx, 0] != i:
        return -1 if keys[idx, 0] < i else 1
    if keys[idx, 1] != j:
        return -1 if keys[idx, 1] < j else 1
    if keys[idx, 2] != k:
        return -1 if keys[idx, 2] < k else 1
    return 0


cdef inline Py_ssize_t _lower_bound(const int64_t[:, ::1] keys, Py_ssize_t lo, Py_ssize_t hi,
                                    int64_t i, int64_t j, int64_t k) noexcept nogil:
    cdef Py_ssize_t mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if _key_cmp(keys, mid, i, j, k) < 0:
            lo = mid + 1
        else:
            hi = mid
    return lo


cdef inline Py_ssize_t _upper_bound(const int64_t[:, ::1] keys, Py_ssize_t lo, Py_ssize_t hi,
                                    int64_t i, int64_t j, int64_t k) noexcept nogil:
    cdef Py_ssize_t mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if _key_cmp(keys, mid, i, j, k) <= 0:
            lo = mid + 1
        else:
            hi = mid
    return lo


cdef inline bint _within(double d2, double thr2, bint strict) noexcept nogil:
    if strict:
        return d2 < thr2
    return d2 <= thr2


def scan_cells(const double[:, ::1] xyz, const int64_t[:, ::1] cell_keys,
               const int64_t[::1] starts, Py_ssize_t c_lo, Py_ssize_t c_hi,
               int radius, double thr2, bint strict, bint paper_mode,
               uint8_t[::1] flags):
    """Scan cells ``[c_lo, c_hi)`` and set ``flags`` for points at risk.

    Returns ``(points_examined, cells_probed)``.
    """
    cdef Py_ssize_t m = cell_keys.shape[0]
    cdef Py_ssize_t c, a, b, p, q, lo, hi, col, ncols
    cdef int di, dj
    cdef int64_t ci, cj, ck
    cdef int64_t span = 2 * radius + 1
    cdef int64_t hood = span * span * span - (1 if paper_mode else 0)
    cdef int64_t examined = 0, probed = 0
    cdef double px, py, pz, dx, dy, dz, d2
    cdef bint hit
    # point ranges of the (2r+1)^2 columns around the current cell
    cdef Py_ssize_t[:, ::1] cols
    import numpy as np
    cols = np.empty((span * span, 2), dtype=np.intp)

    with nogil:
        for c in range(c_lo, c_hi):
            a = starts[c]
            b = starts[c + 1]
            if paper_mode and b - a >= 2:
                for p in range(a, b):
                    flags[p] = 1
                continue

            ci = cell_keys[c, 0]
            cj = cell_keys[c, 1]
            ck = cell_keys[c, 2]
            ncols = 0
            for di in range(-radius, radius + 1):
                for dj in range(-radius, radius + 1):
                    lo = _lower_bound(cell_keys, 0, m, ci + di, cj + dj, ck - radius)
                    hi = _upper_bound(cell_keys, lo, m, ci + di, cj + dj, ck + radius)
                    if lo < hi:
                        cols[ncols, 0] = starts[lo]
                        cols[ncols, 1] = starts[hi]
                        ncols += 1

            if paper_mode:
                px = xyz[a, 0]
                py = xyz[a, 1]
                pz = xyz[a, 2]
                probed += hood
                for col in range(ncols):
                    for q in range(cols[col, 0], cols[col, 1]):
                        if q == a:
                            continue
                        dx = px - xyz[q, 0]
                        dy = py - xyz[q, 1]
                        dz = pz - xyz[q, 2]
                        d2 = dx * dx + dy * dy + dz * dz
                        examined += 1
                        if _within(d2, thr2, strict):
                            flags[a] = 1
                            flags[q] = 1
                continue

            for p in range(a, b):
                px = xyz[p, 0]
                py = xyz[p, 1]
                pz = xyz[p, 2]
                probed += hood
                hit = False
                for col in range(ncols):
                    for q in range(cols[col, 0], cols[col, 1]):
                        if q == p:
                            continue
                        dx = px - xyz[q, 0]
                        dy = py - xyz[q, 1]
                        dz = pz - xyz[q, 2]
                        d2 = dx * dx + dy * dy + dz * dz
                        examined += 1
                        if _within(d2, thr2, strict):
                            hit = True
                            break
                    if hit:
                        break
                if hit:
                    flags[p] = 1
    return examined, probed

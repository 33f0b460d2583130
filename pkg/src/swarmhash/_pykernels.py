"""Pure-Python cell scan, used when the compiled extension is unavailable.

Must stay behaviourally identical to ``_ckernels.pyx``: same scan order,
same counters, same flags.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right


def _columns(keys, starts, c, radius):
    """Point-index ranges of the (2r+1)^2 key columns around cell ``c``.

    Cells are sorted lexicographically by key, so all cells sharing (i, j)
    with k in [k - r, k + r] form one contiguous run, and so do their points.
    """
    ci, cj, ck = keys[c]
    out = []
    for di in range(-radius, radius + 1):
        for dj in range(-radius, radius + 1):
            lo = bisect_left(keys, (ci + di, cj + dj, ck - radius))
            hi = bisect_right(keys, (ci + di, cj + dj, ck + radius), lo)
            if lo < hi:
                out.append((starts[lo], starts[hi]))
    return out


def scan_cells(xyz, cell_keys, starts, c_lo, c_hi, radius, thr2, strict, paper_mode, flags):
    """Scan cells ``[c_lo, c_hi)`` and set ``flags`` for points at risk.

    Returns ``(points_examined, cells_probed)``.
    """
    pts = xyz.tolist()
    keys = [tuple(k) for k in cell_keys.tolist()]
    st = starts.tolist()
    span = 2 * radius + 1
    hood = span ** 3 - 1 if paper_mode else span ** 3
    examined = 0
    probed = 0

    for c in range(c_lo, c_hi):
        a, b = st[c], st[c + 1]
        if paper_mode:
            if b - a >= 2:
                for p in range(a, b):
                    flags[p] = 1
                continue
            # lone point: compare against every point of the adjacent cubes
            px, py, pz = pts[a]
            probed += hood
            for lo, hi in _columns(keys, st, c, radius):
                for q in range(lo, hi):
                    if q == a:
                        continue
                    qx, qy, qz = pts[q]
                    dx = px - qx
                    dy = py - qy
                    dz = pz - qz
                    d2 = dx * dx + dy * dy + dz * dz
                    examined += 1
                    if (d2 < thr2) if strict else (d2 <= thr2):
                        flags[a] = 1
                        flags[q] = 1
            continue

        cols = _columns(keys, st, c, radius)
        for p in range(a, b):
            px, py, pz = pts[p]
            probed += hood
            hit = False
            for lo, hi in cols:
                for q in range(lo, hi):
                    if q == p:
                        continue
                    qx, qy, qz = pts[q]
                    dx = px - qx
                    dy = py - qy
                    dz = pz - qz
                    d2 = dx * dx + dy * dy + dz * dz
                    examined += 1
                    if (d2 < thr2) if strict else (d2 <= thr2):
                        hit = True
                        break
                if hit:
                    break
            if hit:
                flags[p] = 1
    return examined, probed

"""All-pairs oracle and the KD-tree baseline.

Neither reuses any neighbour logic from :mod:`swarmhash.spatial_hash`; they
share only the distance rule from :mod:`swarmhash.core`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .core import CollisionReport, Point3, QueryConfig, points_to_array


def brute_force_detect(points: Sequence[Point3], cfg: QueryConfig) -> CollisionReport:
    """O(n^2) ground truth: flag p iff some other point is within the threshold."""
    n = len(points)
    if n < 2:
        return CollisionReport((), 0, 0)
    arr = points_to_array(points)
    ids = arr[:, 0].astype(np.int64)
    x, y, z = arr[:, 1].copy(), arr[:, 2].copy(), arr[:, 3].copy()
    thr2 = cfg.threshold_sq
    flags = np.zeros(n, dtype=bool)
    for i in range(n - 1):
        dx = x[i] - x[i + 1:]
        dy = y[i] - y[i + 1:]
        dz = z[i] - z[i + 1:]
        d2 = dx * dx + dy * dy + dz * dz
        close = d2 < thr2 if cfg.strict else d2 <= thr2
        if close.any():
            flags[i] = True
            flags[i + 1:] |= close
    return CollisionReport(tuple(np.sort(ids[flags]).tolist()), n * (n - 1) // 2, 0)


@dataclass
class KdNode:
    point: Point3
    axis: int
    left: Optional["KdNode"] = None
    right: Optional["KdNode"] = None

    @property
    def split(self) -> float:
        return self.point[1 + self.axis]


@dataclass
class KdTree:
    root: Optional[KdNode]
    size: int

    def depth(self) -> int:
        best = 0
        stack = [(self.root, 1)] if self.root else []
        while stack:
            node, d = stack.pop()
            best = max(best, d)
            if node.left:
                stack.append((node.left, d + 1))
            if node.right:
                stack.append((node.right, d + 1))
        return best

    def __iter__(self):
        stack = [self.root] if self.root else []
        while stack:
            node = stack.pop()
            yield node
            if node.left:
                stack.append(node.left)
            if node.right:
                stack.append(node.right)


def kd_build(points: Sequence[Point3]) -> KdTree:
    """Median-split tree, axis cycling x, y, z; ties on the axis broken by id."""
    points = list(points)
    n = len(points)
    if n == 0:
        return KdTree(None, 0)
    arr = points_to_array(points)
    ids = arr[:, 0]

    def build(idx: np.ndarray, depth: int) -> Optional[KdNode]:
        if len(idx) == 0:
            return None
        axis = depth % 3
        idx = idx[np.lexsort((ids[idx], arr[idx, 1 + axis]))]
        mid = len(idx) // 2
        return KdNode(points[idx[mid]], axis,
                      build(idx[:mid], depth + 1), build(idx[mid + 1:], depth + 1))

    return KdTree(build(np.arange(n), 0), n)


def kd_detect(t: KdTree, cfg: QueryConfig) -> CollisionReport:
    """Fixed-radius search per point, pruning subtrees beyond the threshold."""
    if t.root is None:
        return CollisionReport()
    # slack keeps pruning conservative when dx*dx rounds down onto thr^2
    thr = cfg.threshold_x * (1 + 1e-9)
    thr2 = cfg.threshold_sq
    strict = cfg.strict
    flagged = []
    examined = 0
    for node in t:
        p = node.point
        _, px, py, pz = p
        stack = [t.root]
        hit = False
        while stack and not hit:
            cur = stack.pop()
            q = cur.point
            if q.id != p.id:
                dx = px - q.x
                dy = py - q.y
                dz = pz - q.z
                d2 = dx * dx + dy * dy + dz * dz
                examined += 1
                hit = d2 < thr2 if strict else d2 <= thr2
            diff = p[1 + cur.axis] - cur.split
            # left holds coordinates <= split, right holds >= split
            if cur.left is not None and diff <= thr:
                stack.append(cur.left)
            if cur.right is not None and diff >= -thr:
                stack.append(cur.right)
        if hit:
            flagged.append(p.id)
    return CollisionReport(tuple(sorted(flagged)), examined, 0)

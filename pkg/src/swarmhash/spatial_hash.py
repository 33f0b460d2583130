"""Lazy cube grid keyed by integer triples, and collision detection over it."""

from __future__ import annotations

import gc
import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .core import (CellKey, CollisionReport, Point3, QueryConfig, Scheme, points_to_array,
                   within_threshold)


class DuplicateIdError(ValueError):
    def __init__(self, point_id: int):
        super().__init__(f"duplicate point id {point_id}")
        self.point_id = point_id


class ContractError(RuntimeError):
    """An operation was called outside its precondition."""


def cell_key(p: Point3, cell_side: float) -> CellKey:
    """Key of the cube containing ``p``; floors toward -inf on every axis."""
    if not cell_side > 0:
        raise ValueError(f"cell side must be positive, got {cell_side}")
    return CellKey(math.floor(p.x / cell_side),
                   math.floor(p.y / cell_side),
                   math.floor(p.z / cell_side))


def neighbor_keys(k: CellKey, radius: int = 1) -> list[CellKey]:
    """Keys at Chebyshev distance 1..radius from ``k``, lexicographic in offset."""
    if radius < 1:
        raise ValueError(f"radius must be >= 1, got {radius}")
    rng = range(-radius, radius + 1)
    return [CellKey(k.i + di, k.j + dj, k.k + dk)
            for di, dj, dk in itertools.product(rng, rng, rng)
            if (di, dj, dk) != (0, 0, 0)]


@dataclass(frozen=True)
class PackedCells:
    """Cell-sorted columnar copy of a hash, consumed by the scan kernel.

    Cells are ordered lexicographically by key and points within a cell by
    id; points of cell ``c`` occupy rows ``starts[c]:starts[c + 1]``.
    """

    xyz: np.ndarray         # (n, 3) float64
    ids: np.ndarray         # (n,) int64
    cell_keys: np.ndarray   # (m, 3) int64
    starts: np.ndarray      # (m + 1,) int64

    @property
    def n_cells(self) -> int:
        return len(self.cell_keys)


def _pack(points: Sequence[Point3], cell_side: float) -> tuple[PackedCells, list[int]]:
    n = len(points)
    if n == 0:
        empty = PackedCells(np.empty((0, 3)), np.empty(0, np.int64),
                            np.empty((0, 3), np.int64), np.zeros(1, np.int64))
        return empty, []
    raw = points_to_array(points)
    ids = raw[:, 0].astype(np.int64)
    xyz = np.ascontiguousarray(raw[:, 1:])
    keys = np.floor(xyz / cell_side).astype(np.int64)
    order = np.lexsort((ids, keys[:, 2], keys[:, 1], keys[:, 0]))
    keys = keys[order]
    change = np.empty(n, dtype=bool)
    change[0] = True
    np.any(keys[1:] != keys[:-1], axis=1, out=change[1:])
    first = np.flatnonzero(change)
    starts = np.append(first, n).astype(np.int64)
    packed = PackedCells(np.ascontiguousarray(xyz[order]), ids[order],
                         np.ascontiguousarray(keys[first]), starts)
    return packed, order.tolist()


class SpatialHash:
    """Map from cell key to the points inside that cube.

    Cubes are created on first insertion only, so the number of cells never
    exceeds the number of points.
    """

    def __init__(self, cell_side: float):
        if not (math.isfinite(cell_side) and cell_side > 0):
            raise ValueError(f"cell side must be positive, got {cell_side}")
        self.cell_side = float(cell_side)
        self.cells: dict[CellKey, list[Point3]] = {}
        self.point_count = 0
        self._ids: set[int] | None = set()
        self._packed: PackedCells | None = None

    def __len__(self) -> int:
        return self.point_count

    def __repr__(self) -> str:
        return (f"SpatialHash(cell_side={self.cell_side:g}, "
                f"cells={len(self.cells)}, points={self.point_count})")

    def insert(self, p: Point3) -> "SpatialHash":
        if self._ids is None:
            self._ids = {q.id for q in self.points()}
        if p.id in self._ids:
            raise DuplicateIdError(p.id)
        self._ids.add(p.id)
        self.cells.setdefault(cell_key(p, self.cell_side), []).append(p)
        self.point_count += 1
        self._packed = None
        return self

    def points(self) -> Iterable[Point3]:
        for bucket in self.cells.values():
            yield from bucket

    def occupancy_histogram(self) -> dict[int, int]:
        hist: dict[int, int] = {}
        for bucket in self.cells.values():
            hist[len(bucket)] = hist.get(len(bucket), 0) + 1
        return hist

    def single_occupancy_fraction(self) -> float:
        if not self.cells:
            return 0.0
        return sum(1 for b in self.cells.values() if len(b) == 1) / len(self.cells)

    def packed(self) -> PackedCells:
        if self._packed is None:
            self._packed, _ = _pack(list(self.points()), self.cell_side)
        return self._packed


@contextmanager
def _gc_paused():
    # millions of small allocations otherwise trigger repeated full collections
    was_enabled = gc.isenabled()
    gc.disable()
    try:
        yield
    finally:
        if was_enabled:
            gc.enable()


def build_index(points: Sequence[Point3], cfg: QueryConfig) -> SpatialHash:
    """Hash every point into its cube; cell size follows ``cfg.scheme``."""
    h = SpatialHash(cfg.cell_side)
    points = list(points)
    with _gc_paused():
        packed, order = _pack(points, h.cell_side)
        sorted_ids = np.sort(packed.ids)
        dup = np.flatnonzero(sorted_ids[1:] == sorted_ids[:-1])
        if len(dup):
            raise DuplicateIdError(int(sorted_ids[dup[0]]))
        ordered = [points[i] for i in order]
        starts = packed.starts.tolist()
        buckets = map(ordered.__getitem__, map(slice, starts[:-1], starts[1:]))
        h.cells = dict(zip(map(CellKey._make, packed.cell_keys.tolist()), buckets))
    h.point_count = len(points)
    h._ids = None  # materialized on first insert
    h._packed = packed
    return h


def merge_results(acc: CollisionReport, part: CollisionReport) -> CollisionReport:
    """Union of flagged ids with counters summed."""
    if not part.flagged_ids:
        ids = acc.flagged_ids
    elif not acc.flagged_ids:
        ids = part.flagged_ids
    else:
        ids = tuple(sorted(set(acc.flagged_ids).union(part.flagged_ids)))
    return CollisionReport(ids, acc.points_examined + part.points_examined,
                           acc.cells_probed + part.cells_probed)


def find_for_single_point(h: SpatialHash, p: Point3, cfg: QueryConfig) -> CollisionReport:
    """Probe the cubes around a point that sits alone in its own cube.

    The result holds ``p`` together with every neighbour within the
    threshold, or nothing when no neighbour is close enough.
    """
    bucket = h.cells.get(cell_key(p, h.cell_side))
    if not bucket or all(q.id != p.id for q in bucket):
        raise ContractError(f"point {p.id} is not stored in this hash")
    if len(bucket) != 1:
        raise ContractError(f"point {p.id} shares its cell with {len(bucket) - 1} other point(s)")
    hits = []
    examined = 0
    probes = neighbor_keys(cell_key(p, h.cell_side), cfg.probe_radius)
    for key in probes:
        for q in h.cells.get(key, ()):
            examined += 1
            if within_threshold(p, q, cfg):
                hits.append(q.id)
    ids = (p.id, *hits) if hits else ()
    return CollisionReport(ids, examined, len(probes))


def _partitions(n_cells: int, workers: int) -> list[tuple[int, int]]:
    workers = max(1, min(workers, n_cells))
    bounds = np.linspace(0, n_cells, workers + 1).astype(int).tolist()
    return [(lo, hi) for lo, hi in zip(bounds, bounds[1:]) if lo < hi]


def _scan(packed: PackedCells, cfg: QueryConfig, lo: int, hi: int, scan) -> CollisionReport:
    flags = np.zeros(len(packed.ids), dtype=np.uint8)
    examined, probed = scan(packed.xyz, packed.cell_keys, packed.starts, lo, hi,
                            cfg.probe_radius, cfg.threshold_sq, cfg.strict,
                            cfg.scheme is Scheme.DIAGONAL_PAPER, flags)
    ids = np.sort(packed.ids[flags.view(bool)])
    return CollisionReport(tuple(ids.tolist()), int(examined), int(probed))


def detect(h: SpatialHash, cfg: QueryConfig, workers: int = 1,
           backend: str | None = None) -> CollisionReport:
    """Report every stored point that has another point within the threshold.

    In the diagonal scheme, cubes holding two or more points are flagged
    whole and only lone points are probed, which misses pairs that span
    more than ``probe_radius`` cubes. The side scheme checks every point
    against its own and adjacent cubes and is exact.

    With ``workers > 1`` cells are split into contiguous ranges scanned
    concurrently and the partial reports are folded with
    :func:`merge_results`; the flagged ids do not depend on the split.
    """
    if not math.isclose(h.cell_side, cfg.cell_side, rel_tol=1e-12):
        raise ContractError(f"hash cell side {h.cell_side} does not match "
                            f"{cfg.scheme.value} side {cfg.cell_side}")
    packed = h.packed()
    if packed.n_cells == 0:
        return CollisionReport()
    scan = _kernels.get_scan(backend)
    parts = _partitions(packed.n_cells, workers)
    if len(parts) == 1:
        return _scan(packed, cfg, 0, packed.n_cells, scan)
    with ThreadPoolExecutor(max_workers=len(parts)) as pool:
        partials = list(pool.map(lambda r: _scan(packed, cfg, r[0], r[1], scan), parts))
    report = CollisionReport()
    for part in partials:
        report = merge_results(report, part)
    return report

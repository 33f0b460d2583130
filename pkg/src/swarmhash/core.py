"""Domain types and point geometry shared by every detector."""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from typing import NamedTuple


class _Point3Fields(NamedTuple):
    id: int
    x: float
    y: float
    z: float


class Point3(_Point3Fields):
    """An identified position in meters.

    Construction validates that the id is a non-negative integer and that
    all coordinates are finite. Bulk loaders that have already validated
    their input in vectorized form may use :meth:`trusted`.
    """

    __slots__ = ()

    def __new__(cls, id: int, x: float, y: float, z: float) -> "Point3":
        if isinstance(id, bool) or not isinstance(id, int) or id < 0:
            raise ValueError(f"point id must be a non-negative integer, got {id!r}")
        x, y, z = float(x), float(y), float(z)
        if not (math.isfinite(x) and math.isfinite(y) and math.isfinite(z)):
            raise ValueError(f"point {id} has non-finite coordinates ({x}, {y}, {z})")
        return tuple.__new__(cls, (id, x, y, z))

    @classmethod
    def trusted(cls, id: int, x: float, y: float, z: float) -> "Point3":
        return tuple.__new__(cls, (id, x, y, z))


class CellKey(NamedTuple):
    """Integer cell indices along x, y and z."""

    i: int
    j: int
    k: int

    def __str__(self) -> str:
        return f"{self.i}:{self.j}:{self.k}"


class Scheme(enum.Enum):
    DIAGONAL_PAPER = "diagonal-paper"
    SIDE_EXACT = "side-exact"

    @classmethod
    def parse(cls, value: "Scheme | str") -> "Scheme":
        if isinstance(value, cls):
            return value
        text = str(value).strip().lower().replace("_", "-")
        for member in cls:
            if text in (member.value, member.name.lower().replace("_", "-")):
                return member
        raise ValueError(f"unknown scheme {value!r}; expected one of "
                         f"{', '.join(m.value for m in cls)}")


@dataclass(frozen=True)
class QueryConfig:
    threshold_x: float = 100.0
    scheme: Scheme = Scheme.DIAGONAL_PAPER
    probe_radius: int = 1
    strict: bool = True

    def __post_init__(self):
        if not (math.isfinite(self.threshold_x) and self.threshold_x > 0):
            raise ValueError(f"threshold must be positive, got {self.threshold_x}")
        if isinstance(self.probe_radius, bool) or not isinstance(self.probe_radius, int) \
                or self.probe_radius < 1:
            raise ValueError(f"probe radius must be an integer >= 1, got {self.probe_radius!r}")
        object.__setattr__(self, "scheme", Scheme.parse(self.scheme))

    @property
    def cell_side(self) -> float:
        """Edge length of one cube.

        The diagonal scheme sizes cubes so that their space diagonal equals
        the threshold; the side scheme makes the edge equal the threshold.
        """
        if self.scheme is Scheme.DIAGONAL_PAPER:
            return self.threshold_x / math.sqrt(3.0)
        return self.threshold_x

    @property
    def threshold_sq(self) -> float:
        return self.threshold_x * self.threshold_x


@dataclass(frozen=True)
class CollisionReport:
    """Sorted, deduplicated ids of points at risk, plus work counters."""

    flagged_ids: tuple[int, ...] = ()
    points_examined: int = 0
    cells_probed: int = 0

    def __post_init__(self):
        ids = tuple(self.flagged_ids)
        if any(b <= a for a, b in zip(ids, ids[1:])):
            ids = tuple(sorted(set(ids)))
        object.__setattr__(self, "flagged_ids", ids)
        if self.points_examined < 0 or self.cells_probed < 0:
            raise ValueError("counters must be non-negative")

    def __len__(self) -> int:
        return len(self.flagged_ids)

    @property
    def id_set(self) -> frozenset[int]:
        return frozenset(self.flagged_ids)


def points_to_array(points) -> "np.ndarray":
    """(n, 4) float64 array of ``id, x, y, z`` rows."""
    import numpy as np

    n = len(points)
    flat = np.fromiter(itertools.chain.from_iterable(points), dtype=np.float64, count=4 * n)
    return flat.reshape(n, 4)


def squared_distance(a: Point3, b: Point3) -> float:
    # Evaluated as ((dx*dx + dy*dy) + dz*dz) everywhere, including the
    # compiled kernel, so every detector agrees bit for bit.
    dx = a.x - b.x
    dy = a.y - b.y
    dz = a.z - b.z
    return dx * dx + dy * dy + dz * dz


def distance(a: Point3, b: Point3) -> float:
    return math.sqrt(squared_distance(a, b))


def within_threshold(a: Point3, b: Point3, cfg: QueryConfig) -> bool:
    d2 = squared_distance(a, b)
    if cfg.strict:
        return d2 < cfg.threshold_sq
    return d2 <= cfg.threshold_sq

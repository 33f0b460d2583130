"""Seeded uniform point clouds and the plain-text dataset format.

File format: one point per line as three space-separated decimal reals,
LF line endings. Lines starting with ``#`` are comments; blank lines are
skipped. A point's id is its ordinal among data lines.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .core import Point3

DENSE_SIDE = 1000.0
SPARSE_FACTOR = 20.0
PAPER_SIZES = (1500, 100000, 150000, 1000000)
GENERATOR_NAME = "numpy.random.Generator(PCG64)"


class DatasetError(ValueError):
    pass


class DatasetParseError(DatasetError):
    def __init__(self, line_no: int, message: str, path=None):
        where = f"{path}:" if path is not None else "line "
        super().__init__(f"{where}{line_no}: {message}")
        self.line_no = line_no


class DatasetValidationError(DatasetParseError):
    pass


@dataclass(frozen=True)
class DatasetSpec:
    n: int
    box_side: float
    seed: int = 0
    family_label: str = "dense"

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if not (math.isfinite(self.box_side) and self.box_side > 0):
            raise ValueError(f"box side must be positive, got {self.box_side}")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError(f"seed must fit in 64 unsigned bits, got {self.seed}")

    @property
    def label(self) -> str:
        return f"{self.family_label}-{self.n}"


def family_spec(n: int, family: str, seed: int = 0, dense_side: float = DENSE_SIDE) -> DatasetSpec:
    """Spec for the dense (side L) or sparse (side 20 L, 8000x the volume) family."""
    if family == "dense":
        return DatasetSpec(n, dense_side, seed, "dense")
    if family == "sparse":
        return DatasetSpec(n, dense_side * SPARSE_FACTOR, seed, "sparse")
    raise ValueError(f"unknown family {family!r}; expected 'dense' or 'sparse'")


def family_for_size(n: int) -> str:
    """Family implied by a benchmark size: '15...' is sparse, '10...' is dense."""
    digits = str(n)
    if digits.startswith("15"):
        return "sparse"
    if digits.startswith("10"):
        return "dense"
    raise ValueError(f"size {n} does not imply a family; name one explicitly")


def generate_array(spec: DatasetSpec) -> np.ndarray:
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    return rng.uniform(0.0, spec.box_side, size=(spec.n, 3))


def generate(spec: DatasetSpec) -> list[Point3]:
    """``spec.n`` i.i.d. uniform points in ``[0, box_side]^3`` with ids 0..n-1."""
    xyz = generate_array(spec)
    return [Point3.trusted(i, x, y, z) for i, (x, y, z) in enumerate(xyz.tolist())]


def header_lines(spec: DatasetSpec) -> list[str]:
    return [f"# family={spec.family_label} n={spec.n} box_side={spec.box_side!r} "
            f"seed={spec.seed}",
            f"# generator={GENERATOR_NAME}"]


def write_dataset(points: Sequence[Point3], path, header: Sequence[str] = ()) -> None:
    # repr() gives the shortest text that parses back to the same double
    lines = [h if h.startswith("#") else f"# {h}" for h in header]
    lines.extend(f"{p.x!r} {p.y!r} {p.z!r}" for p in points)
    data = "\n".join(lines) + "\n" if lines else ""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(data)


def read_dataset(path) -> list[Point3]:
    if not os.path.exists(path):
        raise FileNotFoundError(f"dataset file not found: {path}")
    with open(path, encoding="utf-8") as fh:
        return parse_lines(fh, path)


def parse_lines(lines, path=None) -> list[Point3]:
    points = []
    for line_no, line in enumerate(lines, start=1):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        fields = text.split()
        if len(fields) != 3:
            raise DatasetParseError(line_no, f"expected 3 fields, got {len(fields)}: {text!r}", path)
        try:
            x, y, z = (float(f) for f in fields)
        except ValueError:
            raise DatasetParseError(line_no, f"malformed number in {text!r}", path) from None
        if not (math.isfinite(x) and math.isfinite(y) and math.isfinite(z)):
            raise DatasetValidationError(line_no, f"non-finite coordinate in {text!r}", path)
        points.append(Point3.trusted(len(points), x, y, z))
    return points


def ensure_dataset(spec: DatasetSpec, directory) -> Path:
    """Write the dataset for ``spec`` into ``directory`` unless already there."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / f"{spec.label}-seed{spec.seed}.txt"
    if not path.exists():
        write_dataset(generate(spec), path, header_lines(spec))
    return path

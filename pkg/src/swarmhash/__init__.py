"""Spatial-hash proximity detection for 3D point swarms."""

from ._kernels import BACKEND
from .baselines import KdTree, brute_force_detect, kd_build, kd_detect
from .core import (CellKey, CollisionReport, Point3, QueryConfig, Scheme, distance,
                   squared_distance, within_threshold)
from .datasets import DatasetSpec, family_spec, generate, read_dataset, write_dataset
from .spatial_hash import (ContractError, DuplicateIdError, SpatialHash, build_index, cell_key,
                           detect, find_for_single_point, merge_results, neighbor_keys)

__all__ = [
    "BACKEND", "CellKey", "CollisionReport", "ContractError", "DatasetSpec", "DuplicateIdError",
    "KdTree", "Point3", "QueryConfig", "Scheme", "SpatialHash", "brute_force_detect",
    "build_index", "cell_key", "detect", "distance", "family_spec", "find_for_single_point",
    "generate", "kd_build", "kd_detect", "merge_results", "neighbor_keys", "read_dataset",
    "squared_distance", "within_threshold", "write_dataset",
]

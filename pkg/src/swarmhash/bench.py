"""Phase timing and peak-memory measurement, emitted as CSV rows."""

from __future__ import annotations

import csv
import gc
import statistics
import threading
import time
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path
from typing import Callable, Iterable, Optional, Sequence

from .baselines import kd_build, kd_detect
from .core import QueryConfig, Scheme
from .datasets import DatasetSpec, generate, read_dataset
from .spatial_hash import build_index, detect

KD_MODE = "kd-tree"
PHASES = ("BUILD", "DETECT")
MIN_REPEATS = 3


@dataclass(frozen=True)
class BenchRecord:
    dataset_label: str
    n: int
    mode: str
    phase: str
    mem_mib: Optional[float]
    mean_ms: float
    max_ms: float
    min_ms: float
    repeats: int
    examined: int

    def __post_init__(self):
        if self.phase not in PHASES:
            raise ValueError(f"unknown phase {self.phase!r}")
        if self.repeats < MIN_REPEATS:
            raise ValueError(f"repeats must be >= {MIN_REPEATS}, got {self.repeats}")
        if not self.min_ms <= self.mean_ms <= self.max_ms:
            raise ValueError(f"inconsistent timings min={self.min_ms} mean={self.mean_ms} "
                             f"max={self.max_ms}")


CSV_COLUMNS = tuple(f.name for f in fields(BenchRecord))


def time_phase(action: Callable[[], object], repeats: int) -> tuple[float, float, float]:
    """Wall-clock (mean, max, min) in ms over ``repeats`` runs, first run included."""
    if repeats < MIN_REPEATS:
        raise ValueError(f"repeats must be >= {MIN_REPEATS}, got {repeats}")
    samples = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        action()
        samples.append((time.perf_counter() - t0) * 1e3)
    mean = statistics.fmean(samples)
    # fmean can land an ulp outside [min, max] when all samples are equal
    return min(max(mean, min(samples)), max(samples)), max(samples), min(samples)


def _status_kib(field_name: str) -> Optional[int]:
    try:
        with open("/proc/self/status") as fh:
            for line in fh:
                if line.startswith(field_name + ":"):
                    return int(line.split()[1])
    except OSError:
        return None
    return None


def _reset_hwm() -> bool:
    try:
        with open("/proc/self/clear_refs", "w") as fh:
            fh.write("5")
        return True
    except OSError:
        return False


def _sampled_peak(action: Callable[[], object], interval: float = 0.001) -> Optional[float]:
    try:
        import psutil
    except ImportError:
        return None
    proc = psutil.Process()
    peak = proc.memory_info().rss
    done = threading.Event()

    def sample():
        nonlocal peak
        while not done.is_set():
            peak = max(peak, proc.memory_info().rss)
            done.wait(interval)

    watcher = threading.Thread(target=sample, daemon=True)
    watcher.start()
    try:
        action()
    finally:
        done.set()
        watcher.join()
    peak = max(peak, proc.memory_info().rss)
    return peak / 2 ** 20


def measure_peak_memory(action: Callable[[], object]) -> Optional[float]:
    """Peak resident set size of the whole process while ``action`` runs, in MiB.

    This is process-level, so it includes the interpreter and any data the
    caller already holds. Returns None when no resident-set probe exists.
    """
    gc.collect()
    if _reset_hwm() and _status_kib("VmHWM") is not None:
        action()
        return _status_kib("VmHWM") / 1024
    return _sampled_peak(action)


def _mode_name(mode) -> str:
    if isinstance(mode, str) and mode == KD_MODE:
        return KD_MODE
    return Scheme.parse(mode).value


def _load(item) -> tuple[str, list]:
    if isinstance(item, DatasetSpec):
        return item.label, generate(item)
    path = Path(item)
    if not path.exists():
        raise FileNotFoundError(f"dataset file not found: {path}")
    return path.stem, read_dataset(path)


def bench_dataset(label: str, points: list, cfg: QueryConfig, mode, repeats: int,
                  workers: int = 1) -> list[BenchRecord]:
    mode = _mode_name(mode)
    n = len(points)
    if mode == KD_MODE:
        build = lambda: kd_build(points)  # noqa: E731
        structure = build()
        run = lambda: kd_detect(structure, cfg)  # noqa: E731
    else:
        mcfg = replace(cfg, scheme=Scheme.parse(mode))
        build = lambda: build_index(points, mcfg)  # noqa: E731
        structure = build()
        run = lambda: detect(structure, mcfg, workers=workers)  # noqa: E731

    rows = []
    mem = measure_peak_memory(build)
    rows.append(BenchRecord(label, n, mode, "BUILD", mem, *time_phase(build, repeats),
                            repeats, 0))
    report = run()
    mem = measure_peak_memory(run)
    rows.append(BenchRecord(label, n, mode, "DETECT", mem, *time_phase(run, repeats),
                            repeats, report.points_examined))
    return rows


def write_csv(records: Iterable[BenchRecord], out_path) -> Path:
    out_path = Path(out_path)
    with open(out_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for rec in records:
            row = asdict(rec)
            row["mem_mib"] = "" if rec.mem_mib is None else f"{rec.mem_mib:.1f}"
            for col in ("mean_ms", "max_ms", "min_ms"):
                row[col] = f"{row[col]:.3f}"
            writer.writerow([row[c] for c in CSV_COLUMNS])
    return out_path


def run_suite(specs: Sequence, cfg: QueryConfig, repeats: int, out_path,
              modes: Sequence | None = None, workers: int = 1,
              progress: Callable[[BenchRecord], None] | None = None) -> Path:
    """Benchmark every (dataset, mode, phase) and write one CSV row for each.

    ``specs`` items are :class:`DatasetSpec` (generated in memory) or paths
    to dataset files. Rows come out in dataset, mode, phase order.
    """
    if repeats < MIN_REPEATS:
        raise ValueError(f"repeats must be >= {MIN_REPEATS}, got {repeats}")
    modes = [cfg.scheme] if modes is None else list(modes)
    for item in specs:
        if not isinstance(item, DatasetSpec) and not Path(item).exists():
            raise FileNotFoundError(f"dataset file not found: {item}")
    records: list[BenchRecord] = []
    for item in specs:
        label, points = _load(item)
        for mode in modes:
            for rec in bench_dataset(label, points, cfg, mode, repeats, workers):
                records.append(rec)
                if progress:
                    progress(rec)
        del points
    return write_csv(records, out_path)

"""Command-line entry point: generate, detect, verify, bench."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import _kernels
from .baselines import brute_force_detect
from .core import QueryConfig, Scheme
from .datasets import (DatasetError, PAPER_SIZES, family_for_size, family_spec, generate,
                       header_lines, read_dataset, write_dataset)
from .spatial_hash import build_index, detect


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not value > 0 or value == float("inf"):
        raise argparse.ArgumentTypeError(f"threshold must be positive, got {text}")
    return value


def _seed(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return value


def _repeats(text: str) -> int:
    value = _positive_int(text)
    if value < 3:
        raise argparse.ArgumentTypeError(f"repeats must be >= 3, got {value}")
    return value


def _csv_list(kind):
    def parse(text: str):
        try:
            return [kind(part) for part in text.split(",") if part.strip()]
        except (ValueError, argparse.ArgumentTypeError) as exc:
            raise argparse.ArgumentTypeError(str(exc)) from None
    return parse


def _scheme(text: str) -> Scheme:
    try:
        return Scheme.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _mode(text: str) -> str:
    text = text.strip()
    if text == "kd-tree":
        return text
    return _scheme(text).value


def _family(text: str) -> str:
    text = text.strip()
    if text not in ("dense", "sparse", "auto"):
        raise argparse.ArgumentTypeError(f"unknown family {text!r}")
    return text


def _add_query_flags(p: argparse.ArgumentParser, default_scheme: str) -> None:
    p.add_argument("--input", required=True, help="dataset file")
    p.add_argument("--threshold", type=_positive_float, default=100.0,
                   help="distance threshold in meters (default 100)")
    p.add_argument("--scheme", type=_scheme, default=Scheme.parse(default_scheme),
                   help="diagonal-paper or side-exact (default %(default)s)")
    p.add_argument("--radius", type=_positive_int, default=1,
                   help="probe radius in cells (default 1)")
    p.add_argument("--non-strict", action="store_true",
                   help="count pairs at exactly the threshold as close")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="swarmhash",
                                     description="Proximity alerts for 3D point swarms.")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a seeded uniform dataset")
    g.add_argument("--n", type=_positive_int, required=True)
    g.add_argument("--family", type=_family, choices=["dense", "sparse"], default="dense")
    g.add_argument("--seed", type=_seed, default=0)
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_generate)

    d = sub.add_parser("detect", help="write the points at risk of collision")
    _add_query_flags(d, "diagonal-paper")
    d.add_argument("--out", default="-", help="report file, '-' for stdout")
    d.add_argument("--parallel", type=_positive_int, default=1, metavar="WORKERS",
                   help="scan cells with this many threads")
    d.set_defaults(func=cmd_detect)

    v = sub.add_parser("verify", help="compare a scheme against the all-pairs oracle; "
                                      "side-exact is the scheme expected to pass")
    _add_query_flags(v, "side-exact")
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bench", help="time BUILD and DETECT phases into a CSV")
    b.add_argument("--sizes", type=_csv_list(_positive_int), default=list(PAPER_SIZES))
    b.add_argument("--families", type=_csv_list(_family), default=["auto"],
                   help="dense,sparse or auto (size prefix 15 -> sparse, 10 -> dense)")
    b.add_argument("--modes", type=_csv_list(_mode),
                   default=[s.value for s in Scheme],
                   help="comma list of diagonal-paper, side-exact, kd-tree")
    b.add_argument("--repeats", type=_repeats, default=3)
    b.add_argument("--seed", type=_seed, default=42)
    b.add_argument("--threshold", type=_positive_float, default=100.0)
    b.add_argument("--radius", type=_positive_int, default=1)
    b.add_argument("--parallel", type=_positive_int, default=1, metavar="WORKERS")
    b.add_argument("--out", default="bench.csv")
    b.set_defaults(func=cmd_bench)
    return parser


def _log(msg: str) -> None:
    print(msg, file=sys.stderr)


def _config(args) -> QueryConfig:
    return QueryConfig(args.threshold, args.scheme, args.radius, strict=not args.non_strict)


def cmd_generate(args) -> int:
    spec = family_spec(args.n, args.family, args.seed)
    points = generate(spec)
    write_dataset(points, args.out, header_lines(spec))
    print(f"{args.out} {len(points)}")
    return 0


def cmd_detect(args) -> int:
    cfg = _config(args)
    points = read_dataset(args.input)
    report = detect(build_index(points, cfg), cfg, workers=args.parallel)
    by_id = {p.id: p for p in points}
    text = "".join(f"{i} {by_id[i].x!r} {by_id[i].y!r} {by_id[i].z!r}\n"
                   for i in report.flagged_ids)
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    _log(f"flagged={len(report)} points={len(points)} examined={report.points_examined} "
         f"cells_probed={report.cells_probed} scheme={cfg.scheme.value} "
         f"radius={cfg.probe_radius} backend={_kernels.BACKEND}")
    return 0


def cmd_verify(args) -> int:
    cfg = _config(args)
    points = read_dataset(args.input)
    got = detect(build_index(points, cfg), cfg).id_set
    want = brute_force_detect(points, cfg).id_set
    diff = sorted(got ^ want)
    print(f"scheme={cfg.scheme.value} radius={cfg.probe_radius} flagged={len(got)} "
          f"oracle={len(want)} symmetric_difference={len(diff)}")
    if diff:
        missed = sorted(want - got)[:10]
        extra = sorted(got - want)[:10]
        print(f"missed (sample): {missed}")
        print(f"spurious (sample): {extra}")
        return 1
    return 0


def cmd_bench(args) -> int:
    from .bench import run_suite

    specs = []
    for n in args.sizes:
        for family in args.families:
            if family == "auto":
                try:
                    family = family_for_size(n)
                except ValueError as exc:
                    raise SystemExit(f"swarmhash bench: {exc}") from None
            specs.append(family_spec(n, family, args.seed))
    cfg = QueryConfig(args.threshold, Scheme.DIAGONAL_PAPER, args.radius)

    def progress(rec):
        _log(f"{rec.dataset_label} {rec.mode} {rec.phase}: mean {rec.mean_ms:.2f} ms")

    path = run_suite(specs, cfg, args.repeats, args.out, modes=args.modes,
                     workers=args.parallel, progress=progress)
    print(path)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (DatasetError, FileNotFoundError, OSError) as exc:
        _log(f"swarmhash {args.command}: {exc}")
        return 1


if __name__ == "__main__":
    sys.exit(main())

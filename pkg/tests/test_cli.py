import subprocess
import sys

import pytest

from swarmhash.cli import build_parser, main
from swarmhash.datasets import read_dataset

GAP = "57.7 0 0\n115.5 0 0\n"


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def data_lines(path):
    return [ln for ln in open(path).read().splitlines() if ln and not ln.startswith("#")]


def test_generate(tmp_path, capsys):
    out = tmp_path / "d.txt"
    assert main(["generate", "--n", "1500", "--family", "dense", "--seed", "42",
                 "--out", str(out)]) == 0
    assert len(data_lines(out)) == 1500
    assert capsys.readouterr().out.split() == [str(out), "1500"]


def test_generate_is_deterministic(tmp_path):
    for name in ("a.txt", "b.txt"):
        main(["generate", "--n", "300", "--family", "sparse", "--seed", "5",
              "--out", str(tmp_path / name)])
    assert (tmp_path / "a.txt").read_bytes() == (tmp_path / "b.txt").read_bytes()


@pytest.mark.parametrize("argv", [
    ["generate", "--n", "0", "--out", "x.txt"],
    ["detect", "--input", "x.txt", "--threshold", "0.0"],
    ["detect", "--input", "x.txt", "--radius", "0"],
    ["detect", "--input", "x.txt", "--scheme", "octree"],
    ["bench", "--repeats", "1"],
    ["bench", "--modes", "ball-tree"],
    ["launch"],
    ["detect", "--input", "x.txt", "--bogus"],
    [],
])
def test_usage_errors(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code != 0
    err = capsys.readouterr().err
    assert "usage:" in err


def test_generate_unwritable_path(tmp_path):
    assert main(["generate", "--n", "5", "--out", str(tmp_path / "no" / "such" / "d.txt")]) != 0


def test_detect_two_close_points(tmp_path, capsys):
    src = write(tmp_path, "in.txt", "0 0 0\n30 40 0\n")
    out = tmp_path / "out.txt"
    assert main(["detect", "--input", src, "--out", str(out)]) == 0
    assert out.read_text() == "0 0.0 0.0 0.0\n1 30.0 40.0 0.0\n"
    captured = capsys.readouterr()
    assert captured.out == ""
    assert "flagged=2" in captured.err


def test_detect_to_stdout_keeps_diagnostics_separate(tmp_path, capsys):
    src = write(tmp_path, "in.txt", "0 0 0\n30 40 0\n900 0 0\n")
    assert main(["detect", "--input", src]) == 0
    captured = capsys.readouterr()
    assert captured.out.splitlines() == ["0 0.0 0.0 0.0", "1 30.0 40.0 0.0"]
    assert "examined=" in captured.err


@pytest.mark.parametrize("radius, lines", [("1", 0), ("2", 2)])
def test_detect_gap_pair(tmp_path, radius, lines):
    src = write(tmp_path, "gap.txt", GAP)
    out = tmp_path / "out.txt"
    assert main(["detect", "--input", src, "--scheme", "diagonal-paper", "--radius", radius,
                 "--out", str(out)]) == 0
    assert len(data_lines(out)) == lines


def test_detect_parse_error(tmp_path, capsys):
    src = write(tmp_path, "bad.txt", "0 0 0\n1.5 2.5\n")
    assert main(["detect", "--input", src]) != 0
    assert "2" in capsys.readouterr().err


def test_detect_missing_input(tmp_path, capsys):
    assert main(["detect", "--input", str(tmp_path / "none.txt")]) != 0
    assert "none.txt" in capsys.readouterr().err


def test_detect_output_ids_ascending(tmp_path):
    data = tmp_path / "d.txt"
    main(["generate", "--n", "3000", "--family", "dense", "--seed", "1", "--out", str(data)])
    out = tmp_path / "o.txt"
    main(["detect", "--input", str(data), "--scheme", "side-exact", "--out", str(out)])
    ids = [int(line.split()[0]) for line in data_lines(out)]
    assert ids == sorted(set(ids))
    points = read_dataset(data)
    for line in data_lines(out):
        i, x, y, z = line.split()
        assert (float(x), float(y), float(z)) == points[int(i)][1:]


def test_verify_side_exact_passes(tmp_path, capsys):
    data = tmp_path / "d.txt"
    main(["generate", "--n", "2000", "--family", "dense", "--seed", "3", "--out", str(data)])
    capsys.readouterr()
    assert main(["verify", "--input", str(data)]) == 0
    assert "symmetric_difference=0" in capsys.readouterr().out


def test_verify_gap_pair_fails(tmp_path, capsys):
    src = write(tmp_path, "gap.txt", GAP)
    assert main(["verify", "--input", src, "--scheme", "diagonal-paper"]) != 0
    out = capsys.readouterr().out
    assert "symmetric_difference=2" in out
    assert "[0, 1]" in out
    assert main(["verify", "--input", src, "--scheme", "diagonal-paper", "--radius", "2"]) == 0


def test_verify_empty_dataset(tmp_path, capsys):
    src = write(tmp_path, "empty.txt", "# no points\n")
    assert main(["verify", "--input", src]) == 0
    assert "flagged=0 oracle=0" in capsys.readouterr().out


def test_bench_defaults():
    args = build_parser().parse_args(["bench"])
    assert args.sizes == [1500, 100000, 150000, 1000000]
    assert args.families == ["auto"]
    assert args.modes == ["diagonal-paper", "side-exact"]
    assert args.repeats == 3


def test_bench_single_size(tmp_path, capsys):
    out = tmp_path / "b.csv"
    assert main(["bench", "--sizes", "1500", "--modes", "side-exact", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "dataset_label,n,mode,phase,mem_mib,mean_ms,max_ms,min_ms,repeats,examined"
    assert len(lines) == 3
    assert lines[1].startswith("sparse-1500,1500,side-exact,BUILD,")
    assert capsys.readouterr().out.strip() == str(out)


def test_bench_explicit_families(tmp_path):
    out = tmp_path / "b.csv"
    assert main(["bench", "--sizes", "500,700", "--families", "dense,sparse",
                 "--modes", "diagonal-paper", "--out", str(out)]) == 0
    labels = [ln.split(",")[0] for ln in out.read_text().splitlines()[1:]]
    assert labels == ["dense-500"] * 2 + ["sparse-500"] * 2 + ["dense-700"] * 2 + ["sparse-700"] * 2


def test_bench_size_without_family(tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["bench", "--sizes", "2000", "--out", str(tmp_path / "b.csv")])
    assert exc.value.code != 0


def test_parallel_detect_same_bytes(tmp_path):
    data = tmp_path / "d.txt"
    main(["generate", "--n", "5000", "--family", "dense", "--seed", "2", "--out", str(data)])
    outs = []
    for extra in ([], ["--parallel", "4"]):
        out = tmp_path / f"o{len(outs)}.txt"
        main(["detect", "--input", str(data), "--out", str(out), *extra])
        outs.append(out.read_bytes())
    assert outs[0] == outs[1] and outs[0]


def test_module_entry_point(tmp_path):
    src = write(tmp_path, "in.txt", "0 0 0\n30 40 0\n")
    proc = subprocess.run([sys.executable, "-m", "swarmhash", "detect", "--input", src],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.splitlines() == ["0 0.0 0.0 0.0", "1 30.0 40.0 0.0"]
    bad = subprocess.run([sys.executable, "-m", "swarmhash", "explode"],
                         capture_output=True, text=True)
    assert bad.returncode != 0 and "usage:" in bad.stderr and bad.stdout == ""

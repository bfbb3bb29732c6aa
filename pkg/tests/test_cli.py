"""Command-line behavior: output formats, CSV shapes, exit codes, determinism."""

import csv

import numpy as np
import pytest

from lrfuse.cli import CSV_COLUMNS, main
from lrfuse.image import read_pgm, write_pgm
from lrfuse.rng import RandomStream


@pytest.fixture
def truth_path(tmp_path):
    img = np.floor(200.0 * RandomStream(2024, "cli").uniform((16, 16))) + 20.0
    path = tmp_path / "truth.pgm"
    write_pgm(path, img)
    return path


def _fast_denoise_flags():
    return ["-r", "2", "--max-iter", "3", "--tol", "1e-6"]


def test_corrupt_all_salt(truth_path, tmp_path, capsys):
    out = tmp_path / "noisy.pgm"
    code = main(["corrupt", str(truth_path), str(out), "--p1", "1.0", "--p2", "0.0"])
    assert code == 0
    assert capsys.readouterr().out == "extreme_fraction=1.000000\n"
    assert np.all(read_pgm(out) == 255.0)


def test_corrupt_noiseless_passthrough(truth_path, tmp_path, capsys):
    out = tmp_path / "noisy.pgm"
    code = main(
        ["corrupt", str(truth_path), str(out), "--sigma", "0", "--p1", "0", "--p2", "0"]
    )
    assert code == 0
    assert capsys.readouterr().out == "extreme_fraction=0.000000\n"
    assert np.array_equal(read_pgm(out), read_pgm(truth_path))


def test_corrupt_missing_input_exits_2(tmp_path, capsys):
    missing = tmp_path / "nope.pgm"
    code = main(["corrupt", str(missing), str(tmp_path / "out.pgm")])
    assert code == 2
    err = capsys.readouterr().err
    assert err.startswith("error:")
    assert "nope.pgm" in err


def test_denoise_prints_tau_and_iterations(truth_path, tmp_path, capsys):
    out = tmp_path / "clean.pgm"
    code = main(
        ["denoise", str(truth_path), str(out), "--tau", "5", *_fast_denoise_flags()]
    )
    assert code == 0
    stdout = capsys.readouterr().out
    assert stdout.startswith("tau=5.000000 iterations=")
    counts = stdout.strip().split("iterations=")[1].split(",")
    assert len(counts) == 4
    assert all(1 <= int(c) <= 3 for c in counts)
    result = read_pgm(out)
    assert result.shape == (16, 16)


def test_denoise_fusion_variants_differ(truth_path, tmp_path):
    noisy = tmp_path / "noisy.pgm"
    main(["corrupt", str(truth_path), str(noisy), "--seed", "3"])
    hard_path = tmp_path / "hard.pgm"
    avg_path = tmp_path / "avg.pgm"
    assert main(["denoise", str(noisy), str(hard_path), *_fast_denoise_flags()]) == 0
    assert (
        main(
            [
                "denoise",
                str(noisy),
                str(avg_path),
                "--fusion",
                "average",
                *_fast_denoise_flags(),
            ]
        )
        == 0
    )
    assert not np.array_equal(read_pgm(hard_path), read_pgm(avg_path))


def test_evaluate_identical_images(truth_path, capsys):
    code = main(["evaluate", str(truth_path), str(truth_path)])
    assert code == 0
    assert capsys.readouterr().out == "psnr_db=inf ssim=1.000000\n"


def test_evaluate_unit_offset_pair(tmp_path, capsys):
    x = np.floor(200.0 * RandomStream(7).uniform((32, 32))) + 10.0
    a, b = tmp_path / "a.pgm", tmp_path / "b.pgm"
    write_pgm(a, x)
    write_pgm(b, x + 1.0)
    assert main(["evaluate", str(a), str(b)]) == 0
    out = capsys.readouterr().out
    assert out.startswith("psnr_db=48.1308 ")


def test_evaluate_csv_appends_with_single_header(truth_path, tmp_path, capsys):
    csv_path = tmp_path / "results.csv"
    for _ in range(2):
        assert main(
            ["evaluate", str(truth_path), str(truth_path), "--csv", str(csv_path)]
        ) == 0
    capsys.readouterr()
    with open(csv_path, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == list(CSV_COLUMNS)
    assert len(rows) == 3
    for row in rows[1:]:
        record = dict(zip(CSV_COLUMNS, row))
        assert record["variant"] == "evaluate"
        assert record["psnr_db"] == "inf"
        assert record["ssim"] == "1.000000"
        assert record["trial"] == "" and record["r"] == ""


def test_sweep_csv_shape_and_summary(truth_path, tmp_path, capsys):
    out_csv = tmp_path / "sweep.csv"
    code = main(
        [
            "sweep",
            str(truth_path),
            str(out_csv),
            "--parameter",
            "eta",
            "--grid",
            "0.3,0.6",
            "--trials",
            "2",
            *_fast_denoise_flags(),
        ]
    )
    assert code == 0
    stdout_lines = capsys.readouterr().out.strip().splitlines()
    assert len(stdout_lines) == 2
    assert stdout_lines[0].startswith("eta=0.3: noisy=")
    assert stdout_lines[1].startswith("eta=0.6: noisy=")

    with open(out_csv, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == list(CSV_COLUMNS)
    # per grid value: 2 trials x 3 variants + 3 mean rows
    assert len(rows) == 1 + 2 * (2 * 3 + 3)
    records = [dict(zip(CSV_COLUMNS, row)) for row in rows[1:]]
    for record in records:
        assert record["parameter"] == "eta"
        assert record["variant"] in ("noisy", "hard", "average")
        assert record["sigma"] == "20" and record["rho"] == "0.3"
    trials = [r["trial"] for r in records if r["value"] == "0.3"]
    assert trials == ["0"] * 3 + ["1"] * 3 + ["mean"] * 3
    # the swept value lands in the eta column for pipeline rows
    assert {r["eta"] for r in records if r["value"] == "0.6"} == {"0.6"}


def test_sweep_is_byte_deterministic(truth_path, tmp_path):
    args = [
        str(truth_path),
        "--parameter",
        "rho",
        "--grid",
        "0.1,0.4",
        "--trials",
        "2",
        *_fast_denoise_flags(),
        "--seed",
        "11",
    ]
    paths = [tmp_path / f"s{i}.csv" for i in range(3)]
    assert main(["sweep", args[0], str(paths[0]), *args[1:]]) == 0
    assert main(["sweep", args[0], str(paths[1]), *args[1:]]) == 0
    assert main(["sweep", args[0], str(paths[2]), *args[1:], "--workers", "3"]) == 0
    blobs = [p.read_bytes() for p in paths]
    assert blobs[0] == blobs[1] == blobs[2]


def test_sweep_rejects_bad_grid(truth_path, tmp_path, capsys):
    code = main(
        [
            "sweep",
            str(truth_path),
            str(tmp_path / "x.csv"),
            "--parameter",
            "eta",
            "--grid",
            "0.5,1.5",
        ]
    )
    assert code == 2
    assert "outside [0, 1]" in capsys.readouterr().err


def test_sweep_failure_writes_error_row(truth_path, tmp_path, capsys):
    out_csv = tmp_path / "fail.csv"
    # rank 20 cannot be factored on a 16x16 image: the trial raises and the
    # sweep reports a partial CSV with a trailing error row
    code = main(
        [
            "sweep",
            str(truth_path),
            str(out_csv),
            "--parameter",
            "r",
            "--grid",
            "20",
            "--trials",
            "1",
        ]
    )
    assert code == 2
    assert capsys.readouterr().err.startswith("error:")
    with open(out_csv, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == list(CSV_COLUMNS)
    assert rows[-1][0] == "error"
    assert rows[-1][1] == "r"


def test_missing_subcommand_is_a_usage_error():
    with pytest.raises(SystemExit):
        main([])

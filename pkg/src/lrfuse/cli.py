"""Command-line front end: corrupt | denoise | evaluate | sweep.

All subcommands exit 0 on success and 2 on any error, write output files
atomically (temp file + rename in the destination directory), and take a
``--seed`` so every run is reproducible.  Sweeps write CSV with the fixed
column set ``trial,parameter,value,sigma,rho,r,tau,eta,variant,psnr_db,ssim``
and are byte-deterministic for a given seed regardless of --workers.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import os
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .image import read_pgm, save_pgm
from .metrics import quality_report
from .noise import NoiseParams, corrupt_mixed
from .pipeline import PipelineConfig, denoise, denoise_both
from .rng import RandomStream

CSV_COLUMNS = (
    "trial",
    "parameter",
    "value",
    "sigma",
    "rho",
    "r",
    "tau",
    "eta",
    "variant",
    "psnr_db",
    "ssim",
)

SWEEP_PARAMETERS = ("eta", "r", "tau", "rho", "sigma")


def _write_bytes_atomic(path: str, data: bytes) -> None:
    """Write a file via temp-and-rename so failures leave no partial output."""
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".lrfuse-tmp-")
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(data)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def _fmt_metric(value: float) -> str:
    return "inf" if math.isinf(value) else f"{value:.6f}"


def _fmt_num(value) -> str:
    return f"{value:g}"


# ---------------------------------------------------------------- corrupt


def cmd_corrupt(args) -> int:
    image = read_pgm(args.input)
    params = NoiseParams(sigma=args.sigma, p1=args.p1, p2=args.p2, seed=args.seed)
    noisy = corrupt_mixed(image, params)
    _write_bytes_atomic(args.output, save_pgm(noisy))
    extreme = float(np.mean((noisy == 0.0) | (noisy == 255.0)))
    print(f"extreme_fraction={extreme:.6f}")
    return 0


# ---------------------------------------------------------------- denoise


def cmd_denoise(args) -> int:
    image = read_pgm(args.input)
    cfg = PipelineConfig(
        rank=args.rank,
        eta=args.eta,
        tau=args.tau,
        auto_tau=args.auto_tau,
        fusion=args.fusion,
        max_iter=args.max_iter,
        tol=args.tol,
        seed=args.seed,
    )
    result, report = denoise(image, cfg)
    _write_bytes_atomic(args.output, save_pgm(result))
    iterations = ",".join(str(n) for n in report.iterations)
    print(f"tau={report.tau:.6f} iterations={iterations}")
    return 0


# --------------------------------------------------------------- evaluate


def cmd_evaluate(args) -> int:
    reference = read_pgm(args.reference)
    test = read_pgm(args.test)
    report = quality_report(reference, test)
    print(f"psnr_db={report.psnr_db:.4f} ssim={report.ssim:.6f}")
    if args.csv:
        row = [""] * len(CSV_COLUMNS)
        row[CSV_COLUMNS.index("variant")] = "evaluate"
        row[CSV_COLUMNS.index("psnr_db")] = _fmt_metric(report.psnr_db)
        row[CSV_COLUMNS.index("ssim")] = _fmt_metric(report.ssim)
        try:
            with open(args.csv, "rb") as handle:
                existing = handle.read()
        except FileNotFoundError:
            existing = b""
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        if not existing:
            writer.writerow(CSV_COLUMNS)
        writer.writerow(row)
        _write_bytes_atomic(args.csv, existing + buffer.getvalue().encode("ascii"))
    return 0


# ------------------------------------------------------------------ sweep


def _parse_grid(parameter: str, text: str) -> list[float]:
    try:
        values = [float(v) for v in text.split(",") if v.strip() != ""]
    except ValueError:
        raise ValueError(f"grid must be comma-separated numbers, got {text!r}")
    if not values:
        raise ValueError("grid must contain at least one value")
    for v in values:
        if parameter in ("eta", "rho") and not 0.0 <= v <= 1.0:
            raise ValueError(f"{parameter} grid value {v:g} outside [0, 1]")
        if parameter in ("tau", "sigma") and v < 0.0:
            raise ValueError(f"{parameter} grid value {v:g} must be >= 0")
        if parameter == "r" and (v < 1 or v != int(v)):
            raise ValueError(f"r grid value {v:g} must be a positive integer")
    return values


def _sweep_trial(truth, parameter, value, trial, args, root):
    """One (grid value, Monte Carlo trial) cell: corrupt, denoise, measure.

    Trial seeds depend only on the trial index, not the grid value, so the
    same noise realizations are reused across the grid (paired comparison).
    """
    sigma, p1, p2 = args.sigma, args.p1, args.p2
    cfg_kwargs = {
        "rank": args.rank,
        "eta": args.eta,
        "tau": args.tau,
        "auto_tau": args.auto_tau,
        "max_iter": args.max_iter,
        "tol": args.tol,
    }
    if parameter == "sigma":
        sigma = value
    elif parameter == "rho":
        p1 = p2 = value / 2.0
    elif parameter == "eta":
        cfg_kwargs["eta"] = value
    elif parameter == "r":
        cfg_kwargs["rank"] = int(value)
    elif parameter == "tau":
        cfg_kwargs["tau"] = value
        cfg_kwargs["auto_tau"] = False
    noise = NoiseParams(sigma=sigma, p1=p1, p2=p2, seed=root.child_seed("noise", trial))
    cfg = PipelineConfig(seed=root.child_seed("pipe", trial), **cfg_kwargs)
    noisy = corrupt_mixed(truth, noise)
    (hard, average), report = denoise_both(noisy, cfg)
    effective = {
        "sigma": noise.sigma,
        "rho": noise.rho,
        "r": cfg.rank,
        "tau": report.tau,
        "eta": cfg.eta,
    }
    return {
        "noisy": quality_report(truth, noisy),
        "hard": quality_report(truth, hard),
        "average": quality_report(truth, average),
        "effective": effective,
    }


def _sweep_row(parameter, value, trial_label, effective, variant, psnr_db, ssim):
    return [
        trial_label,
        parameter,
        _fmt_num(value),
        _fmt_num(effective["sigma"]),
        _fmt_num(effective["rho"]),
        str(effective["r"]),
        _fmt_num(effective["tau"]),
        _fmt_num(effective["eta"]),
        variant,
        _fmt_metric(psnr_db),
        _fmt_metric(ssim),
    ]


def cmd_sweep(args) -> int:
    truth = read_pgm(args.truth)
    grid = _parse_grid(args.parameter, args.grid)
    if args.trials < 1:
        raise ValueError(f"trials must be positive, got {args.trials}")
    if args.workers < 1:
        raise ValueError(f"workers must be positive, got {args.workers}")
    root = RandomStream(args.seed)
    tasks = [(vi, trial) for vi in range(len(grid)) for trial in range(args.trials)]

    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    failure = None

    with ThreadPoolExecutor(max_workers=args.workers) as pool:
        futures = {
            key: pool.submit(
                _sweep_trial, truth, args.parameter, grid[key[0]], key[1], args, root
            )
            for key in tasks
        }
        for vi, value in enumerate(grid):
            if failure is not None:
                break
            collected = []
            for trial in range(args.trials):
                try:
                    collected.append(futures[(vi, trial)].result())
                except Exception as exc:  # noqa: BLE001 - reported in the CSV
                    failure = exc
                    for fut in futures.values():
                        fut.cancel()
                    break
                result = collected[-1]
                for variant in ("noisy", "hard", "average"):
                    q = result[variant]
                    writer.writerow(
                        _sweep_row(
                            args.parameter,
                            value,
                            str(trial),
                            result["effective"],
                            variant,
                            q.psnr_db,
                            q.ssim,
                        )
                    )
            if failure is not None:
                break
            means = {}
            for variant in ("noisy", "hard", "average"):
                psnr = float(np.mean([r[variant].psnr_db for r in collected]))
                ssim = float(np.mean([r[variant].ssim for r in collected]))
                means[variant] = psnr
                effective = dict(collected[0]["effective"])
                effective["tau"] = float(np.mean([r["effective"]["tau"] for r in collected]))
                writer.writerow(
                    _sweep_row(args.parameter, value, "mean", effective, variant, psnr, ssim)
                )
            print(
                f"{args.parameter}={value:g}: "
                f"noisy={means['noisy']:.4f} dB "
                f"hard={means['hard']:.4f} dB "
                f"average={means['average']:.4f} dB"
            )

    if failure is not None:
        writer.writerow(["error", args.parameter, "", "", "", "", "", "", str(failure), "", ""])
        _write_bytes_atomic(args.out, buffer.getvalue().encode("ascii"))
        print(f"error: {failure}", file=sys.stderr)
        return 2
    _write_bytes_atomic(args.out, buffer.getvalue().encode("ascii"))
    return 0


# ------------------------------------------------------------------- main


def _add_pipeline_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("-r", "--rank", type=int, default=10, help="LRMF rank")
    parser.add_argument("--eta", type=float, default=0.5, help="mask overlap fraction")
    parser.add_argument("--tau", type=float, default=15.0, help="hard threshold")
    parser.add_argument(
        "--auto-tau",
        action="store_true",
        help="pick tau as half the (rank+1)-th singular value of the input",
    )
    parser.add_argument("--max-iter", type=int, default=100, help="LRMF iteration cap")
    parser.add_argument("--tol", type=float, default=1e-6, help="LRMF relative tolerance")


def _add_noise_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--sigma", type=float, default=20.0, help="Gaussian noise std")
    parser.add_argument("--p1", type=float, default=0.15, help="salt probability")
    parser.add_argument("--p2", type=float, default=0.15, help="pepper probability")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lrfuse",
        description="Mixed-noise grayscale denoising by masked low-rank "
        "factorization and wavelet fusion.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("corrupt", help="add mixed Gaussian + salt-and-pepper noise")
    p.add_argument("input", help="clean PGM path")
    p.add_argument("output", help="corrupted PGM path")
    _add_noise_flags(p)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_corrupt)

    p = sub.add_parser("denoise", help="denoise a PGM image")
    p.add_argument("input", help="noisy PGM path")
    p.add_argument("output", help="denoised PGM path")
    _add_pipeline_flags(p)
    p.add_argument(
        "--fusion", choices=("hard", "average"), default="hard", help="fusion rule"
    )
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_denoise)

    p = sub.add_parser("evaluate", help="PSNR/SSIM of a test image vs a reference")
    p.add_argument("reference", help="reference PGM path")
    p.add_argument("test", help="test PGM path")
    p.add_argument("--csv", help="append one CSV row to this path")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("sweep", help="Monte Carlo parameter sweep to CSV")
    p.add_argument("truth", help="ground-truth PGM path")
    p.add_argument("out", help="CSV output path")
    p.add_argument(
        "--parameter", choices=SWEEP_PARAMETERS, required=True, help="swept parameter"
    )
    p.add_argument("--grid", required=True, help="comma-separated grid values")
    p.add_argument("--trials", type=int, default=20, help="Monte Carlo trials per value")
    p.add_argument("--workers", type=int, default=1, help="parallel trial workers")
    _add_noise_flags(p)
    _add_pipeline_flags(p)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_sweep)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

"""Shared helpers for the figure scripts: run the CLI into an output directory."""

import argparse
import math
from pathlib import Path

from qubit_uncertainty.cli import run


def pair_obs(ab: float) -> str:
    return f"1,0,0;{ab!r},{math.sqrt(1.0 - ab * ab)!r},0"


def parse_args(doc: str, default_out: str):
    p = argparse.ArgumentParser(description=doc)
    p.add_argument("--out-dir", default=default_out)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--points", type=int, default=2000)
    args = p.parse_args()
    Path(args.out_dir).mkdir(parents=True, exist_ok=True)
    return args


def emit(args, name: str, *cli_args) -> Path:
    path = Path(args.out_dir) / f"{name}.{args.format}"
    code = run(list(cli_args) + ["--format", args.format, "--points", str(args.points), "--out", str(path)])
    if code != 0:
        raise SystemExit(f"{name}: exit status {code}")
    print(path)
    return path

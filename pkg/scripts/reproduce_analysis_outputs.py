#!/usr/bin/env python3
"""Saturation-coefficient tables, symbol scans, c* sweeps, matvec benchmark."""

import argparse
from pathlib import Path

from fracrbf.cli import main as cli_main


def run(outdir: Path) -> None:
    outdir.mkdir(parents=True, exist_ok=True)
    cli_main(["saturation", "--gamma", "0.36,0.25", "--x", "0.25,0.5",
              "--beta", "0,2", "--out", str(outdir / "saturation")])
    cli_main(["symbols", "--gamma", "0.25,0.36", "--alpha", "0.4,1.0,1.5",
              "--dim", "1,2", "--out", str(outdir / "symbols.csv")])
    cli_main(["sweep", "--problem", "ex1", "--alpha", "1.0",
              "--cstar", "0.5,0.65,0.8", "--n", "7,15,31,63,127,255",
              "--out", str(outdir / "cstar_sweep.csv")])
    cli_main(["bench", "--h", "0.25,0.125,0.0625,0.03125",
              "--out", str(outdir / "matvec_bench.csv")])
    print(f"wrote analysis outputs under {outdir}/")


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--outdir", type=Path, default=Path("results"))
    run(ap.parse_args().outdir)

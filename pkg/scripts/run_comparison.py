"""Produce the scheme comparison table and the per-failure-count average
repair bandwidth data, as printed text plus CSV files.

Usage: python scripts/run_comparison.py [output-dir]
"""

import sys
from pathlib import Path

from blrc.cli import main


def run(out_dir: Path) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    main(["compare", "--out", str(out_dir / "comparison.txt"),
          "--bandwidth-csv", str(out_dir / "bandwidth.csv")])
    main(["compare", "--format", "csv",
          "--out", str(out_dir / "comparison.csv")])
    print((out_dir / "comparison.txt").read_text())
    print(f"wrote {out_dir}/comparison.txt, comparison.csv, bandwidth.csv")


if __name__ == "__main__":
    run(Path(sys.argv[1]) if len(sys.argv) > 1 else Path("out"))

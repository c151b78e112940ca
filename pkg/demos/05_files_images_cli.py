"""Files, images and the command line.

Writes the canonical bank to MKF, renders it, runs the full report through
the CLI entry point and lists what was produced. Output goes to the
directory given as the first argument (default: ./demo_output).
"""
import sys
from pathlib import Path

from scspfit.cli import main

out = Path(sys.argv[1] if len(sys.argv) > 1 else "demo_output")
out.mkdir(parents=True, exist_ok=True)
bank = out / "canonical.mkf"

steps = [
    ["gen", "--family", "all", "-o", str(bank)],
    ["render", str(bank), "-o", str(out / "images"), "--upscale", "12"],
    ["approx", str(bank), "--reference", str(bank), "-o", str(out / "approx.csv")],
    ["report", str(bank), "-o", str(out / "report"), "--threads", "4"],
]
for args in steps:
    code = main(args)
    print(f"scspfit {' '.join(args)}  -> exit {code}")

print("\nfirst lines of the bank file:")
print("".join(bank.read_text().splitlines(keepends=True)[:4]), end="")
print("\nreport files:", ", ".join(sorted(p.name for p in (out / "report").iterdir())))

"""The command line front end on the shipped instance files."""

import subprocess
import sys
from pathlib import Path

here = Path(__file__).parent / "instances"
runs = [
    ["analyze", here / "bs_2_3.jsonl"],
    ["extend", here / "swap.jsonl"],
    ["reduce", here / "bs_2_4.jsonl", "--word", "pinch"],
    ["rep", here / "z3_shift.jsonl"],
]
for args in runs:
    cmd = [sys.executable, "-m", "hnnlinear", *map(str, args)]
    out = subprocess.run(cmd, capture_output=True, text=True)
    print("$ hnnlinear", " ".join(str(a.name) if isinstance(a, Path) else a for a in args))
    print(f"  exit {out.returncode}; {len(out.stdout)} bytes of output")
    print("  " + out.stdout[:200].strip())

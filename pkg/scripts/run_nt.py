"""(n,T) policy surfaces for both repair models, then a summary of their difference."""
import argparse
import json
import pathlib
import sys

from gammarepair.cli import main


def summarize(out: pathlib.Path) -> None:
    rep = json.loads((out / "optimize.json").read_text())
    d = rep["difference"]
    print(f"ARD1 - ARA1: min {d['min']:.4f}, max {d['max']:.4f}, changes sign: {d['changes_sign']}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--preset", default="nt-paper", choices=["nt-paper", "nt-paper-rho031"])
    ap.add_argument("--out", default="results/nt")
    ap.add_argument("--seed", type=int)
    ap.add_argument("--threads", type=int, default=1)
    a = ap.parse_args()
    out = pathlib.Path(a.out) / a.preset
    argv = ["optimize", "--preset", a.preset, "--out", str(out), "--threads", str(a.threads)]
    if a.seed is not None:
        argv += ["--seed", str(a.seed)]
    code = main(argv)
    if code == 0:
        summarize(out)
    sys.exit(code)

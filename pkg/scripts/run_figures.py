"""Regenerate the moment and stochastic-order comparison data behind the figures.

Each preset writes its CSV/JSON files into ``<out>/<preset>``.
"""
import argparse
import pathlib
import sys

from gammarepair.cli import PRESETS, main

FIGURES = [k for k, (cmd, _) in PRESETS.items() if k.startswith("fig-") or k.startswith("remark4") or cmd == "equivalent"]


def run(out: pathlib.Path, seed: int | None, threads: int) -> int:
    status = 0
    for name in FIGURES:
        cmd = PRESETS[name][0]
        argv = [cmd, "--preset", name, "--out", str(out / name), "--threads", str(threads)]
        if seed is not None:
            argv += ["--seed", str(seed)]
        print(f"{name} ({cmd})", flush=True)
        status = max(status, main(argv))
    return status


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="results/figures")
    ap.add_argument("--seed", type=int)
    ap.add_argument("--threads", type=int, default=1)
    a = ap.parse_args()
    sys.exit(run(pathlib.Path(a.out), a.seed, a.threads))

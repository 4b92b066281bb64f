"""Reduction factor eta versus plate separation for f = 0.015 and f = 0.25.

Writes results/fig2_f0015.csv and results/fig2_f025.csv, prints eta per rule
and the Bruggeman vs wiener-upper difference both relative to Bruggeman and
as an absolute eta difference.

    python scripts/fig2_force_vs_separation.py [--out-dir results] [--jobs N]
"""

import argparse
import os
import time
from pathlib import Path

from composite_casimir.cli import cmd_force_vs_separation
from composite_casimir.ingestion import DATA_DIR, load_scenario
from composite_casimir.numerics import QuadratureSpec

NAMES = ("fig2_f0015", "fig2_f025")


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--out-dir", type=Path, default=Path("results"))
    ap.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    args = ap.parse_args()
    args.out_dir.mkdir(parents=True, exist_ok=True)

    for name in NAMES:
        scenario = load_scenario(DATA_DIR / "scenarios" / f"{name}.ini")
        t0 = time.perf_counter()
        text = cmd_force_vs_separation(scenario, QuadratureSpec(rel_tol=1e-5), args.jobs)
        elapsed = time.perf_counter() - t0
        (args.out_dir / f"{name}.csv").write_text(text)

        rows = [line.split(",") for line in text.splitlines() if line and not line.startswith(("#", "L_nm,"))]
        eta = {(float(L), rule): float(e) for L, rule, e, *_ in rows}
        rules = list(dict.fromkeys(r for _, r in eta))
        print(f"{name}: f = {scenario.slab1.composite.f}  ({elapsed:.1f} s)")
        print("  L_nm " + " ".join(f"{r:>15}" for r in rules) + "   upper/brug-1  |d eta|")
        for L in scenario.sweep.values:
            b, u = eta[L, "bruggeman"], eta[L, "wiener-upper"]
            cells = " ".join(f"{eta[L, r]:15.4f}" for r in rules)
            print(f"  {L:4g} {cells}   {(u - b) / b:12.1%}  {u - b:7.3f}")


if __name__ == "__main__":
    main()

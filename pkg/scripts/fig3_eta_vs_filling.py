"""Reduction factor eta versus filling fraction at L = 100 nm.

Writes results/fig3_eta_vs_f.csv and prints eta per rule.

    python scripts/fig3_eta_vs_filling.py [--out-dir results] [--jobs N]
"""

import argparse
import os
from pathlib import Path

from composite_casimir.cli import cmd_eta_vs_filling
from composite_casimir.ingestion import DATA_DIR, load_scenario
from composite_casimir.numerics import QuadratureSpec


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--out-dir", type=Path, default=Path("results"))
    ap.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    args = ap.parse_args()
    args.out_dir.mkdir(parents=True, exist_ok=True)

    scenario = load_scenario(DATA_DIR / "scenarios" / "fig3_eta_vs_f.ini")
    text = cmd_eta_vs_filling(scenario, QuadratureSpec(rel_tol=1e-5), args.jobs)
    (args.out_dir / "fig3_eta_vs_f.csv").write_text(text)

    rows = [line.split(",") for line in text.splitlines() if line and not line.startswith(("#", "f,"))]
    eta = {(float(f), rule): float(e) for f, rule, e in rows}
    rules = list(dict.fromkeys(r for _, r in eta))
    print(f"L = {scenario.separation_nm:g} nm")
    print("     f " + " ".join(f"{r:>15}" for r in rules))
    for f in scenario.sweep.values:
        print(f"  {f:4.3f} " + " ".join(f"{eta[f, r]:15.4f}" for r in rules))


if __name__ == "__main__":
    main()

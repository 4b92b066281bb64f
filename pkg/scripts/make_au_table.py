"""Regenerate the shipped gold loss table ``data/au_drude_tab.csv``.

The table is a synthetic stand-in for measured Au optical data: a Drude term
(omega_p = 9 eV, gamma = 35 meV) plus five interband Lorentz terms with the
Lorentz-Drude parameters of Rakic et al., Appl. Opt. 37, 5271 (1998). Replace
the CSV with measured eps'' data when available; the format is unchanged.

    python scripts/make_au_table.py
"""

from pathlib import Path

import numpy as np

OMEGA_P = 9.0
GAMMA = 0.035
# (f_j, Gamma_j eV, omega_j eV); interband strengths scale with omega_p = 9.03 eV
INTERBAND_WP = 9.03
INTERBAND = [
    (0.024, 0.241, 0.415),
    (0.010, 0.345, 0.830),
    (0.071, 0.870, 2.969),
    (0.601, 2.494, 4.304),
    (4.384, 2.214, 13.32),
]
OMEGA_MIN, OMEGA_MAX, N = 0.125, 40.0, 241

OUT = Path(__file__).resolve().parents[1] / "src" / "composite_casimir" / "data" / "au_drude_tab.csv"


def au_loss(w):
    eps2 = OMEGA_P ** 2 * GAMMA / (w * (w ** 2 + GAMMA ** 2))
    for f, g, w0 in INTERBAND:
        eps2 += f * INTERBAND_WP ** 2 * g * w / ((w0 ** 2 - w ** 2) ** 2 + (g * w) ** 2)
    return eps2


def main():
    w = np.geomspace(OMEGA_MIN, OMEGA_MAX, N)
    lines = [
        "# synthetic Au loss spectrum: Drude(9 eV, 0.035 eV) + Lorentz interband terms (Rakic 1998)",
        "# literature default, user-overridable; regenerate with scripts/make_au_table.py",
        "omega_eV,eps2",
    ]
    lines += [f"{wi:.6g},{ei:.8g}" for wi, ei in zip(w, au_loss(w))]
    OUT.write_text("\n".join(lines) + "\n")
    print(f"wrote {len(w)} rows to {OUT}")


if __name__ == "__main__":
    main()

"""Two pi-phase lines through the spatial-frequency filter; writes CF64 and PGM."""

import argparse
from pathlib import Path

import numpy as np

from thermeit import cf64
from thermeit.dicke import apply_filter
from thermeit.fields import two_line_field
from thermeit.presets import fig5_filter, k_typ


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("-d", "--outdir", default="fig5")
    ap.add_argument("--phase", type=float, default=np.pi)
    ap.add_argument("--diffraction", action="store_true")
    args = ap.parse_args()

    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    p = fig5_filter(diffraction=args.diffraction)
    kt = k_typ(p.medium, p.beams)
    n = 256
    field = two_line_field(n, 0.15 / kt, 1 / kt, 5 / kt, phase=args.phase)
    filtered = apply_filter(field, p)
    for name, f in (("input", field), ("output", filtered)):
        cf64.write(out / f"{name}.cf64", f)
        cf64.write_pgm(out / f"{name}.pgm", f)
    inten = np.abs(filtered.values[0]) ** 2
    print(f"k_typ = {kt:.1f} 1/m, midline / peak = {inten[n // 2] / inten.max():.3e}")


if __name__ == "__main__":
    main()

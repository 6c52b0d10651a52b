"""Finite-beam spectra (sheet and cylinder) against the plane-wave Lorentzian."""

import argparse

import numpy as np

from thermeit.presets import FIG7_PARAMS, fig7_geometry
from thermeit.ramsey import fd_oracle, plane_wave_spectrum, power_spectrum, s_correction
from thermeit.susceptibility import fwhm

P_FAR = 1e-8


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("-o", "--out", default="fig7_ramsey.csv")
    args = ap.parse_args()

    grid = np.linspace(-1e4, 1e4, 2001)
    plane = plane_wave_spectrum(grid, FIG7_PARAMS, P_FAR)
    sheet = power_spectrum(grid, fig7_geometry("sheet"), FIG7_PARAMS, P_FAR)
    cyl = power_spectrum(grid, fig7_geometry("cylinder"), FIG7_PARAMS, P_FAR)
    for name, spec in (("plane wave", plane), ("sheet", sheet), ("cylinder", cyl)):
        print(f"{name:10s}  FWHM = {fwhm(spec).width:8.1f} 1/s")
    for dim in ("sheet", "cylinder"):
        geom = fig7_geometry(dim)
        err = max(abs(fd_oracle(d, geom, FIG7_PARAMS) / s_correction(d, geom, FIG7_PARAMS) - 1)
                  for d in (0.0, 1e3, 5e3))
        print(f"{dim:10s}  finite-difference relative error {err:.2e}")
    np.savetxt(args.out, np.column_stack([grid, plane.values, sheet.values, cyl.values]),
               delimiter=",", fmt="%.17g", header="delta,plane_wave,sheet,cylinder", comments="")


if __name__ == "__main__":
    main()

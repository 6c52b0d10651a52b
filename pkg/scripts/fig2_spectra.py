"""EIT transmission spectra in the Dicke (eta = 0.16) and Doppler (eta = 16) regimes."""

import argparse

import numpy as np

from thermeit.presets import FIG2_K, fig2_point
from thermeit.susceptibility import fwhm, transmission_scan
from thermeit.velocity import one_photon_K


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("-o", "--out", default="fig2_spectra.csv")
    ap.add_argument("-n", type=int, default=801)
    args = ap.parse_args()

    cols = []
    for eta in (0.16, 16.0):
        med, beams = fig2_point(eta, FIG2_K)
        width = (med.Gamma_21 + one_photon_K(0.0, med, beams.q1).real * beams.pump_power
                 + med.D * FIG2_K**2 + med.v_th * FIG2_K)
        grid = np.linspace(-8 * width, 8 * width, args.n)
        spec = transmission_scan(grid, FIG2_K, med, beams)
        print(f"eta={eta:5.2f}  FWHM={fwhm(spec).width:.5e} 1/s")
        cols += [grid, spec.values]
    np.savetxt(args.out, np.column_stack(cols), delimiter=",", fmt="%.17g",
               header="delta_dicke,T_dicke,delta_doppler,T_doppler", comments="")


if __name__ == "__main__":
    main()

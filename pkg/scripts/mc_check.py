"""Kinetic Monte-Carlo susceptibility against the general velocity-integral result."""

import argparse
import time

import numpy as np

from thermeit.kinetic_mc import McConfig, simulate_chi_grid
from thermeit.presets import MC_BEAMS, MC_DELTAS, MC_K, MC_MEDIUM
from thermeit.susceptibility import chi31_general
from thermeit.verify import MC_DEFAULT


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("-n", "--atoms", type=int, default=MC_DEFAULT.n_atoms)
    ap.add_argument("--seed", type=int, default=MC_DEFAULT.seed)
    ap.add_argument("--no-check", action="store_true",
                    help="skip the steady-state window comparison (small runs)")
    args = ap.parse_args()

    cfg = McConfig(args.atoms, MC_DEFAULT.dt, MC_DEFAULT.t_total, seed=args.seed)
    t0 = time.perf_counter()
    res = simulate_chi_grid(MC_DELTAS, MC_K, 0.0, MC_MEDIUM, MC_BEAMS, cfg, check=not args.no_check)
    ref = chi31_general(MC_K, 0.0, MC_MEDIUM, MC_BEAMS, delta=np.asarray(MC_DELTAS, float))
    print(f"{cfg.n_atoms} atoms, {time.perf_counter() - t0:.1f} s")
    print(" delta      chi_mc                      chi_general                 n_sigma")
    for d, c, r, e in zip(MC_DELTAS, res.chi, ref, res.stderr):
        print(f"{d:+5.1f}  {c.real:+.5f}{c.imag:+.5f}j    {r.real:+.5f}{r.imag:+.5f}j    "
              f"{abs(c - r) / e:5.2f}")


if __name__ == "__main__":
    main()

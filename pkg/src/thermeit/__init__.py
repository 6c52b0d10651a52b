"""
thermeit: thermal-motion effects in Lambda-system EIT.

General Doppler-to-Dicke susceptibility, diffusion-limit spatial filters,
storage and slow-light diffusion, finite-beam Ramsey spectra and a kinetic
Monte-Carlo oracle.
"""

from .dicke import FilterParams, angular_transmission, apply_filter, chi31_dicke, gamma_hom, window_L
from .diffusion import (SlowLightParams, StoredCoherence, evolve_slow_light, evolve_stored,
                        group_velocity)
from .fields import ComplexField2D
from .kinetic_mc import AtomState, McConfig, simulate_chi, simulate_chi_grid
from .params import BeamParams, MediumParams
from .ramsey import (RamseyGeometry, RamseyParams, coherence_profile_1d, fd_oracle, k1_k2,
                     power_spectrum, s_correction)
from .special import bessel_i, bessel_k, brownian_h, faddeeva
from .susceptibility import (FwhmResult, Spectrum, chi31_general, fwhm, fwhm_analytic,
                             transmission_scan)
from .velocity import ConvergenceError, GSet, g_set, one_photon_K, voigt_G1

__version__ = "0.1.0"

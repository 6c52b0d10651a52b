"""
Parameter sets for the reference figures, shared by scripts, configs and
tests. Rates are angular rates in 1/s.
"""

import math

from .dicke import FilterParams
from .params import BeamParams, MediumParams
from .ramsey import RamseyGeometry, RamseyParams
from .velocity import one_photon_K

# probe wave number used where only ratios are specified (Rb D1 line)
PROBE_Q1 = 2.0 * math.pi / 795e-9

FIG3_GAMMAS = (1.6e4, 1.6e5, 1.6e6)
FIG3_K_RANGE = (5e1, 3e5)


def fig3_medium(gamma):
    return MediumParams(v_th=170.0, gamma=gamma, Gamma_d=1e8, Gamma_21=1e3)


def fig3_beams():
    # |Omega_2|^2 / Gamma_d = 40 1/s
    return BeamParams(q1=PROBE_Q1, Omega_2=math.sqrt(40.0 * 1e8))


FIG2_K = 1.5e3
FIG2_V_TH = 170.0


def fig2_point(eta, k=FIG2_K, v_th=FIG2_V_TH):
    """Medium/beams with Gamma_d = 2500 v k, Gamma_21 = 0.025 v k,
    |Omega_2|^2 / Gamma_d = Gamma_21 / 25 and gamma = v k / eta."""
    vk = v_th * k
    medium = MediumParams(v_th=v_th, gamma=vk / eta, Gamma_d=2500 * vk, Gamma_21=0.025 * vk)
    power = medium.Gamma_d * medium.Gamma_21 / 25.0
    return medium, BeamParams(q1=PROBE_Q1, Omega_2=math.sqrt(power))


# Dicke-filter images: K|W2|^2 = Gamma_21, D = 10 cm^2/s, k_typ = sqrt(2 Gamma_21 / D)
FIG5_OPTICAL_DEPTH = 8.0
FIG5_LENGTH = 0.05


def fig5_filter(optical_depth=FIG5_OPTICAL_DEPTH, length=FIG5_LENGTH, diffraction=False):
    """
    Filter parameters with K|Omega_2|^2 = Gamma_21, dq = 0, Delta = 0.

    ``optical_depth`` is coupling * Re K * length, the one-photon amplitude
    attenuation exponent; the EIT peak transmits exp(-optical_depth / 2).
    """
    base = MediumParams(v_th=170.0, gamma=170.0**2 / 1e-3, Gamma_d=1e8, Gamma_21=1e3)
    K = one_photon_K(0.0, base, PROBE_Q1).real
    medium = base.with_(coupling=optical_depth / (K * length))
    beams = BeamParams(q1=PROBE_Q1, Omega_2=math.sqrt(base.Gamma_21 / K))
    return FilterParams(medium, beams, diffraction, length)


def k_typ(medium, beams):
    from .dicke import gamma_hom
    return math.sqrt(gamma_hom(medium, beams) / medium.D)


# finite-beam spectra: Gamma = 100 Hz, K|W2|^2 = 2 kHz, D = 10 cm^2/s, a = 100 um
FIG7_PARAMS = RamseyParams(Gamma=100.0, K_pow=2000.0, D=1e-3)
FIG7_A = 1e-4


def fig7_geometry(dim="sheet"):
    return RamseyGeometry(FIG7_A, dim)


# kinetic Monte-Carlo point with eta = v_th k / gamma = 1.6 in scaled units
MC_MEDIUM = MediumParams(v_th=1.0, gamma=0.625, Gamma_d=2.0, Gamma_21=0.1)
MC_BEAMS = BeamParams(q1=2.0, Omega_2=1.0)
MC_K = 1.0
MC_DELTAS = (-2.0, -1.0, 0.0, 1.0, 2.0)

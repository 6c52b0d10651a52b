"""
Diffusion-limit (Dicke) EIT: the Lorentzian transparency window L(k, omega),
the spatial-frequency filter it imposes on probe images, and the angular
transmission of a tilted probe.

The one-photon spectrum K is treated as a constant across the narrow
two-photon window and is evaluated once at Delta_1. The motional coupling
term between optical and ground-state coherences is not included, which
requires |Omega_2| << gamma or purely transverse variation.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from .fields import ComplexField2D, spectral_multiply
from .params import BeamParams, MediumParams
from .velocity import one_photon_K

# outer fraction of k-space (per axis) watched for aliasing
ALIAS_BAND = 0.1
ALIAS_ENERGY_FRACTION = 0.01


class AliasingWarning(UserWarning):
    """Significant spectral energy close to the Nyquist wave number."""


@dataclass(frozen=True)
class FilterParams:
    medium: MediumParams
    beams: BeamParams
    include_diffraction: bool = True
    propagation_length: float = 0.0

    def __post_init__(self):
        if not self.propagation_length >= 0:
            raise ValueError("propagation_length must be >= 0")


def _require_diffusive(medium):
    if medium.gamma <= 0:
        raise ValueError("the diffusion limit needs gamma > 0")


def gamma_hom(medium, beams):
    """Homogeneous EIT width Gamma_21 + Re K(Delta_1) |Omega_2|^2, 1/s."""
    K = one_photon_K(beams.Delta_1, medium, beams.q1)
    return medium.Gamma_21 + K.real * beams.pump_power


def _residual_k2(k, delta_q):
    """|delta_q + k|^2 for a scalar k (along x) or an array of 2/3-vectors."""
    dq = np.asarray(delta_q, dtype=float)
    k = np.asarray(k, dtype=float)
    if k.ndim == 0:
        k = np.array([float(k), 0.0, 0.0])
    if k.shape[-1] == 2:
        k = np.concatenate([k, np.zeros(k.shape[:-1] + (1,))], axis=-1)
    if k.shape[-1] != 3:
        raise ValueError("k must be a scalar or an array of 2- or 3-vectors")
    return np.sum((k + dq) ** 2, axis=-1)


def _window_from_b2(b2, omega, medium, beams, K=None):
    _require_diffusive(medium)
    if K is None:
        K = one_photon_K(beams.Delta_1, medium, beams.q1)
    ghom = medium.Gamma_21 + K.real * beams.pump_power
    denom = 1j * (beams.Delta + omega) - ghom - medium.D * b2
    return -K * beams.pump_power / denom


def window_L(k, omega, medium, beams):
    """
    Transparency window L = -K|W2|^2 / [i(Delta + omega) - Gamma_hom - D (dq + k)^2].

    Parameters
    ----------
    k : float or array of 2/3-vectors
        Transverse wave vector(s); a scalar is taken along x.
    omega : float
        Envelope frequency, 1/s.

    Returns
    -------
    complex or ndarray
    """
    b2 = _residual_k2(k, beams.delta_q)
    out = _window_from_b2(b2, omega, medium, beams)
    return out[()] if np.ndim(out) == 0 else out


def chi31_dicke(k, omega, medium, beams):
    """Diffusion-limit susceptibility i*coupling*K*(1 - L), 1/m."""
    K = one_photon_K(beams.Delta_1, medium, beams.q1)
    b2 = _residual_k2(k, beams.delta_q)
    L = _window_from_b2(b2, omega, medium, beams, K)
    out = 1j * medium.coupling * K * (1.0 - L)
    return out[()] if np.ndim(out) == 0 else out


def filter_multiplier(field, params):
    """The k-space factor exp(i p(k) dz) on the field's DFT grid."""
    medium, beams = params.medium, params.beams
    kx, ky = field.wavenumbers()
    kx2, ky2 = np.meshgrid(kx, ky)
    dq = beams.delta_q
    b2 = (kx2 + dq[0]) ** 2 + (ky2 + dq[1]) ** 2 + dq[2] ** 2
    K = one_photon_K(beams.Delta_1, medium, beams.q1)
    L = _window_from_b2(b2, 0.0, medium, beams, K)
    p = 1j * medium.coupling * K * (1.0 - L)
    if params.include_diffraction:
        p = p - (kx2**2 + ky2**2) / (2.0 * beams.q1)
    return np.exp(1j * p * params.propagation_length)


def _aliasing_fraction(field):
    spec = np.abs(np.fft.fft2(np.fft.ifftshift(field.values))) ** 2
    total = spec.sum()
    if total == 0:
        return 0.0
    fx = np.abs(np.fft.fftfreq(field.nx)) * 2.0
    fy = np.abs(np.fft.fftfreq(field.ny)) * 2.0
    edge = (fx[None, :] > 1 - ALIAS_BAND) | (fy[:, None] > 1 - ALIAS_BAND)
    return float(spec[edge].sum() / total)


def apply_filter(field_in, params):
    """
    Propagate a stationary probe image through the medium.

    FFT, multiply each component by exp(i p(k) dz) with
    p = -k^2/(2 q1) [if diffraction] + chi31_dicke(k, 0), inverse FFT.

    Warns with AliasingWarning if more than 1% of the spectral energy sits
    in the outer 10% of k-space.
    """
    if not isinstance(field_in, ComplexField2D):
        raise TypeError("field_in must be a ComplexField2D")
    frac = _aliasing_fraction(field_in)
    if frac > ALIAS_ENERGY_FRACTION:
        warnings.warn(
            f"{100 * frac:.1f}% of spectral energy lies near the Nyquist limit; "
            "the field is not band limited on this grid",
            AliasingWarning,
            stacklevel=2,
        )
    return spectral_multiply(field_in, filter_multiplier(field_in, params))


def angular_transmission(theta, q, medium, beams):
    """
    EIT transmission of a probe tilted by ``theta`` relative to the pump,
    Re[K|W2|^2] / (Gamma_hom + D q^2 theta^2).
    """
    _require_diffusive(medium)
    theta = np.asarray(theta, dtype=float)
    K = one_photon_K(beams.Delta_1, medium, beams.q1)
    ghom = medium.Gamma_21 + K.real * beams.pump_power
    out = (K * beams.pump_power).real / (ghom + medium.D * (q * theta) ** 2)
    return out[()] if out.ndim == 0 else out

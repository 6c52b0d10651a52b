"""
General (Doppler-to-Dicke) probe susceptibility, transmission scans and
linewidth extraction.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .special import brownian_h
from .velocity import g_set_grid, one_photon_K

LN2 = math.log(2.0)
# a**2 = 2/ln 2 in the Brownian interpolation of the linewidth
A_SQUARED = 2.0 / LN2


class GridTooNarrowError(ValueError):
    """The absorption minimum sits on the edge of the detuning grid."""


class NoCrossingError(ValueError):
    """The half-maximum level is never crossed on one side of the peak."""


@dataclass
class Spectrum:
    """Sampled response on a strictly increasing axis.

    ``values`` holds the quantity named by ``normalization`` ('raw' or
    'unit-peak'); ``raw`` optionally keeps the underlying complex response
    (susceptibility or absorbed power) on the same axis.
    """

    axis: np.ndarray
    values: np.ndarray
    normalization: str = "raw"
    raw: np.ndarray = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.axis = np.asarray(self.axis, dtype=float)
        self.values = np.asarray(self.values)
        if self.axis.ndim != 1 or self.values.shape != self.axis.shape:
            raise ValueError("axis and values must be 1D arrays of equal length")
        if np.any(np.diff(self.axis) <= 0):
            raise ValueError("spectrum axis must be strictly increasing")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("spectrum values must be finite")
        if self.normalization not in ("raw", "unit-peak"):
            raise ValueError(f"unknown normalization {self.normalization!r}")


@dataclass(frozen=True)
class FwhmResult:
    width: float
    peak_height: float
    method: str = "interpolated-half-crossings"


def chi31_from_gset(gs, medium, beams):
    """Susceptibility from a (possibly vectorised) G-set.

    Uses the algebraically equivalent form
    chi = i*coupling*[i G1 (1 - i g G2) - g |W|^2 G^2] / G_d,
    which has no 1/gamma and is exact at gamma = 0.
    """
    g = medium.gamma
    power = beams.pump_power
    gd = gs.one_minus_igG1 * gs.one_minus_igG2 + g * g * power * gs.G**2
    num = 1j * gs.G1 * gs.one_minus_igG2 - g * power * gs.G**2
    return 1j * medium.coupling * num / gd


def chi31_general(k_perp, omega, medium, beams, delta=None, rtol=1e-10):
    """
    Probe susceptibility chi31(k, omega) without Doppler or Dicke limits.

    Parameters
    ----------
    k_perp : float or vector
        Transverse wave vector, 1/m.
    omega : float
        Envelope frequency, 1/s.
    medium, beams : MediumParams, BeamParams
    delta : array_like, optional
        Raman detunings overriding ``beams.Delta`` (vectorised evaluation).

    Returns
    -------
    complex or ndarray, 1/m
    """
    scalar = delta is None
    deltas = np.atleast_1d(beams.Delta if scalar else np.asarray(delta, dtype=float))
    gs = g_set_grid(deltas, k_perp, omega, medium, beams, rtol=rtol)
    chi = chi31_from_gset(gs, medium, beams)
    return complex(chi[0]) if scalar else chi


def normalized_transmission(delta_grid, im_chi):
    """Unit-peak EIT transmission from Im chi sampled on a detuning grid.

    The baseline is the mean of the two endpoint values.
    """
    im_chi = np.asarray(im_chi, dtype=float)
    base = 0.5 * (im_chi[0] + im_chi[-1])
    depth = base - im_chi.min()
    if depth <= 1e-12 * max(abs(base), 1e-300):
        return np.zeros_like(im_chi)
    imin = int(np.argmin(im_chi))
    if imin in (0, im_chi.size - 1):
        raise GridTooNarrowError("transparency peak lies at the edge of the detuning grid")
    return (base - im_chi) / depth


def transmission_scan(delta_grid, k_perp, medium, beams, omega=0.0, rtol=1e-10):
    """
    Normalised EIT transmission T(Delta) = (base - Im chi) / (base - min Im chi).

    Raises GridTooNarrowError if the absorption minimum is at a grid endpoint.
    """
    delta_grid = np.asarray(delta_grid, dtype=float)
    chi = chi31_general(k_perp, omega, medium, beams, delta=delta_grid, rtol=rtol)
    t = normalized_transmission(delta_grid, chi.imag)
    return Spectrum(delta_grid, t, "unit-peak", raw=chi)


def fwhm(spectrum):
    """
    Full width at half maximum by linear interpolation of the half-level
    crossings on either side of the global peak.
    """
    x, y = spectrum.axis, np.real(spectrum.values)
    ipk = int(np.argmax(y))
    peak = float(y[ipk])
    half = 0.5 * peak
    if ipk == 0 or ipk == y.size - 1:
        raise NoCrossingError("peak lies on the grid edge")

    left = np.nonzero(y[:ipk] < half)[0]
    right = np.nonzero(y[ipk + 1:] < half)[0]
    if left.size == 0 or right.size == 0:
        raise NoCrossingError("half maximum not crossed on both sides of the peak")
    i = left[-1]
    x_left = x[i] + (half - y[i]) * (x[i + 1] - x[i]) / (y[i + 1] - y[i])
    j = ipk + 1 + right[0]
    x_right = x[j - 1] + (half - y[j - 1]) * (x[j] - x[j - 1]) / (y[j] - y[j - 1])
    return FwhmResult(float(x_right - x_left), peak)


def fwhm_analytic(k, medium):
    """
    Motional EIT linewidth across the Doppler-Dicke transition,
    FWHM = 2 (2/a^2) gamma H(a v_th k / gamma), a^2 = 2/ln 2.

    Reduces to 2 D k^2 for small k and 2 sqrt(2 ln 2) v_th k for large k.
    """
    k = np.abs(np.asarray(k, dtype=float))
    a = math.sqrt(A_SQUARED)
    if medium.gamma == 0:
        out = (4.0 / a) * medium.v_th * k
    else:
        x = a * medium.v_th * k / medium.gamma
        out = 2.0 * (2.0 / A_SQUARED) * medium.gamma * brownian_h(x)
    return out[()] if np.ndim(out) == 0 else out


def homogeneous_floor(medium, beams):
    """Detuning-independent part of the FWHM, 2 (Gamma_21 + Re K |Omega_2|^2)."""
    k1 = one_photon_K(beams.Delta_1, medium, beams.q1)
    return 2.0 * (medium.Gamma_21 + k1.real * beams.pump_power)


def fwhm_detuning_grid(expected_hwhm, n_core=301, core=3.0, n_wing=120, reach=2000.0):
    """
    Symmetric non-uniform detuning grid for linewidth measurements: a dense
    uniform core of +-core half-widths and geometric wings out to
    +-reach half-widths, so the endpoint baseline sits far in the wings.
    """
    core_pts = np.linspace(-core, core, n_core)
    wing = np.geomspace(core, reach, n_wing + 1)[1:]
    u = np.concatenate([-wing[::-1], core_pts, wing])
    return u * expected_hwhm


def measure_fwhm(k, medium, beams, rtol=1e-10, reach=2000.0):
    """
    Numerically measured FWHM of the general-solution EIT window at
    wave vector ``k`` (along x, stationary), on a grid scaled by the
    expected width.
    """
    expected = 0.5 * (fwhm_analytic(k, medium) + homogeneous_floor(medium, beams))
    grid = fwhm_detuning_grid(expected, reach=reach)
    spec = transmission_scan(grid, k, medium, beams, rtol=rtol)
    return fwhm(spec).width

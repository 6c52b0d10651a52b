"""
Thermal-velocity averages of the Lambda-system resonance denominators.

The general G-set integrals are three-dimensional Gaussian averages, but the
integrand depends on the velocity only through its projections on the two
vectors ``a = q1 z + k`` (one-photon Doppler) and ``b = delta_q + k``
(two-photon Doppler). The component orthogonal to span(a, b) integrates out
exactly. Inside the plane the denominator is linear in the component ``t``
orthogonal to ``b``, so that direction is integrated in closed form with the
Faddeeva function; the remaining component ``s`` along ``b`` is integrated by
composite Gauss-Legendre panels graded geometrically towards the complex
poles of the integrand.
"""

import math
from dataclasses import dataclass

import numpy as np

from .params import as_kvec
from .special import faddeeva, plasma_integral

SQRT_2 = math.sqrt(2.0)
# the s-integral is truncated at this many thermal velocities
VELOCITY_CUTOFF = 9.0
MIN_IMAG_FRACTION = 1e-12


class ConvergenceError(ArithmeticError):
    """Raised when an adaptive quadrature reaches its cap without converging."""

    def __init__(self, message, residual):
        super().__init__(f"{message} (achieved residual {residual:.3e})")
        self.residual = residual


def voigt_G1(Delta_1, medium, q1):
    """
    One-photon Doppler integral G1(Delta_1) in closed form.

    G1 = -i sqrt(pi/2) w(zeta) / (v_th q1),
    zeta = (Delta_1 + i(Gamma_d + gamma)) / (sqrt(2) v_th q1).

    Parameters
    ----------
    Delta_1 : float or ndarray
        One-photon detuning, 1/s.
    medium : MediumParams
    q1 : float
        Wave number along which the Doppler shift acts, 1/m.

    Returns
    -------
    complex or ndarray, units of s.
    """
    if not q1 > 0:
        raise ValueError("q1 must be > 0")
    doppler = medium.v_th * q1
    width = max(medium.Gamma_d + medium.gamma, MIN_IMAG_FRACTION * doppler)
    zeta = (np.asarray(Delta_1, dtype=float) + 1j * width) / (SQRT_2 * doppler)
    out = -1j * math.sqrt(math.pi / 2.0) * faddeeva(zeta) / doppler
    return out


def one_photon_K(Delta_1, medium, q1):
    """One-photon complex spectrum K = i G1 / (1 - i gamma G1), units of s."""
    g1 = voigt_G1(Delta_1, medium, q1)
    return 1j * g1 / (1.0 - 1j * medium.gamma * g1)


@dataclass(frozen=True)
class GSet:
    """The coupled velocity integrals G (s^2), G1 (s), G2 (s).

    ``one_minus_igG1`` and ``one_minus_igG2`` hold 1 - i*gamma*G1 and
    1 - i*gamma*G2 computed from cancellation-free integrands; in the Dicke
    regime the latter is much smaller than 1 and cannot be recovered from
    G2 to full precision.
    """

    G: complex
    G1: complex
    G2: complex
    one_minus_igG1: complex
    one_minus_igG2: complex
    order: int = 0
    residual: float = 0.0


@dataclass(frozen=True)
class _Geometry:
    a_s: float      # projection of a on the s axis
    alpha: float    # projection of a on the t axis
    b_norm: float   # |b|


def _plane_geometry(q1, k, delta_q):
    a = np.array([k[0], k[1], k[2] + q1])
    b = np.array(delta_q) + np.array(k)
    b_norm = float(np.linalg.norm(b))
    a_norm = float(np.linalg.norm(a))
    if b_norm <= 1e-300 * max(a_norm, 1.0):
        return _Geometry(0.0, a_norm, 0.0)
    e1 = b / b_norm
    a_s = float(a @ e1)
    alpha = float(np.linalg.norm(a - a_s * e1))
    if alpha <= 1e-14 * a_norm:
        alpha = 0.0
    return _Geometry(a_s, alpha, b_norm)


def _quadratic_roots(qa, qb, qc):
    """Roots of qa s^2 + qb s + qc (arrays); degenerate cases return NaN."""
    with np.errstate(divide="ignore", invalid="ignore"):
        disc = np.sqrt(qb * qb - 4 * qa * qc)
        sign = np.where((np.conj(qb) * disc).real >= 0, 1.0, -1.0)
        q = -0.5 * (qb + sign * disc)
        r1 = q / qa
        r2 = qc / q
    return r1, r2


def _singular_points(geom, v_th, c1, b0, power):
    """Real positions and widths (in s) of the near-real poles, shape (n, m)."""
    pts, widths = [], []
    if geom.b_norm > 0:
        root = b0 / geom.b_norm
        pts.append(root.real)
        widths.append(np.abs(root.imag))
    # zeros of (c1 - a_s s) B(s) - power, i.e. of xi_d at t = 0
    if geom.a_s != 0 and geom.b_norm > 0:
        qa = np.full_like(c1, geom.a_s * geom.b_norm)
        qb = -(geom.a_s * b0 + geom.b_norm * c1)
        qc = c1 * b0 - power
        for r in _quadratic_roots(qa, qb, qc):
            pts.append(r.real)
            widths.append(np.abs(r.imag))
    elif geom.a_s != 0:
        root = (c1 - power / b0) / geom.a_s
        pts.append(root.real)
        widths.append(np.abs(root.imag))
    elif geom.b_norm > 0 and power > 0:
        root = (b0 - power / c1) / geom.b_norm
        pts.append(root.real)
        widths.append(np.abs(root.imag))
    if not pts:
        return np.zeros((c1.size, 0)), np.zeros((c1.size, 0))
    pts = np.nan_to_num(np.stack(pts, axis=1), nan=0.0)
    widths = np.nan_to_num(np.stack(widths, axis=1), nan=v_th)
    return pts, np.maximum(widths, 1e-9 * v_th)


def _breakpoints(v_th, pts, widths):
    """Panel edges per row: uniform coarse edges plus geometric grading."""
    lim = VELOCITY_CUTOFF * v_th
    n_rows = pts.shape[0]
    base = np.linspace(-lim, lim, 37)
    edges = [np.broadcast_to(base, (n_rows, base.size))]
    if pts.shape[1]:
        span = 2 * lim
        levels = int(np.ceil(np.log2(span / widths.min()))) + 2
        scale = widths[..., None] * 2.0 ** np.arange(levels)
        centre = pts[..., None]
        graded = np.concatenate([centre - scale, centre + scale, centre], axis=2)
        edges.append(graded.reshape(n_rows, -1))
    edges = np.clip(np.concatenate(edges, axis=1), -lim, lim)
    return np.sort(edges, axis=1)


def _gauss_legendre_nodes(edges, order):
    x, w = np.polynomial.legendre.leggauss(order)
    lo, hi = edges[:, :-1, None], edges[:, 1:, None]
    half = 0.5 * (hi - lo)
    nodes = (0.5 * (hi + lo) + half * x).reshape(edges.shape[0], -1)
    weights = (half * w).reshape(edges.shape[0], -1)
    return nodes, weights


def _t_integral(c, alpha, v_th):
    """V(c) = <1/(c - alpha t)> over a 1D Maxwellian in t."""
    if alpha * v_th == 0:
        return 1.0 / c
    scale = SQRT_2 * alpha * v_th
    return plasma_integral(c / scale) / scale


def _integrate(order, geom, medium, c1, b0, power, edges):
    v_th = medium.v_th
    s, w = _gauss_legendre_nodes(edges, order)
    weight = w * np.exp(-0.5 * (s / v_th) ** 2) / (math.sqrt(2 * math.pi) * v_th)
    B = b0[:, None] - geom.b_norm * s
    xi2_bare = B - 1j * medium.gamma
    C = c1[:, None] - geom.a_s * s - power / B
    V = _t_integral(C, geom.alpha, v_th)
    inv_b = 1.0 / B
    gamma = medium.gamma
    out = np.stack([
        (weight * V * inv_b).sum(axis=1),
        (weight * V).sum(axis=1),
        (weight * (inv_b + power * V * inv_b**2)).sum(axis=1),
        (weight * (1.0 - 1j * gamma * V)).sum(axis=1),
        (weight * (xi2_bare * inv_b - 1j * gamma * power * V * inv_b**2)).sum(axis=1),
    ])
    return out


def g_set_grid(deltas, k_perp, omega, medium, beams, rtol=1e-10, max_order=64):
    """
    Vectorised G-set over an array of Raman detunings.

    Returns a GSet whose fields are arrays shaped like ``deltas``. The
    Gauss-Legendre order per panel starts at 8 and doubles until successive
    results agree to ``rtol`` (relative, per integral); ConvergenceError is
    raised if ``max_order`` is reached first.
    """
    deltas = np.atleast_1d(np.asarray(deltas, dtype=float))
    shape = deltas.shape
    deltas = deltas.ravel()
    k = as_kvec(k_perp)
    geom = _plane_geometry(beams.q1, k, beams.delta_q)
    floor = MIN_IMAG_FRACTION * medium.v_th * beams.q1
    gamma1 = max(medium.Gamma_d + medium.gamma, floor)
    gamma2 = max(medium.Gamma_21 + medium.gamma, floor)
    c1 = np.full(deltas.shape, omega + beams.Delta_1 + 1j * gamma1, dtype=complex)
    b0 = omega + deltas + 1j * gamma2
    power = beams.pump_power
    pts, widths = _singular_points(geom, medium.v_th, c1, b0, power)
    edges = _breakpoints(medium.v_th, pts, widths)

    order = 8
    prev = _integrate(order, geom, medium, c1, b0, power, edges)
    while True:
        order *= 2
        cur = _integrate(order, geom, medium, c1, b0, power, edges)
        scale = np.maximum(np.abs(cur), 1e-300)
        residual = float(np.max(np.abs(cur - prev) / scale))
        if residual < rtol:
            break
        if order >= max_order:
            raise ConvergenceError("G-set quadrature did not converge", residual)
        prev = cur
    vals = [v.reshape(shape) for v in cur]
    return GSet(*vals, order=order, residual=residual)


def g_set(k_perp, omega, medium, beams, rtol=1e-10, max_order=64):
    """
    The G, G1, G2 integrals at the Raman detuning ``beams.Delta``.

    Parameters
    ----------
    k_perp : float or 2/3-vector
        Transverse wave vector of the probe envelope component, 1/m.
    omega : float
        Temporal frequency of the envelope component, 1/s.
    medium : MediumParams
    beams : BeamParams

    Returns
    -------
    GSet with scalar complex fields.
    """
    res = g_set_grid([beams.Delta], k_perp, omega, medium, beams, rtol, max_order)
    return GSet(complex(res.G[0]), complex(res.G1[0]), complex(res.G2[0]),
                complex(res.one_minus_igG1[0]), complex(res.one_minus_igG2[0]),
                res.order, res.residual)

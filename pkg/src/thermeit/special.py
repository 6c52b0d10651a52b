"""
Complex special functions used by the lineshape and beam-geometry formulas.

All functions accept scalars or numpy arrays and broadcast elementwise.
Nothing here depends on scipy; the test-suite checks against mpmath.
"""

import math

import numpy as np

EULER_GAMMA = 0.5772156649015329
SQRT_PI = math.sqrt(math.pi)

# Weideman rational approximation is used inside this radius, the Laplace
# continued fraction outside it. Both are at ~1e-15 relative error at the seam.
FADDEEVA_CF_RADIUS = 8.0
_WEIDEMAN_N = 40
_CF_TERMS = 24

# Ascending series for I_nu inside this radius, asymptotic expansion outside.
BESSEL_I_SERIES_RADIUS = 12.0
_BESSEL_I_SERIES_TERMS = 70
# Series for K_nu inside this radius, Temme/Steed continued fraction outside.
BESSEL_K_SERIES_RADIUS = 2.0
_BESSEL_K_SERIES_TERMS = 30
_BESSEL_K_CF_MAXITER = 20000

# Below this |x| the Brownian function uses its Taylor series.
BROWNIAN_SERIES_RADIUS = 1e-4


def _weideman_coefficients(n):
    m = 2 * n
    k = np.arange(-m + 1, m)
    length = math.sqrt(n / math.sqrt(2.0))
    t = length * np.tan(k * np.pi / (2 * m))
    f = np.concatenate([[0.0], np.exp(-t**2) * (length**2 + t**2)])
    a = np.real(np.fft.fft(np.fft.fftshift(f))) / (2 * m)
    return length, a[1:n + 1][::-1].copy()


_W_L, _W_COEF = _weideman_coefficients(_WEIDEMAN_N)


def _as_complex_array(z, name="z"):
    arr = np.asarray(z, dtype=complex)
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must be finite")
    return arr


def _faddeeva_upper(z):
    """w(z) for Im z >= 0 (no argument checks)."""
    out = np.empty_like(z)
    big = np.abs(z) >= FADDEEVA_CF_RADIUS
    if np.any(~big):
        zs = z[~big]
        denom = _W_L - 1j * zs
        p = np.polyval(_W_COEF, (_W_L + 1j * zs) / denom)
        out[~big] = 2.0 * p / denom**2 + (1.0 / SQRT_PI) / denom
    if np.any(big):
        zb = z[big]
        r = np.zeros_like(zb)
        for k in range(_CF_TERMS, 0, -1):
            r = (0.5 * k) / (zb - r)
        out[big] = (1j / SQRT_PI) / (zb - r)
    return out


def faddeeva(z):
    """
    Faddeeva function w(z) = exp(-z**2) erfc(-i z).

    The upper half-plane is evaluated directly; for Im z < 0 the reflection
    w(z) = 2 exp(-z**2) - w(-z) is applied, which may overflow far from the
    real axis (where w itself is not representable).

    Parameters
    ----------
    z : complex or array_like of complex

    Returns
    -------
    complex or ndarray
    """
    arr = _as_complex_array(z)
    flat = arr.ravel()
    out = np.empty_like(flat)
    lower = flat.imag < 0
    upper_arg = np.where(lower, -flat, flat)
    wu = _faddeeva_upper(upper_arg)
    out[~lower] = wu[~lower]
    if np.any(lower):
        zl = flat[lower]
        with np.errstate(over="ignore", invalid="ignore"):
            out[lower] = 2.0 * np.exp(-zl * zl) - wu[lower]
    out = out.reshape(arr.shape)
    return out[()] if out.ndim == 0 else out


def plasma_integral(z):
    """
    Principal Gaussian Cauchy integral ``(1/sqrt(pi)) ∫ exp(-t²)/(z - t) dt``.

    Valid on both half-planes (z off the real axis, or on it with the upper
    limit). Equals ``-i sqrt(pi) w(z)`` for Im z >= 0 and
    ``+i sqrt(pi) conj(w(conj z))`` for Im z < 0.
    """
    arr = _as_complex_array(z)
    lower = arr.imag < 0
    zu = np.where(lower, np.conj(arr), arr)
    w = faddeeva(zu)
    out = np.where(lower, 1j * SQRT_PI * np.conj(w), -1j * SQRT_PI * w)
    return out[()] if np.ndim(out) == 0 else out


def _check_order(order):
    if order not in (0, 1):
        raise ValueError(f"only orders 0 and 1 are supported, got {order!r}")


def _bessel_i_series(order, z):
    q = 0.25 * z * z
    term = np.ones_like(z) if order == 0 else 0.5 * z
    total = term.copy()
    for k in range(1, _BESSEL_I_SERIES_TERMS):
        term = term * q / (k * (k + order))
        total = total + term
    return total


def _asymptotic_coefficients(order, nterms):
    mu = 4.0 * order * order
    coef = [1.0]
    for k in range(1, nterms):
        coef.append(coef[-1] * (mu - (2 * k - 1) ** 2) / (k * 8.0))
    return np.array(coef)


def _asymptotic_sums(order, z, nterms=40):
    """Return (sum (-1)^k a_k/z^k, sum a_k/z^k) truncated at the smallest term."""
    a = _asymptotic_coefficients(order, nterms)
    alt = np.zeros_like(z)
    plain = np.zeros_like(z)
    inv = 1.0 / z
    power = np.ones_like(z)
    prev = np.full(z.shape, np.inf)
    active = np.ones(z.shape, dtype=bool)
    for k in range(nterms):
        term = a[k] * power
        mag = np.abs(term)
        active &= mag <= prev
        sign = -1.0 if k % 2 else 1.0
        alt = np.where(active, alt + sign * term, alt)
        plain = np.where(active, plain + term, plain)
        prev = np.where(active, mag, prev)
        power = power * inv
    return alt, plain


def bessel_i(order, z, scaled=False):
    """
    Modified Bessel function of the first kind I_0 or I_1 of complex argument.

    Parameters
    ----------
    order : {0, 1}
    z : complex or array_like
        Re z >= 0 is assumed, |z| <= 1e3.
    scaled : bool
        If True return ``exp(-z) * I(z)``, which stays finite for large Re z.

    Raises
    ------
    OverflowError
        If ``scaled`` is False and Re z > 700.
    """
    _check_order(order)
    arr = _as_complex_array(z)
    if not scaled and np.any(arr.real > 700.0):
        raise OverflowError("bessel_i overflows for Re(z) > 700; use scaled=True")
    flat = arr.ravel()
    out = np.empty_like(flat)
    small = np.abs(flat) <= BESSEL_I_SERIES_RADIUS
    if np.any(small):
        zs = flat[small]
        val = _bessel_i_series(order, zs)
        out[small] = val * np.exp(-zs) if scaled else val
    if np.any(~small):
        zb = flat[~small]
        alt, plain = _asymptotic_sums(order, zb)
        pref = 1.0 / np.sqrt(2.0 * np.pi * zb)
        # connection term, relevant only close to the imaginary axis
        phase = np.where(zb.imag >= 0, 1.0, -1.0)
        second = phase * 1j * np.exp(phase * 1j * np.pi * order) * plain
        if scaled:
            out[~small] = pref * (alt + second * np.exp(-2.0 * zb))
        else:
            out[~small] = pref * (np.exp(zb) * alt + np.exp(-zb) * second)
    out = out.reshape(arr.shape)
    return out[()] if out.ndim == 0 else out


def _bessel_k_series(order, z):
    q = 0.25 * z * z
    log_half = np.log(0.5 * z)
    i_val = _bessel_i_series(order, z)
    # psi(k+1) = -gamma + H_k
    harmonic = 0.0
    if order == 0:
        term = np.ones_like(z)
        total = np.zeros_like(z)
        for k in range(1, _BESSEL_K_SERIES_TERMS):
            harmonic += 1.0 / k
            term = term * q / (k * k)
            total = total + term * harmonic
        return -(log_half + EULER_GAMMA) * i_val + total
    term = np.ones_like(z)
    total = (2.0 * (-EULER_GAMMA) + 1.0) * term  # psi(1) + psi(2)
    h_next = 1.0
    for k in range(1, _BESSEL_K_SERIES_TERMS):
        harmonic += 1.0 / k
        h_next += 1.0 / (k + 1)
        term = term * q / (k * (k + 1))
        total = total + term * (2.0 * (-EULER_GAMMA) + harmonic + h_next)
    return 1.0 / z + log_half * i_val - 0.25 * z * total


def _bessel_k_cf2(z):
    """Temme's CF2 via Steed's algorithm; returns scaled (exp(z) K0, exp(z) K1)."""
    eps = 1e-16
    b = 2.0 * (1.0 + z)
    d = 1.0 / b
    h = d.copy()
    delh = d.copy()
    q1 = np.zeros_like(z)
    q2 = np.ones_like(z)
    a1 = 0.25
    q = np.full_like(z, a1)
    c = np.full_like(z, a1)
    a = -a1
    s = 1.0 + q * delh
    done = np.zeros(z.shape, dtype=bool)
    for i in range(1, _BESSEL_K_CF_MAXITER):
        a -= 2 * i
        c = -a * c / (i + 1.0)
        qnew = (q1 - b * q2) / a
        q1, q2 = q2, qnew
        q = q + c * qnew
        b = b + 2.0
        d = 1.0 / (b + a * d)
        delh = (b * d - 1.0) * delh
        h = np.where(done, h, h + delh)
        dels = q * delh
        s = np.where(done, s, s + dels)
        done |= np.abs(dels) < eps * np.abs(s)
        if done.all():
            break
    else:
        raise ArithmeticError("bessel_k continued fraction did not converge")
    h = a1 * h
    k0 = np.sqrt(np.pi / (2.0 * z)) / s
    k1 = k0 * (z + 0.5 - h) / z
    return k0, k1


def bessel_k(order, z, scaled=False):
    """
    Modified Bessel function of the second kind K_0 or K_1, Re z > 0.

    If ``scaled`` is True returns ``exp(z) * K(z)``.

    Raises
    ------
    ValueError
        At z = 0 (logarithmic/pole singularity) or for Re z <= 0.
    """
    _check_order(order)
    arr = _as_complex_array(z)
    if np.any(arr == 0):
        raise ValueError("bessel_k is singular at z = 0")
    if np.any(arr.real <= 0):
        raise ValueError("bessel_k requires Re(z) > 0")
    flat = arr.ravel()
    out = np.empty_like(flat)
    small = np.abs(flat) <= BESSEL_K_SERIES_RADIUS
    if np.any(small):
        zs = flat[small]
        val = _bessel_k_series(order, zs)
        out[small] = val * np.exp(zs) if scaled else val
    if np.any(~small):
        zb = flat[~small]
        k0, k1 = _bessel_k_cf2(zb)
        val = k0 if order == 0 else k1
        out[~small] = val if scaled else val * np.exp(-zb)
    out = out.reshape(arr.shape)
    return out[()] if out.ndim == 0 else out


def brownian_h(x):
    """
    H(x) = exp(-x) - 1 + x, the velocity self-correlation integral of
    Brownian motion. Uses the Taylor series near the origin.
    """
    arr = np.asarray(x)
    is_complex = np.iscomplexobj(arr)
    arr = arr.astype(complex if is_complex else float)
    small = np.abs(arr) < BROWNIAN_SERIES_RADIUS
    with np.errstate(over="ignore"):
        direct = np.expm1(-arr) + arr
    series = arr**2 / 2 - arr**3 / 6 + arr**4 / 24
    out = np.where(small, series, direct)
    return out[()] if out.ndim == 0 else out

"""
Kinetic Monte-Carlo oracle for the thermal Lambda-system susceptibility.

Each atom carries the slowly varying optical and ground-state coherences
with the local plane-wave phases removed,

    d s31/dt = (i(w + Delta_1) - i a.v - Gamma_d) s31 + i W2 s21 + i E
    d s21/dt = (i(w + Delta)   - i b.v - Gamma_21) s21 + i W2* s31

with a = q1 z + k, b = dq + k and E the probe drive. Between collisions the
velocity is constant and this linear system is propagated exactly with the
closed-form 2x2 matrix exponential. Strong (BGK) collisions occur at
exponentially distributed times with rate gamma and redraw the velocity
from the Maxwellian; the coherences, which depend on position only, are
kept. The susceptibility is coupling * <s31> / E at statistical steady
state.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .params import as_kvec
from .velocity import one_photon_K

STEADY_WINDOW_FACTOR = 5.0
# probe Rabi amplitude (1/s) of the linear-response runs; chi is normalised by it
WEAK_PROBE = 1e-3
NONSTATIONARY_SIGMAS = 3.0
DT_SAFETY = 0.1
# default jackknife blocking
MIN_BLOCKS = 20
MAX_CHUNK = 5000


class NonStationaryError(ArithmeticError):
    """The two averaging windows disagree by more than 3 standard errors."""


@dataclass
class AtomState:
    """Ensemble state: coherences (n_detunings, n), velocities and positions (n, 3).

    Coherences are for the probe drive used in the run; with a weak drive
    |rho21| must stay below 1, anything else signals a blow-up.
    """

    rho31: np.ndarray
    rho21: np.ndarray
    v: np.ndarray
    r: np.ndarray

    def __post_init__(self):
        if not (np.all(np.isfinite(self.rho31)) and np.all(np.isfinite(self.rho21))):
            raise ArithmeticError("non-finite coherence: integration blew up")
        if np.any(np.abs(self.rho21) > 1.0):
            raise ArithmeticError(
                "ground-state coherence exceeded 1: probe drive is not weak or integration blew up")


@dataclass(frozen=True)
class McConfig:
    """
    Monte-Carlo run settings.

    ``chunk_size`` atoms share one random stream and form one jackknife
    block; results do not depend on how chunks are scheduled. The default
    gives at least ``MIN_BLOCKS`` blocks of at most ``MAX_CHUNK`` atoms.
    """

    n_atoms: int
    dt: float
    t_total: float
    seed: int
    chunk_size: Optional[int] = None

    def __post_init__(self):
        if int(self.n_atoms) < 1:
            raise ValueError("n_atoms must be >= 1")
        if not self.dt > 0 or not self.t_total > 0:
            raise ValueError("dt and t_total must be > 0")
        if self.seed is None or not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must be an integer in [0, 2**64)")
        if self.chunk_size is not None and int(self.chunk_size) < 1:
            raise ValueError("chunk_size must be >= 1")

    @property
    def block_size(self):
        if self.chunk_size is not None:
            return int(self.chunk_size)
        return max(1, min(MAX_CHUNK, -(-int(self.n_atoms) // MIN_BLOCKS)))


@dataclass
class McResult:
    deltas: np.ndarray
    chi: np.ndarray
    stderr: np.ndarray
    window_means: np.ndarray
    window_stderr: np.ndarray
    final_state: AtomState
    n_steps: int
    window: float


def max_time_step(medium, beams):
    """Largest dt allowed: 0.1 / max(Gamma_d + gamma, |Delta_1|, v_th q1)."""
    fastest = max(medium.Gamma_d + medium.gamma, abs(beams.Delta_1), medium.v_th * beams.q1)
    return DT_SAFETY / fastest


def averaging_window(medium, beams):
    """Window length 5 / (Gamma_21 + Re K |Omega_2|^2)."""
    K = one_photon_K(beams.Delta_1, medium, beams.q1)
    rate = medium.Gamma_21 + K.real * beams.pump_power
    if not rate > 0:
        raise ValueError("steady state needs Gamma_21 + Re K |Omega_2|^2 > 0")
    return STEADY_WINDOW_FACTOR / rate


def _propagator(m11, m22, off12, off21, h):
    """Entries of exp(M h) for M = [[m11, off12], [off21, m22]]."""
    m = 0.5 * (m11 + m22)
    d = 0.5 * (m11 - m22)
    mu2 = d * d + off12 * off21
    x2 = mu2 * h * h
    small = np.abs(x2) < 1e-6
    with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
        mu = np.sqrt(mu2)
        c = np.where(small, 1 + x2 / 2 + x2 * x2 / 24, np.cosh(mu * h))
        s = np.where(small, h * (1 + x2 / 6 + x2 * x2 / 120), np.sinh(mu * h) / mu)
    em = np.exp(m * h)
    return em * (c + s * d), em * s * off12, em * s * off21, em * (c - s * d)


def _fixed_point(m11, m22, off12, off21, drive):
    det = m11 * m22 - off12 * off21
    return -1j * drive * m22 / det, 1j * drive * off21 / det


class _Chunk:
    """A block of atoms sharing a random stream, for every detuning at once."""

    def __init__(self, rng, n, deltas, avec, bvec, medium, beams, omega, drive):
        self.rng = rng
        self.n = n
        self.v_th = medium.v_th
        self.gamma = medium.gamma
        self.avec, self.bvec = avec, bvec
        self.base11 = 1j * (omega + beams.Delta_1) - medium.Gamma_d
        self.base22 = 1j * (omega + deltas[:, None]) - medium.Gamma_21
        self.off12 = 1j * beams.Omega_2
        self.off21 = 1j * np.conj(beams.Omega_2)
        self.drive = drive
        self.v = rng.standard_normal((n, 3)) * self.v_th
        self.r = np.zeros((n, 3))
        self.t_next = self._waiting(n)
        m11, m22 = self._coefficients(self.v)
        self.s31, self.s21 = _fixed_point(m11, m22, self.off12, self.off21, drive)

    def _waiting(self, n):
        if self.gamma == 0:
            return np.full(n, np.inf)
        return self.rng.exponential(1.0 / self.gamma, n)

    def _coefficients(self, v):
        m11 = self.base11 - 1j * (v @ self.avec)
        m22 = self.base22 - 1j * (v @ self.bvec)[None, :]
        m11 = np.broadcast_to(m11[None, :], m22.shape)
        return m11, m22

    def cache(self, dt, idx=None):
        v = self.v if idx is None else self.v[idx]
        m11, m22 = self._coefficients(v)
        e = _propagator(m11, m22, self.off12, self.off21, dt)
        fp = _fixed_point(m11, m22, self.off12, self.off21, self.drive)
        if idx is None:
            self.E = list(e)
            self.star = list(fp)
        else:
            for full, part in zip(self.E + self.star, list(e) + list(fp)):
                full[:, idx] = part

    def _advance(self, s31, s21, v, h):
        m11, m22 = self._coefficients(v)
        e11, e12, e21, e22 = _propagator(m11, m22, self.off12, self.off21, h)
        f31, f21 = _fixed_point(m11, m22, self.off12, self.off21, self.drive)
        d31, d21 = s31 - f31, s21 - f21
        return f31 + e11 * d31 + e12 * d21, f21 + e21 * d31 + e22 * d21

    def step(self, dt):
        hit = np.nonzero(self.t_next < dt)[0]
        if hit.size:
            s31_h, s21_h = self.s31[:, hit].copy(), self.s21[:, hit].copy()
        e11, e12, e21, e22 = self.E
        f31, f21 = self.star
        d31, d21 = self.s31 - f31, self.s21 - f21
        self.s31 = f31 + e11 * d31 + e12 * d21
        self.s21 = f21 + e21 * d31 + e22 * d21
        self.r += self.v * dt
        self.t_next -= dt
        if hit.size:
            self._collide(hit, s31_h, s21_h, dt)

    def _collide(self, hit, s31, s21, dt):
        v = self.v[hit].copy()
        r = self.r[hit] - self.v[hit] * dt
        tn = self.t_next[hit] + dt
        elapsed = np.zeros(hit.size)
        active = np.arange(hit.size)
        while active.size:
            h = tn[active]
            s31[:, active], s21[:, active] = self._advance(
                s31[:, active], s21[:, active], v[active], h[None, :])
            r[active] += v[active] * h[:, None]
            elapsed[active] += h
            v[active] = self.rng.standard_normal((active.size, 3)) * self.v_th
            tn[active] = self._waiting(active.size)
            active = active[elapsed[active] + tn[active] < dt]
        rest = dt - elapsed
        s31, s21 = self._advance(s31, s21, v, rest[None, :])
        r += v * rest[:, None]
        self.s31[:, hit], self.s21[:, hit] = s31, s21
        self.v[hit], self.r[hit] = v, r
        self.t_next[hit] = tn - rest
        self.cache(dt, hit)


def _jackknife(block_sums, block_counts):
    """Mean and jackknife standard error (complex, |.|) over blocks."""
    total, count = block_sums.sum(axis=0), block_counts.sum()
    mean = total / count
    g = block_counts.size
    if g < 2:
        return mean, np.full(mean.shape, np.inf)
    loo = (total[None, :] - block_sums) / (count - block_counts)[:, None]
    dev = loo - loo.mean(axis=0)
    var = (g - 1) / g * np.sum(np.abs(dev) ** 2, axis=0)
    return mean, np.sqrt(var)


def simulate_chi_grid(deltas, k_perp, omega, medium, beams, cfg, drive=WEAK_PROBE, check=True):
    """
    Monte-Carlo susceptibility at several Raman detunings.

    All detunings share the atomic trajectories. Averages are taken over
    the last two windows of length 5/(Gamma_21 + Re K |Omega_2|^2); the
    earlier part of the run is burn-in and must be at least one window.

    Returns
    -------
    McResult

    Raises
    ------
    ValueError
        If ``cfg.dt`` violates the time-step bound or ``t_total`` is too short.
    NonStationaryError
        If ``check`` and the two windows differ by more than 3 sigma.
    """
    deltas = np.atleast_1d(np.asarray(deltas, dtype=float))
    dt_max = max_time_step(medium, beams)
    if cfg.dt > dt_max * (1 + 1e-12):
        raise ValueError(f"dt = {cfg.dt:g} exceeds the stability bound {dt_max:g}")
    window = averaging_window(medium, beams)
    n_steps = int(round(cfg.t_total / cfg.dt))
    n_win = int(math.ceil(window / cfg.dt))
    if n_steps < 3 * n_win:
        raise ValueError(
            f"t_total = {cfg.t_total:g} is shorter than burn-in plus two windows ({3 * window:g})")

    k = np.array(as_kvec(k_perp))
    avec = k + np.array([0.0, 0.0, beams.q1])
    bvec = k + np.array(beams.delta_q)
    n_atoms = int(cfg.n_atoms)
    size = cfg.block_size
    n_chunks = -(-n_atoms // size)
    streams = np.random.SeedSequence(int(cfg.seed)).spawn(n_chunks)

    sums = np.zeros((2, n_chunks, deltas.size), dtype=complex)
    counts = np.zeros(n_chunks)
    finals = []
    for c, ss in enumerate(streams):
        n = min(size, n_atoms - c * size)
        chunk = _Chunk(np.random.Generator(np.random.Philox(ss)), n, deltas,
                       avec, bvec, medium, beams, omega, drive)
        chunk.cache(cfg.dt)
        for step in range(n_steps):
            chunk.step(cfg.dt)
            w = 1 - (n_steps - 1 - step) // n_win
            if w >= 0:
                sums[w, c] += chunk.s31.sum(axis=1)
        counts[c] = n * n_win
        finals.append(chunk)

    means, errs = [], []
    for w in range(2):
        m, e = _jackknife(sums[w], counts)
        means.append(m)
        errs.append(e)
    mean, err = _jackknife(sums.sum(axis=0), 2 * counts)
    scale = medium.coupling / drive
    state = AtomState(
        np.concatenate([f.s31 for f in finals], axis=1),
        np.concatenate([f.s21 for f in finals], axis=1),
        np.concatenate([f.v for f in finals]),
        np.concatenate([f.r for f in finals]),
    )
    result = McResult(deltas, scale * mean, abs(scale) * err, scale * np.array(means),
                      abs(scale) * np.array(errs), state, n_steps, window)
    if check:
        gap = np.abs(result.window_means[0] - result.window_means[1])
        tol = NONSTATIONARY_SIGMAS * np.hypot(*result.window_stderr)
        bad = np.nonzero(gap > tol)[0]
        if bad.size:
            i = bad[0]
            raise NonStationaryError(
                f"averaging windows differ by {gap[i]:.3e} > {tol[i]:.3e} "
                f"at Delta = {deltas[i]:g}")
    return result


def simulate_chi(k_perp, omega, medium, beams, cfg, drive=WEAK_PROBE):
    """
    Monte-Carlo chi31 at ``beams.Delta``.

    Returns
    -------
    (chi, stderr) : (complex, float)
        Susceptibility in 1/m and its jackknife standard error.
    """
    res = simulate_chi_grid([beams.Delta], k_perp, omega, medium, beams, cfg, drive)
    return complex(res.chi[0]), float(res.stderr[0])

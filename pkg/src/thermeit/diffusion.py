"""
Transverse diffusion of stored ground-state coherence and slow-light
propagation under a complex diffusion coefficient.

All evolutions are exact spectral steps on the periodic grid, so they
compose without time-discretisation error.
"""

from dataclasses import dataclass

import numpy as np

from .fields import ComplexField2D, spectral_multiply
from .params import SPEED_OF_LIGHT
from .velocity import one_photon_K


@dataclass(frozen=True)
class StoredCoherence:
    """Ground-state coherence envelope R21 and the elapsed storage time."""

    field: ComplexField2D
    t: float = 0.0

    def __post_init__(self):
        if not self.t >= 0:
            raise ValueError("t must be >= 0")


@dataclass(frozen=True)
class SlowLightParams:
    V_g: float
    Gamma_0: float
    D: float
    q1: float
    Delta: float = 0.0

    def __post_init__(self):
        if not 0 < self.V_g <= SPEED_OF_LIGHT:
            raise ValueError(f"V_g must lie in (0, c], got {self.V_g}")
        if not self.D >= 0:
            raise ValueError("D must be >= 0")
        if not self.q1 > 0:
            raise ValueError("q1 must be > 0")

    @property
    def complex_diffusion(self):
        """D + i V_g / (2 q1), m^2/s."""
        return self.D + 0.5j * self.V_g / self.q1


def evolve_stored(state, dt, medium):
    """
    Advance the stored coherence by ``dt`` in the dark.

    Each transverse Fourier component is multiplied by
    exp(-(D k^2 + Gamma_21) dt); the ground-state rotation exp(-i omega_21 dt)
    is applied as a global phase.
    """
    if not dt >= 0:
        raise ValueError("dt must be >= 0")
    if medium.gamma <= 0:
        raise ValueError("storage diffusion needs gamma > 0")
    f = state.field
    mult = np.exp(-(medium.D * f.k_squared() + medium.Gamma_21) * dt)
    out = spectral_multiply(f, mult)
    if medium.omega_21:
        out = out.with_values(out.values * np.exp(-1j * medium.omega_21 * dt))
    return StoredCoherence(out, state.t + dt)


def group_velocity(medium, beams):
    """
    Slow-light parameters for a plane pump in the diffusion limit.

    c/V_g = 1 + coupling c K^2 |W2|^2 / (Gamma_hom + D dq^2)^2 and
    Gamma_0 = V_g coupling K - Gamma_hom - D dq^2, with K = Re K(Delta_1).
    """
    if medium.gamma <= 0:
        raise ValueError("slow-light diffusion needs gamma > 0")
    K = one_photon_K(beams.Delta_1, medium, beams.q1).real
    dq2 = float(np.sum(np.square(beams.delta_q)))
    width = medium.Gamma_21 + K * beams.pump_power + medium.D * dq2
    ratio = medium.coupling * SPEED_OF_LIGHT * K**2 * beams.pump_power / width**2
    v_g = SPEED_OF_LIGHT / (1.0 + ratio)
    gamma0 = v_g * medium.coupling * K - width
    return SlowLightParams(v_g, gamma0, medium.D, beams.q1, beams.Delta)


def evolve_slow_light(envelope, t, slp):
    """
    Evolve the travelling probe envelope for time ``t``.

    Returns ``(field, carrier)`` where ``field`` has each component scaled
    by exp(-(D + i V_g/(2 q1)) k^2 t) and ``carrier`` is the spatially
    uniform factor exp((i Delta - Gamma_0) t), kept separate.
    """
    if not t >= 0:
        raise ValueError("t must be >= 0")
    mult = np.exp(-slp.complex_diffusion * envelope.k_squared() * t)
    carrier = complex(np.exp((1j * slp.Delta - slp.Gamma_0) * t))
    return spectral_multiply(envelope, mult), carrier

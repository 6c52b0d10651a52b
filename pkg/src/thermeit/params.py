"""Physical parameter containers shared by every engine.

Every frequency-like quantity (rates, detunings, Rabi amplitudes) is an
angular rate in 1/s. Lengths are in metres.
"""

from dataclasses import dataclass, field, replace

import numpy as np

SPEED_OF_LIGHT = 299_792_458.0


def _vec3(value, name):
    arr = np.asarray(value, dtype=float).ravel()
    if arr.size == 2:
        arr = np.array([arr[0], arr[1], 0.0])
    if arr.size != 3 or not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must be a finite 2- or 3-vector, got {value!r}")
    return tuple(float(x) for x in arr)


@dataclass(frozen=True)
class MediumParams:
    """Atomic vapour and buffer-gas constants.

    Attributes
    ----------
    v_th : float
        Thermal velocity sqrt(kT/m), m/s.
    gamma : float
        Velocity relaxation (strong-collision) rate, 1/s.
    Gamma_d : float
        Optical decoherence rate, 1/s.
    Gamma_21 : float
        Ground-state decoherence rate, 1/s.
    omega_21 : float
        Ground-state splitting; only used as a rotation during storage.
    coupling : float
        The g*n0/c prefactor of the susceptibility, 1/(m s).
    """

    v_th: float
    gamma: float
    Gamma_d: float
    Gamma_21: float
    omega_21: float = 0.0
    coupling: float = 1.0

    def __post_init__(self):
        if not self.v_th > 0:
            raise ValueError(f"v_th must be > 0, got {self.v_th}")
        for name in ("gamma", "Gamma_d", "Gamma_21"):
            if not getattr(self, name) >= 0:
                raise ValueError(f"{name} must be >= 0, got {getattr(self, name)}")

    @property
    def D(self):
        """Spatial diffusion coefficient v_th**2 / gamma (inf when gamma = 0)."""
        if self.gamma == 0:
            return float("inf")
        return self.v_th**2 / self.gamma

    def with_(self, **changes):
        return replace(self, **changes)


@dataclass(frozen=True)
class BeamParams:
    """Probe/pump geometry and detunings.

    ``q1`` is the probe wave number along z; ``delta_q`` is the vector
    q1 - q2; ``Omega_2`` is the (complex) pump Rabi amplitude.
    """

    q1: float
    delta_q: tuple = (0.0, 0.0, 0.0)
    Omega_2: complex = 0.0
    Delta_1: float = 0.0
    Delta: float = 0.0

    def __post_init__(self):
        if not self.q1 > 0:
            raise ValueError(f"q1 must be > 0, got {self.q1}")
        object.__setattr__(self, "delta_q", _vec3(self.delta_q, "delta_q"))
        object.__setattr__(self, "Omega_2", complex(self.Omega_2))

    @property
    def pump_power(self):
        """|Omega_2|**2."""
        return abs(self.Omega_2) ** 2

    def with_(self, **changes):
        return replace(self, **changes)


def as_kvec(k_perp):
    """Normalise a transverse wave vector (scalar -> along x, 2-vector -> xy)."""
    arr = np.asarray(k_perp, dtype=float)
    if arr.ndim == 0:
        return (float(arr), 0.0, 0.0)
    return _vec3(arr, "k_perp")

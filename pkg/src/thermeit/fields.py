"""Complex transverse fields on uniform periodic grids."""

from dataclasses import dataclass

import numpy as np

MIN_GRID = 32


def _is_pow2(n):
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class ComplexField2D:
    """
    Complex envelope sampled on a uniform, periodic, row-major grid.

    ``values`` has shape (ny, nx); row index is y, column index is x. The
    grid is centred so that index n//2 is the coordinate origin.
    """

    values: np.ndarray
    dx: float
    dy: float

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex)
        if vals.ndim != 2:
            raise ValueError("field values must be a 2D array")
        ny, nx = vals.shape
        for name, n in (("nx", nx), ("ny", ny)):
            if not _is_pow2(n) or n < MIN_GRID:
                raise ValueError(f"{name} must be a power of two >= {MIN_GRID}, got {n}")
        if not (self.dx > 0 and self.dy > 0):
            raise ValueError("dx and dy must be > 0")
        if not np.all(np.isfinite(vals)):
            raise ValueError("field values must be finite")
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "dx", float(self.dx))
        object.__setattr__(self, "dy", float(self.dy))

    @property
    def nx(self):
        return self.values.shape[1]

    @property
    def ny(self):
        return self.values.shape[0]

    @property
    def energy(self):
        """sum |values|^2 dx dy."""
        return float(np.sum(np.abs(self.values) ** 2) * self.dx * self.dy)

    def coords(self):
        """Coordinate vectors (x, y) with the origin at index n//2."""
        x = (np.arange(self.nx) - self.nx // 2) * self.dx
        y = (np.arange(self.ny) - self.ny // 2) * self.dy
        return x, y

    def wavenumbers(self):
        """DFT angular wave numbers (kx, ky), 2 pi fftfreq(n, d)."""
        kx = 2.0 * np.pi * np.fft.fftfreq(self.nx, self.dx)
        ky = 2.0 * np.pi * np.fft.fftfreq(self.ny, self.dy)
        return kx, ky

    def k_squared(self):
        kx, ky = self.wavenumbers()
        return kx[None, :] ** 2 + ky[:, None] ** 2

    def with_values(self, values):
        return ComplexField2D(values, self.dx, self.dy)


def spectral_multiply(field, multiplier):
    """Apply a k-space multiplier (shape (ny, nx), DFT ordering).

    The field is shifted so its origin sits at index 0 before the transform,
    which keeps the multiplier real-space symmetric about the grid centre.
    """
    shifted = np.fft.ifftshift(field.values)
    out = np.fft.ifft2(np.fft.fft2(shifted) * multiplier)
    return field.with_values(np.fft.fftshift(out))


def gaussian_field(n, dx, sigma, centre=(0.0, 0.0), amplitude=1.0):
    """Isotropic Gaussian exp(-r^2 / (2 sigma^2)) on an n x n grid."""
    x = (np.arange(n) - n // 2) * dx
    xx, yy = np.meshgrid(x - centre[0], x - centre[1])
    return ComplexField2D(amplitude * np.exp(-(xx**2 + yy**2) / (2 * sigma**2)), dx, dx)


def two_line_field(n, dx, width, separation, phase=np.pi):
    """Two parallel Gaussian lines along y, symmetric about x = 0, the
    right one carrying an extra phase."""
    x = (np.arange(n) - n // 2) * dx
    line = lambda c: np.exp(-((x - c) ** 2) / (2 * width**2))  # noqa: E731
    profile = line(-separation / 2) + np.exp(1j * phase) * line(separation / 2)
    return ComplexField2D(np.tile(profile, (n, 1)), dx, dx)


def annular_mode(n, dx, ring=5):
    """
    Sum of the grid plane waves whose integer index vectors (mx, my) satisfy
    mx^2 + my^2 = ring^2: a single-|k| ("non-diffracting") pattern.
    """
    k = 2.0 * np.pi * np.fft.fftfreq(n, dx)
    x = (np.arange(n) - n // 2) * dx
    xx, yy = np.meshgrid(x, x)
    values = np.zeros((n, n), dtype=complex)
    for mx in range(-ring, ring + 1):
        for my in range(-ring, ring + 1):
            if mx * mx + my * my == ring * ring:
                values += np.exp(1j * (k[mx % n] * xx + k[my % n] * yy))
    return ComplexField2D(values, dx, dx)

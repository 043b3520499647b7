"""Periodic grid, discrete fields, and the spectral helpers built on them."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np


@dataclass(frozen=True)
class Grid:
    """Uniform periodic grid on [-L/2, L/2) with standard FFT wavenumbers."""

    length: float
    n_points: int

    def __post_init__(self):
        if not self.length > 0:
            raise ValueError(f"grid length must be positive, got {self.length}")
        n = self.n_points
        if n < 64 or n & (n - 1):
            raise ValueError(f"n_points must be a power of two >= 64, got {n}")

    @property
    def dx(self) -> float:
        return self.length / self.n_points

    @cached_property
    def x(self) -> np.ndarray:
        return -0.5 * self.length + self.dx * np.arange(self.n_points)

    @cached_property
    def xi(self) -> np.ndarray:
        """Wavenumbers 2*pi*k/L in FFT order (k = 0..N/2-1, -N/2..-1)."""
        return 2.0 * np.pi * np.fft.fftfreq(self.n_points, d=self.dx)

    @cached_property
    def mode_index(self) -> np.ndarray:
        """Integer mode numbers k in FFT order."""
        return np.fft.fftfreq(self.n_points, d=1.0 / self.n_points)

    # quadrature: rectangle rule, which is the trapezoid rule on a periodic
    # domain and spectrally accurate for smooth periodic fields

    def integrate(self, values) -> float:
        return float(self.dx * np.sum(values))

    def l2_norm_sq(self, values) -> float:
        v = np.asarray(values)
        return float(self.dx * np.sum(v * v))

    def lp_norm_pp(self, values, q: float) -> float:
        """Integral of |v|^q."""
        return float(self.dx * np.sum(np.abs(values) ** q))

    def inner(self, f, g) -> float:
        return float(self.dx * np.sum(np.asarray(f) * np.asarray(g)))

    # spectral derivatives

    @cached_property
    def _odd_mult(self) -> np.ndarray:
        m = 1j * self.xi
        m[self.n_points // 2] = 0.0  # Nyquist mode has no well-defined odd derivative
        return m

    def derivative(self, values, order: int = 1) -> np.ndarray:
        hat = np.fft.fft(values)
        mult = self._odd_mult if order % 2 else 1j * self.xi
        return np.fft.ifft(mult**order * hat).real

    # Parseval-side norms on raw spectra

    @property
    def _parseval(self) -> float:
        return self.length / self.n_points**2

    def l2_sq_hat(self, hat) -> float:
        return float(self._parseval * np.sum(np.abs(hat) ** 2))

    def h1_sq_hat(self, hat) -> float:
        return float(self._parseval * np.sum((1.0 + self.xi**2) * np.abs(hat) ** 2))

    def inner_hat(self, f_hat, g_hat, weight=None) -> float:
        prod = f_hat * np.conj(g_hat)
        if weight is not None:
            prod = weight * prod
        return float(self._parseval * np.real(np.sum(prod)))


@dataclass(frozen=True, eq=False)
class StatePair:
    """Fields (u, w) of the first-order evolution system at one time."""

    grid: Grid
    u: np.ndarray
    w: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        for name, f in (("u", self.u), ("w", self.w)):
            if np.shape(f) != (self.grid.n_points,):
                raise ValueError(
                    f"{name} must have shape ({self.grid.n_points},), got {np.shape(f)}"
                )

    @cached_property
    def u_hat(self) -> np.ndarray:
        return np.fft.fft(self.u)

    @cached_property
    def w_hat(self) -> np.ndarray:
        return np.fft.fft(self.w)

    @classmethod
    def zero(cls, grid: Grid) -> "StatePair":
        return cls(grid, np.zeros(grid.n_points), np.zeros(grid.n_points), 0.0)

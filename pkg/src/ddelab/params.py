"""Model parameters and the per-velocity context they induce.

The model is u_tt - u_xx + a*u_xxxx - b*u_xxtt = -(|u|^(p-1) u)_xx with
a > b >= 0 and p > 1.  Traveling waves exist for c^2 < 1; everything
downstream works with A = 1 - c^2 and B = a - b*c^2, both positive.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class ModelParams:
    """Dispersion coefficients (a, b) and nonlinearity exponent p."""

    a: float
    b: float
    p: float

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError(f"a must be positive, got {self.a}")
        if self.b < 0:
            raise ValueError(f"b must be nonnegative, got {self.b}")
        if not self.a > self.b:
            raise ValueError(f"need a > b, got a={self.a}, b={self.b}")
        if not self.p > 1:
            raise ValueError(f"p must exceed 1, got {self.p}")

    @property
    def mu(self) -> float:
        """Dispersion ratio b/a, always in [0, 1)."""
        return self.b / self.a


@dataclass(frozen=True)
class WaveContext:
    """A parameter set together with one admissible wave velocity."""

    params: ModelParams
    c: float

    def __post_init__(self):
        if not self.c * self.c < 1.0:
            raise ValueError(f"c^2 must be < 1 for a traveling wave, got c={self.c}")

    @classmethod
    def of(cls, a: float, b: float, p: float, c: float) -> "WaveContext":
        return cls(ModelParams(a, b, p), c)

    @property
    def A(self) -> float:
        """1 - c^2."""
        return 1.0 - self.c * self.c

    @property
    def B(self) -> float:
        """a - b*c^2; positive whenever a > b and c^2 < 1."""
        return self.params.a - self.params.b * self.c * self.c

"""Exceptions shared by the wave, stability, and simulation modules."""


class TailTooFatError(ValueError):
    """Profile tails have not decayed at the domain boundary.

    Carries the measured boundary/peak ratio and a domain length that would
    fit the tails, so callers can retry or report a fix.
    """

    def __init__(self, ratio: float, tol: float, suggested_length: float):
        self.ratio = ratio
        self.tol = tol
        self.suggested_length = suggested_length
        super().__init__(
            f"boundary/peak amplitude ratio {ratio:.3e} exceeds {tol:.1e}; "
            f"a domain of length >= {suggested_length:.1f} would fit the tails"
        )


class DegenerateVelocityError(ValueError):
    """The requested quantity is singular at zero wave velocity."""


class NonFiniteError(ArithmeticError):
    """A field or transform produced NaN or Inf."""


class StepRejectedError(ValueError):
    """Requested time step exceeds the explicit-stability bound."""

    def __init__(self, dt: float, bound: float):
        self.dt = dt
        self.bound = bound
        super().__init__(f"dt={dt:.6g} exceeds the RK4 stability bound {bound:.6g}")


class InconsistentRootCountError(RuntimeError):
    """Polished roots and the sign scan disagree about roots in (0, 1)."""


class NotApplicableError(ValueError):
    """The requested quantity is not defined for these parameters."""

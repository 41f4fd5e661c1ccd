"""Exception types raised by the numerical routines."""


class DomainError(ValueError):
    """An argument lies outside the domain where a formula is defined."""


class DegeneratePointError(ArithmeticError):
    """The Hamiltonian radicand vanished (square-root branch point)."""


class ShootingError(RuntimeError):
    """The shooting iteration did not converge.

    Attributes
    ----------
    residual : float
        Max-norm of the boundary mismatch at the last iterate.
    last_iterate : tuple
        The last ``(r, theta)`` tried.
    """

    def __init__(self, message, residual=float("nan"), last_iterate=None):
        super().__init__(message)
        self.residual = residual
        self.last_iterate = last_iterate


class FocalPointNotFound(RuntimeError):
    """No sign change of the linearized perturbation on the scan interval."""


class IntegrationError(RuntimeError):
    """An ODE integration failed or left its admissible region."""


class DivergenceError(RuntimeError):
    """A path-following iterate violated the worst-case decrement bound."""

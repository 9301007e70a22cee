class QLimitError(Exception):
    pass


class ValidationError(QLimitError, ValueError):
    """Invalid parameters or configuration."""


class DomainError(QLimitError, ValueError):
    """Evaluation outside the domain of a response function (e.g. omega = 0)."""


class SingularLoopError(QLimitError, ArithmeticError):
    """Closed-loop factor 1 - chi_qq chi_FF vanishes (optical-spring pole)."""

    def __init__(self, omega):
        self.omega = omega
        super().__init__(f"singular loop factor |1 - chi_qq chi_FF| < 1e-9 at omega = {float(omega):.6g} rad/s")


class BlindQuadratureError(QLimitError, ArithmeticError):
    """The chosen readout quadrature carries no signal."""


class UnboundedQCRBError(QLimitError, ArithmeticError):
    """S_FF vanishes, so the bound hbar^2 / (4 S_FF) is unbounded."""

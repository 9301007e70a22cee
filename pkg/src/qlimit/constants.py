"""Physical constants (SI)."""

HBAR = 1.054571817e-34  # J s
C = 299792458.0  # m / s
